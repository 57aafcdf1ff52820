#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "eseplab/core.hpp"

namespace testutil {

inline eseplab::ModelParams esep(double eta, double alpha, double beta, std::int64_t q0 = 0, std::int64_t n0 = 0) {
  eseplab::ModelParams p;
  p.baseline = eta;
  p.jump = alpha;
  p.expire_rate = beta;
  p.q0 = q0;
  p.n0 = n0;
  return eseplab::validate_params(p, eseplab::ModelTag::Esep);
}

inline eseplab::ModelParams hawkes(double lambda, double alpha, double beta) {
  eseplab::ModelParams p;
  p.baseline = lambda;
  p.jump = alpha;
  p.decay_rate = beta;
  return eseplab::validate_params(p, eseplab::ModelTag::Hawkes);
}

inline eseplab::ModelParams hesep(double nu, double alpha, double beta, double mu) {
  eseplab::ModelParams p;
  p.baseline = nu;
  p.jump = alpha;
  p.decay_rate = beta;
  p.expire_rate = mu;
  return eseplab::validate_params(p, eseplab::ModelTag::Hesep);
}

inline eseplab::ModelParams esep_b(double eta, double alpha, double beta, std::int64_t c) {
  eseplab::ModelParams p;
  p.baseline = eta;
  p.jump = alpha;
  p.expire_rate = beta;
  p.capacity = c;
  return eseplab::validate_params(p, eseplab::ModelTag::EsepB);
}

struct Stats {
  double mean = 0.0;
  double var = 0.0;
  double se = 0.0;
};

inline Stats stats(const std::vector<double>& x) {
  Stats s;
  for (double v : x) s.mean += v;
  s.mean /= static_cast<double>(x.size());
  for (double v : x) s.var += (v - s.mean) * (v - s.mean);
  s.var /= static_cast<double>(x.size() - 1);
  s.se = std::sqrt(s.var / static_cast<double>(x.size()));
  return s;
}

// NegBin(r, p) with P(k) = C(k+r-1, k) (1-p)^r p^k by the ratio recurrence
inline std::vector<double> negbin_by_recurrence(double r, double p, std::int64_t k_max) {
  std::vector<double> out(static_cast<std::size_t>(k_max) + 1);
  out[0] = std::pow(1.0 - p, r);
  for (std::int64_t k = 1; k <= k_max; ++k)
    out[static_cast<std::size_t>(k)] = out[static_cast<std::size_t>(k - 1)] * (k - 1 + r) / k * p;
  return out;
}

// composite Simpson on [a, b]
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// plain RK4 with a fixed step, independent of the library integrator
inline std::vector<double> rk4(const std::function<std::vector<double>(double, const std::vector<double>&)>& f,
                               std::vector<double> y, double t1, int steps) {
  const double h = t1 / steps;
  double t = 0.0;
  auto axpy = [](const std::vector<double>& a, const std::vector<double>& b, double c) {
    std::vector<double> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + c * b[i];
    return r;
  };
  for (int s = 0; s < steps; ++s) {
    auto k1 = f(t, y);
    auto k2 = f(t + h / 2, axpy(y, k1, h / 2));
    auto k3 = f(t + h / 2, axpy(y, k2, h / 2));
    auto k4 = f(t + h, axpy(y, k3, h));
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    t += h;
  }
  return y;
}

}  // namespace testutil
