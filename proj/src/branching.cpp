#include "eseplab/branching.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "eseplab/numerics.hpp"

namespace eseplab {

namespace {

constexpr double kTail = 1e-12;
constexpr std::int64_t kMaxSupport = 5'000'000;

struct Rates {
  double alpha;
  double beta;
};

Rates branch_rates(const ModelParams& p, bool need_positive_jump = false) {
  const Rates r{p.jump, p.expire_rate + p.decay_rate};
  if (r.alpha < 0.0) throw Error(ErrorCode::NonPositiveRate, "jump must be >= 0");
  if (need_positive_jump && r.alpha == 0.0) throw Error(ErrorCode::NonPositiveRate, "jump must be > 0");
  if (!(r.beta > r.alpha)) throw Error(ErrorCode::Unstable, "branching laws need beta > alpha");
  return r;
}

void finish(DiscreteLaw& law) {
  law.tail_mass = std::max(0.0, 1.0 - law.mass());
}

DiscreteLaw poisson_law(double mean) {
  DiscreteLaw law;
  double acc = 0.0;
  for (std::int64_t k = 0; k < kMaxSupport; ++k) {
    const double pk = mean == 0.0 ? (k == 0 ? 1.0 : 0.0)
                                  : std::exp(static_cast<double>(k) * std::log(mean) - mean - log_factorial(k));
    law.pmf.push_back(pk);
    acc += pk;
    if (static_cast<double>(k) > mean && 1.0 - acc < kTail) break;
  }
  law.mean = mean;
  law.variance = mean;
  finish(law);
  return law;
}

}  // namespace

double DiscreteLaw::mass() const {
  double s = 0.0;
  for (double v : pmf) s += v;
  return s;
}

double DiscreteLaw::pgf(double z) const {
  double s = 0.0;
  for (std::size_t k = pmf.size(); k-- > 0;) s = s * z + pmf[k];
  return s;
}

double DiscreteLaw::tail_beyond(std::int64_t k) const {
  double s = tail_mass;
  for (std::size_t j = static_cast<std::size_t>(std::max<std::int64_t>(k + 1, 0)); j < pmf.size(); ++j) s += pmf[j];
  return s;
}

double DiscreteLaw::table_mean() const {
  double s = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) s += static_cast<double>(k) * pmf[k];
  return s;
}

DiscreteLaw offspring_law(const ModelParams& p, BranchModel model) {
  const Rates r = branch_rates(p);
  if (model == BranchModel::Hawkes) return poisson_law(r.alpha / r.beta);
  DiscreteLaw law;
  const double success = r.beta / (r.alpha + r.beta);
  const double fail = r.alpha / (r.alpha + r.beta);
  double tail = 1.0;
  for (std::int64_t k = 0; k < kMaxSupport; ++k) {
    law.pmf.push_back(success * std::pow(fail, static_cast<double>(k)));
    tail *= fail;
    if (tail < kTail) break;
  }
  law.tail_mass = tail;
  law.mean = r.alpha / r.beta;
  law.variance = r.alpha * (r.alpha + r.beta) / (r.beta * r.beta);
  return law;
}

DiscreteLaw progeny_law(const ModelParams& p, BranchModel model, std::int64_t k_max) {
  const Rates r = branch_rates(p);
  DiscreteLaw law;
  law.pmf.push_back(0.0);
  const double m = r.alpha / r.beta;
  law.mean = r.beta / (r.beta - r.alpha);
  double ratio;
  std::function<double(std::int64_t)> log_pmf;
  if (model == BranchModel::Esep) {
    const double q = r.beta / (r.beta + r.alpha);
    ratio = 4.0 * q * (1.0 - q);
    law.variance = (r.alpha * (r.alpha + r.beta) / (r.beta * r.beta)) / std::pow(1.0 - m, 3.0);
    log_pmf = [q](std::int64_t k) {
      const double kd = static_cast<double>(k);
      return -std::log(kd) + log_gamma(2.0 * kd - 1.0) - 2.0 * log_gamma(kd) + kd * std::log(q) +
             (kd - 1.0) * std::log1p(-q);
    };
  } else {
    ratio = m * std::exp(1.0 - m);
    law.variance = m / std::pow(1.0 - m, 3.0);
    log_pmf = [m](std::int64_t k) {
      const double kd = static_cast<double>(k);
      if (m == 0.0) return k == 1 ? 0.0 : -INFINITY;
      return -m * kd + (kd - 1.0) * std::log(m * kd) - log_factorial(k);
    };
  }
  for (std::int64_t k = 1; k < kMaxSupport; ++k) {
    const double pk = std::exp(log_pmf(k));
    law.pmf.push_back(pk);
    if (k_max > 0) {
      if (k >= k_max) break;
    } else if (pk * ratio / (1.0 - ratio) < kTail || (m == 0.0)) {
      break;
    }
  }
  finish(law);
  return law;
}

DiscreteLaw generations_law_esep(const ModelParams& p, std::int64_t k_max) {
  const Rates r = branch_rates(p);
  const double rho = r.alpha / r.beta;
  // P(G > k) = rho^k (1 - rho) / (1 - rho^{k+1})
  auto survive = [rho](std::int64_t k) {
    const double rk = std::pow(rho, static_cast<double>(k));
    return rk * (1.0 - rho) / (1.0 - rk * rho);
  };
  DiscreteLaw law;
  law.pmf.push_back(0.0);
  for (std::int64_t k = 1; k < kMaxSupport; ++k) {
    law.pmf.push_back(survive(k - 1) - survive(k));
    if (k_max > 0 ? k >= k_max : survive(k) < kTail) {
      law.tail_mass = survive(k);
      break;
    }
  }
  double mean = 0.0;
  for (std::int64_t k = 0; k < 100000; ++k) {
    const double s = survive(k);
    mean += s;
    if (s < 1e-17) break;
  }
  law.mean = mean;
  return law;
}

double generations_cdf_hawkes(const ModelParams& p, std::int64_t k) {
  const Rates r = branch_rates(p);
  if (k < 0) throw Error(ErrorCode::DomainViolation, "generation index must be >= 0");
  const double a = r.alpha / r.beta;
  double f = 0.0;
  for (std::int64_t j = 1; j <= k; ++j) f = std::exp(-a * (1.0 - f));
  return f;
}

DiscreteLaw generations_law_hawkes(const ModelParams& p, std::int64_t k_max) {
  const Rates r = branch_rates(p);
  const double a = r.alpha / r.beta;
  DiscreteLaw law;
  law.pmf.push_back(0.0);
  double prev = 0.0, mean = 0.0;
  for (std::int64_t k = 1; k < kMaxSupport; ++k) {
    const double f = std::exp(-a * (1.0 - prev));
    law.pmf.push_back(f - prev);
    mean += 1.0 - prev;
    prev = f;
    if (k_max > 0 ? k >= k_max : 1.0 - f < kTail) break;
  }
  law.tail_mass = 1.0 - prev;
  law.mean = mean + law.tail_mass;
  return law;
}

double family_duration_mean(const ModelParams& p) {
  const Rates r = branch_rates(p);
  if (r.alpha == 0.0) return 1.0 / r.beta;
  return -std::log1p(-r.alpha / r.beta) / r.alpha;
}

DiscreteLaw active_families_law(const ModelParams& p) {
  branch_rates(p);
  if (!(p.baseline >= 0.0)) throw Error(ErrorCode::NonPositiveRate, "baseline must be >= 0");
  return poisson_law(p.baseline * family_duration_mean(p));
}

DiscreteLaw logarithmic_law(const ModelParams& p, std::int64_t k_max) {
  const Rates r = branch_rates(p, true);
  const double a = r.alpha / r.beta;
  const double norm = -std::log1p(-a);
  DiscreteLaw law;
  law.pmf.push_back(0.0);
  for (std::int64_t k = 1; k < kMaxSupport; ++k) {
    const double kd = static_cast<double>(k);
    const double pk = std::exp(kd * std::log(a) - std::log(kd)) / norm;
    law.pmf.push_back(pk);
    if (k_max > 0 ? k >= k_max : pk * a / (1.0 - a) < kTail) break;
  }
  finish(law);
  law.mean = a / ((1.0 - a) * norm);
  law.variance = a * (norm - a) / ((1.0 - a) * (1.0 - a) * norm * norm);
  return law;
}

}  // namespace eseplab
