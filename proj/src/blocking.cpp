#include "eseplab/blocking.hpp"

#include <cmath>
#include <limits>

#include "eseplab/numerics.hpp"
#include "eseplab/simulators.hpp"

namespace eseplab {

namespace {

// modified Lentz evaluation of the incomplete beta continued fraction
double beta_continued_fraction(double z, double a, double b) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * z / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 100000; ++m) {
    const double md = m, m2 = 2.0 * m;
    double aa = md * (b - md) * z / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + md) * (qab + md) * z / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) return h;
  }
  throw Error(ErrorCode::DomainViolation, "incomplete beta continued fraction did not converge");
}

void require_capacity(const ModelParams& p) {
  if (!p.capacity) throw Error(ErrorCode::CapacityMissing, "esep_b needs a finite capacity");
}

}  // namespace

IncompleteBeta incomplete_beta(double z, double a, double b) {
  if (!(z >= 0.0 && z <= 1.0) || !(a > 0.0) || !(b > 0.0)) {
    throw Error(ErrorCode::DomainViolation, "incomplete beta needs z in [0,1], a > 0, b > 0");
  }
  if (z == 0.0) return {0.0, 1.0};
  if (z == 1.0) return {1.0, 0.0};
  const double log_front =
      log_gamma(a + b) - log_gamma(a) - log_gamma(b) + a * std::log(z) + b * std::log1p(-z);
  const double front = std::exp(log_front);
  if (z < (a + 1.0) / (a + b + 2.0)) {
    const double v = front * beta_continued_fraction(z, a, b) / a;
    return {v, 1.0 - v};
  }
  const double w = front * beta_continued_fraction(1.0 - z, b, a) / b;
  return {1.0 - w, w};
}

double regularized_incomplete_beta(double z, double a, double b) { return incomplete_beta(z, a, b).value; }

double negbin_cdf(std::int64_t k, double r, double p) {
  if (k < 0) return 0.0;
  if (p == 0.0) return 1.0;
  return incomplete_beta(p, static_cast<double>(k) + 1.0, r).complement;
}

BlockingSummary esepb_steady(const ModelParams& p) {
  require_capacity(p);
  const ModelParams v = validate_params(p, ModelTag::EsepB);
  if (!v.stable) throw Error(ErrorCode::Unstable, "esepb_steady needs expire_rate > jump");
  const std::int64_t c = *v.capacity;
  BlockingSummary s;
  if (v.jump == 0.0) {
    const double m = v.baseline / v.expire_rate;
    double total = 0.0;
    for (std::int64_t k = 0; k <= c; ++k) {
      s.pmf.probs.push_back(std::exp(static_cast<double>(k) * std::log(m) - m - log_factorial(k)));
      total += s.pmf.probs.back();
    }
    double m1 = 0.0, m2 = 0.0;
    for (std::int64_t k = 0; k <= c; ++k) {
      double& pk = s.pmf.probs[static_cast<std::size_t>(k)];
      pk /= total;
      m1 += static_cast<double>(k) * pk;
      m2 += static_cast<double>(k * k) * pk;
    }
    s.mean = m1;
    s.variance = m2 - m1 * m1;
    s.block_fraction = s.pmf.probs.back();
    return s;
  }
  const double r = v.baseline / v.jump;
  const double prob = v.jump / v.expire_rate;
  const double norm = negbin_cdf(c, r, prob);
  for (std::int64_t k = 0; k <= c; ++k) s.pmf.probs.push_back(negbin_pmf(k, r, prob) / norm);
  const double scale1 = v.baseline / (v.expire_rate - v.jump);
  const double scale2 = scale1 * (v.baseline + v.jump) / (v.expire_rate - v.jump);
  s.mean = scale1 * negbin_cdf(c - 1, r + 1.0, prob) / norm;
  const double factorial2 = scale2 * negbin_cdf(c - 2, r + 2.0, prob) / norm;
  s.variance = factorial2 + s.mean - s.mean * s.mean;
  s.block_fraction = (v.baseline + v.jump * static_cast<double>(c)) * s.pmf.probs.back() /
                     (v.baseline + v.jump * s.mean);
  return s;
}

double blocking_fraction(const ModelParams& p) { return esepb_steady(p).block_fraction; }

SweepReport pasta_ratio_sweep(const ModelParams& p, const std::vector<std::int64_t>& n_list, PastaOptions opts) {
  require_capacity(p);
  SweepReport report;
  report.monotone_expected = true;
  for (std::int64_t n : n_list) {
    if (n < 1) throw Error(ErrorCode::DomainViolation, "scales must be >= 1");
    ModelParams scaled = p;
    scaled.baseline = p.baseline * static_cast<double>(n);
    scaled.capacity = *p.capacity * n;
    scaled.intensity0.reset();
    const BlockingSummary s = esepb_steady(scaled);
    const double at_cap = s.pmf.probs.back();
    const double ratio = at_cap > 0.0 ? s.block_fraction / at_cap : std::numeric_limits<double>::quiet_NaN();
    report.rows.push_back({static_cast<double>(n), "ratio", ratio, 1, opts.seed});
    report.rows.push_back({static_cast<double>(n), "block_fraction", s.block_fraction, 1, opts.seed});
    report.rows.push_back({static_cast<double>(n), "capacity_probability", at_cap, 1, opts.seed});
    if (opts.simulated_events > 0) {
      const ModelParams v = validate_params(scaled, ModelTag::EsepB);
      const double rate = v.baseline + (v.jump + v.expire_rate) * s.mean;
      const double burn = default_burn_in(v, ModelTag::EsepB);
      const double horizon = static_cast<double>(opts.simulated_events) / rate;
      EsepStepper st(v, ModelTag::EsepB, {opts.seed, static_cast<std::uint64_t>(n)});
      st.advance_to(burn);
      const auto b0 = st.blocked(), a0 = st.admitted();
      const double c0 = st.time_at_capacity();
      st.advance_to(burn + horizon);
      const double blocked = static_cast<double>(st.blocked() - b0);
      const double attempts = blocked + static_cast<double>(st.admitted() - a0);
      const double cap_frac = (st.time_at_capacity() - c0) / horizon;
      const double sim = attempts > 0.0 && cap_frac > 0.0 ? (blocked / attempts) / cap_frac
                                                          : std::numeric_limits<double>::quiet_NaN();
      report.rows.push_back({static_cast<double>(n), "simulated_ratio", sim, opts.simulated_events, opts.seed});
    }
  }
  report.sort_rows();
  return report;
}

}  // namespace eseplab
