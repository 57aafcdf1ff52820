#include "eseplab/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "eseplab/blocking.hpp"
#include "eseplab/numerics.hpp"

namespace eseplab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

TransformResult flagged(TransformResult r, ErrorCode code, std::optional<double> bound = std::nullopt) {
  r.value = kNaN;
  r.in_domain = false;
  r.violation = code;
  if (bound) r.domain_bound = bound;
  return r;
}

ModelParams esep_params(const ModelParams& p, bool need_stable) {
  ModelParams v = validate_params(p, ModelTag::Esep);
  if (need_stable && !v.stable) throw Error(ErrorCode::Unstable, "needs expire_rate > jump");
  return v;
}

void check_time(double t) {
  if (t < 0.0) throw Error(ErrorCode::NegativeTime, "t must be >= 0");
}

double ipow(double base, std::int64_t k) { return std::pow(base, static_cast<double>(k)); }

// log(cosh x + y sinh x); nullopt when nonpositive
std::optional<double> log_cosh_mix(double x, double y) {
  if (x < 20.0) {
    const double c = std::cosh(x) + y * std::sinh(x);
    if (!(c > 0.0)) return std::nullopt;
    return std::log(c);
  }
  const double w = (1.0 + y) + (1.0 - y) * std::exp(-2.0 * x);
  if (!(w > 0.0)) return std::nullopt;
  return x + std::log(w) - std::log(2.0);
}

// x (1 - e^{-x}) / x and (x - 1 + e^{-x}) / x^2 with small-x series
double phi1(double x) {
  if (std::fabs(x) < 1e-5) return 1.0 - x / 2.0 + x * x / 6.0;
  return -std::expm1(-x) / x;
}

double phi2(double x) {
  if (std::fabs(x) < 1e-2) {
    return 0.5 - x / 6.0 + x * x / 24.0 - x * x * x / 120.0 + x * x * x * x / 720.0;
  }
  return (x + std::expm1(-x)) / (x * x);
}

}  // namespace

double TransformResult::checked() const {
  if (!in_domain) {
    throw Error(violation.value_or(ErrorCode::DomainViolation), "transform argument outside its validity domain");
  }
  return value;
}

double PmfTable::mass() const {
  double s = 0.0;
  for (double v : probs) s += v;
  return s;
}

TransformResult esep_qt_pgf(const ModelParams& p, double z, double t) {
  const ModelParams v = esep_params(p, true);
  check_time(t);
  TransformResult r;
  r.argument = {z, t};
  const double a = v.jump, b = v.expire_rate, eta = v.baseline;
  if (a == 0.0) {
    const double e = std::exp(-b * t);
    r.value = ipow(1.0 - (1.0 - z) * e, v.q0) * std::exp(eta * (z - 1.0) * (-std::expm1(-b * t)) / b);
    return r;
  }
  r.domain_bound = b / a;
  if (z >= b / a) return flagged(r, ErrorCode::DomainViolation);
  const double e = std::exp(-(b - a) * t);
  const double den = b - a * z - a * (1.0 - z) * e;
  if (std::fabs(den) < 1e-12) return flagged(r, ErrorCode::DomainViolation);
  const double big_a = (b - a * z - b * (1.0 - z) * e) / den;
  const double base = (b - a * big_a) / (b - a * z);
  if (!(base > 0.0)) return flagged(r, ErrorCode::DomainViolation);
  r.value = ipow(big_a, v.q0) * std::exp(eta / a * std::log(base));
  return r;
}

TransformResult esep_transient_mgf(const ModelParams& p, double theta, double t) {
  const ModelParams v = esep_params(p, true);
  check_time(t);
  TransformResult r;
  r.argument = {theta, t};
  if (v.jump > 0.0) {
    const double bound = std::log(v.expire_rate / v.jump) / v.jump;
    r.domain_bound = bound;
    if (theta >= bound) return flagged(r, ErrorCode::DomainViolation);
  }
  const TransformResult q = esep_qt_pgf(v, std::exp(v.jump * theta), t);
  if (!q.in_domain) return flagged(r, q.violation.value_or(ErrorCode::DomainViolation));
  r.value = std::exp(theta * v.baseline) * q.value;
  return r;
}

double negbin_pmf(std::int64_t k, double r, double prob) {
  if (k < 0) return 0.0;
  if (prob == 0.0) return k == 0 ? 1.0 : 0.0;
  const double kd = static_cast<double>(k);
  return std::exp(log_gamma(kd + r) - log_gamma(r) - log_factorial(k) + r * std::log1p(-prob) + kd * std::log(prob));
}

PmfTable esep_steady_negbin(const ModelParams& p, std::int64_t k_max) {
  const ModelParams v = esep_params(p, true);
  PmfTable table;
  const Moments m = esep_steady_moments(v);
  auto pmf = [&v](std::int64_t k) {
    if (v.jump == 0.0) {
      const double mean = v.baseline / v.expire_rate;
      return std::exp(static_cast<double>(k) * std::log(mean) - mean - log_factorial(k));
    }
    return negbin_pmf(k, v.baseline / v.jump, v.jump / v.expire_rate);
  };
  double acc = 0.0;
  for (std::int64_t k = 0;; ++k) {
    const double pk = pmf(k);
    table.probs.push_back(pk);
    acc += pk;
    if (k_max > 0) {
      if (k >= k_max) break;
    } else if (static_cast<double>(k) > m.mean && 1.0 - acc < 1e-13) {
      break;
    }
  }
  const auto big_k = static_cast<std::int64_t>(table.probs.size()) - 1;
  if (v.jump == 0.0) {
    table.truncation_mass = std::max(0.0, 1.0 - acc);
  } else {
    table.truncation_mass =
        regularized_incomplete_beta(v.jump / v.expire_rate, static_cast<double>(big_k + 1), v.baseline / v.jump);
  }
  return table;
}

Moments esep_steady_moments(const ModelParams& p) {
  const ModelParams v = esep_params(p, true);
  const double gap = v.expire_rate - v.jump;
  return {v.baseline / gap, v.baseline * v.expire_rate / (gap * gap)};
}

TransformResult esep_counting_pgf(const ModelParams& p, double z, double t) {
  const ModelParams v = esep_params(p, false);
  check_time(t);
  TransformResult r;
  r.argument = {z, t};
  const double a = v.jump, b = v.expire_rate, eta = v.baseline;
  const double zn = ipow(z, v.n0);
  if (a == 0.0) {
    r.value = zn * std::exp(eta * (z - 1.0) * t);
    return r;
  }
  r.domain_bound = (b + a) * (b + a) / (4.0 * a * b);
  const double radicand = (b + a) * (b + a) - 4.0 * a * b * z;
  if (!(radicand > 0.0)) return flagged(r, ErrorCode::BranchViolation);
  const double delta = std::sqrt(radicand);
  const double y = (b + a - 2.0 * a * z) / delta;
  const double x = 0.5 * delta * t;
  const double tt = std::tanh(x);
  const auto lc = log_cosh_mix(x, y);
  if (!lc) return flagged(r, ErrorCode::DomainViolation);
  const double qden = 1.0 + y * tt;
  if (std::fabs(qden) < 1e-12) return flagged(r, ErrorCode::DomainViolation);
  const double qfac = (1.0 + tt * (b - a) / delta) / qden;
  r.value = zn * ipow(qfac, v.q0) * std::exp(eta * (b - a) * t / (2.0 * a) - eta / a * *lc);
  return r;
}

TransformResult esep_counting_pgf_raw(const ModelParams& p, double z, double t) {
  const ModelParams v = esep_params(p, false);
  check_time(t);
  TransformResult r;
  r.argument = {z, t};
  const double a = v.jump, b = v.expire_rate, eta = v.baseline;
  if (a == 0.0) return esep_counting_pgf(v, z, t);
  r.domain_bound = (b + a) * (b + a) / (4.0 * a * b);
  const double radicand = (b + a) * (b + a) - 4.0 * a * b * z;
  if (!(radicand > 0.0)) return flagged(r, ErrorCode::BranchViolation);
  if (z == 0.0 && v.n0 < v.q0) return flagged(r, ErrorCode::DomainViolation);
  const double delta = std::sqrt(radicand);
  const double y = (b + a - 2.0 * a * z) / delta;
  const double e = std::exp(t * delta);
  const double den = (1.0 - y) + (1.0 + y) * e;
  if (std::fabs(den) < 1e-12) return flagged(r, ErrorCode::DomainViolation);
  const double first = 2.0 * std::exp(0.5 * t * delta) / den;
  if (!(first > 0.0)) return flagged(r, ErrorCode::DomainViolation);
  const double bracket = (b + a) / (2.0 * a) + delta / (2.0 * a) * ((1.0 - y) - (1.0 + y) * e) / den;
  r.value = std::exp(eta * (b - a) * t / (2.0 * a)) * std::pow(first, eta / a) * ipow(bracket, v.q0) *
            ipow(z, v.n0 - v.q0);
  return r;
}

namespace {

std::int64_t initial_departures(const ModelParams& v) {
  if (v.n0 < v.q0) throw Error(ErrorCode::InvalidInitialState, "joint Q/D transform needs n0 >= q0");
  return v.n0 - v.q0;
}

}  // namespace

TransformResult joint_qd_pgf(const ModelParams& p, double z1, double z2, double t) {
  const ModelParams v = esep_params(p, false);
  check_time(t);
  const std::int64_t d0 = initial_departures(v);
  TransformResult r;
  r.argument = {z1, z2, t};
  const double a = v.jump, b = v.expire_rate, eta = v.baseline;
  if (a == 0.0) {
    const double e = std::exp(-b * t);
    const double stay = b > 0.0 ? -std::expm1(-b * t) / b : t;
    r.value = ipow(z2, d0) * ipow(z1 * e + z2 * (1.0 - e), v.q0) *
              std::exp(eta * ((z1 - z2) * stay + (z2 - 1.0) * t));
    return r;
  }
  r.domain_bound = (b + a) * (b + a) / (4.0 * a * b);
  const double radicand = (b + a) * (b + a) - 4.0 * a * b * z2;
  if (!(radicand > 0.0)) return flagged(r, ErrorCode::BranchViolation);
  const double delta = std::sqrt(radicand);
  const double y = (b + a - 2.0 * a * z1) / delta;
  const double x = 0.5 * delta * t;
  const double tt = std::tanh(x);
  const auto lc = log_cosh_mix(x, y);
  if (!lc) return flagged(r, ErrorCode::DomainViolation);
  const double qden = 1.0 + y * tt;
  if (std::fabs(qden) < 1e-12) return flagged(r, ErrorCode::DomainViolation);
  const double qfac = (b + a) / (2.0 * a) - delta / (2.0 * a) * (tt + y) / qden;
  r.value = ipow(z2, d0) * ipow(qfac, v.q0) * std::exp(eta * (b - a) * t / (2.0 * a) - eta / a * *lc);
  return r;
}

TransformResult joint_qd_pgf_hyperbolic(const ModelParams& p, double z1, double z2, double t) {
  const ModelParams v = esep_params(p, false);
  check_time(t);
  const std::int64_t d0 = initial_departures(v);
  TransformResult r;
  r.argument = {z1, z2, t};
  const double a = v.jump, b = v.expire_rate, eta = v.baseline;
  if (a == 0.0) return joint_qd_pgf(v, z1, z2, t);
  const double radicand = (b + a) * (b + a) - 4.0 * a * b * z2;
  if (!(radicand > 0.0)) return flagged(r, ErrorCode::BranchViolation);
  const double delta = std::sqrt(radicand);
  const double y = (b + a - 2.0 * a * z1) / delta;
  if (!(std::fabs(y) < 1.0)) return flagged(r, ErrorCode::DomainViolation);
  const double th = std::tanh(0.5 * t * delta + std::atanh(y));
  const double first = std::pow(1.0 - th * th, eta / (2.0 * a));
  const double second = ipow((b + a) / (2.0 * a) - delta / (2.0 * a) * th, v.q0);
  const double third = std::pow(std::cosh(std::atanh((2.0 * a * z1 - b - a) / delta)), eta / a);
  r.value = ipow(z2, d0) * std::exp(eta * (b - a) * t / (2.0 * a)) * first * second * third;
  return r;
}

std::size_t counting_pmf_dimension(std::int64_t n, std::int64_t q0) {
  const auto nn = static_cast<std::size_t>(n), k = static_cast<std::size_t>(q0);
  return nn * (nn + 1) / 2 + (nn + 1) * (k + 1);
}

double counting_pmf_matrix(const ModelParams& p, std::int64_t n, double t, MatrixPmfOptions opts) {
  const ModelParams v = esep_params(p, false);
  check_time(t);
  const std::int64_t arrivals = n - v.n0;
  if (arrivals < 0) return 0.0;
  const std::int64_t k = v.q0;
  const std::size_t dim = counting_pmf_dimension(arrivals, k);
  if (dim > opts.max_dimension) {
    throw Error(ErrorCode::DimensionOverflow,
                "matrix dimension " + std::to_string(dim) + " exceeds cap " + std::to_string(opts.max_dimension));
  }
  const double a = v.jump, b = v.expire_rate, eta = v.baseline;
  std::vector<GeneratorEntry> entries;
  // block i holds states Q = k+i, ..., 0 after i arrivals
  std::size_t offset = 0;
  for (std::int64_t i = 0; i <= arrivals; ++i) {
    const std::int64_t top = k + i;
    const std::size_t next_offset = offset + static_cast<std::size_t>(top + 1);
    for (std::int64_t idx = 0; idx <= top; ++idx) {
      const std::int64_t q = top - idx;
      const std::size_t row = offset + static_cast<std::size_t>(idx);
      const double qd = static_cast<double>(q);
      entries.push_back({row, row, -(eta + qd * (a + b))});
      if (q > 0) entries.push_back({row, row + 1, qd * b});
      if (i < arrivals) entries.push_back({row, next_offset + static_cast<std::size_t>(idx), eta + a * qd});
    }
    offset = next_offset;
  }
  const SparseSubGenerator z(dim, std::move(entries));
  std::vector<double> v0(dim, 0.0);
  v0[0] = 1.0;
  const std::vector<double> out = expm_action(z, t, v0, opts.uniformization_rate);
  const std::size_t last = static_cast<std::size_t>(k + arrivals + 1);
  double s = 0.0;
  for (std::size_t j = dim - last; j < dim; ++j) s += out[j];
  return std::min(1.0, std::max(0.0, s));
}

std::vector<double> counting_pmf_transform(const ModelParams& p, std::int64_t n_max, double t, std::size_t points) {
  using cd = std::complex<double>;
  const ModelParams v = esep_params(p, false);
  check_time(t);
  if (n_max < 0) throw Error(ErrorCode::DomainViolation, "n_max must be >= 0");
  const std::size_t m = std::max<std::size_t>(points > 0 ? points : 512, 2 * static_cast<std::size_t>(n_max) + 2);
  const double a = v.jump, b = v.expire_rate, eta = v.baseline;
  const double two_pi = 2.0 * std::acos(-1.0);
  std::vector<cd> logs(m);
  double unwrap = 0.0, prev = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const cd z = std::polar(1.0, two_pi * static_cast<double>(j) / static_cast<double>(m));
    cd lg = static_cast<double>(v.n0) * std::log(z);
    if (a == 0.0) {
      lg += eta * (z - 1.0) * t;
    } else {
      const cd delta = std::sqrt((b + a) * (b + a) - 4.0 * a * b * z);
      const cd x = 0.5 * delta * t;
      const cd c = std::cosh(x);
      const cd s = std::abs(delta) > 1e-12 ? std::sinh(x) / delta : cd(0.5 * t);
      const cd w = c + (b + a - 2.0 * a * z) * s;
      // continuous branch of log w along the circle
      cd lw = std::log(w);
      double im = lw.imag() + unwrap;
      if (j > 0) {
        while (im - prev > 0.5 * two_pi) { im -= two_pi; unwrap -= two_pi; }
        while (im - prev < -0.5 * two_pi) { im += two_pi; unwrap += two_pi; }
      }
      prev = im;
      lw = cd(lw.real(), im);
      lg += static_cast<double>(v.q0) * std::log((c + (b - a) * s) / w) + eta * (b - a) * t / (2.0 * a) - eta / a * lw;
    }
    logs[j] = lg;
  }
  // z^{n0} uses the principal log; its arg jump is a multiple of 2 pi n0, harmless after exp
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    cd acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double ang = -two_pi * static_cast<double>(j * k % m) / static_cast<double>(m);
      acc += std::exp(logs[j] + cd(0.0, ang));
    }
    out[k] = acc.real() / static_cast<double>(m);
  }
  return out;
}

double esep_mean_nt(const ModelParams& p, double t) {
  const ModelParams v = esep_params(p, false);
  check_time(t);
  const double delta = v.expire_rate - v.jump;
  const double x = delta * t;
  return static_cast<double>(v.n0) + *v.intensity0 * t * phi1(x) + v.expire_rate * v.baseline * t * t * phi2(x);
}

MomentTrajectories moment_odes(const ModelParams& p_esep, const ModelParams& p_hawkes, int m,
                               const std::vector<double>& t_grid, double max_step) {
  if (m < 1 || m > 4) throw Error(ErrorCode::DomainViolation, "moment order must be in 1..4");
  const ModelParams e = validate_params(p_esep, ModelTag::Esep);
  const ModelParams h = validate_params(p_hawkes, ModelTag::Hawkes);
  if (e.baseline != h.baseline || e.jump != h.jump || e.expire_rate != h.decay_rate) {
    throw Error(ErrorCode::DomainViolation, "moment_odes needs matched baseline, jump and rate");
  }
  const double a = e.jump, b = e.expire_rate, base = e.baseline;
  const int order = std::max(m, 2);
  const auto mi = static_cast<std::size_t>(order);
  std::vector<std::vector<double>> binom(mi + 1, std::vector<double>(mi + 1, 0.0));
  for (std::size_t i = 0; i <= mi; ++i) {
    binom[i][0] = 1.0;
    for (std::size_t j = 1; j <= i; ++j) binom[i][j] = binom[i - 1][j - 1] + (j < i ? binom[i - 1][j] : 0.0);
  }
  // y = [E X^1..E X^order, E N, E XN, E N^2] for each process
  auto field = [&](bool esep) {
    return [&, esep](double, const std::vector<double>& y, std::vector<double>& dy) {
      auto mom = [&y](std::size_t j) { return j == 0 ? 1.0 : y[j - 1]; };
      for (std::size_t j = 1; j <= mi; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < j; ++k) s += binom[j][k] * std::pow(a, static_cast<double>(j - k)) * mom(k + 1);
        if (esep) {
          for (std::size_t k = 0; k < j; ++k) {
            const double sign = ((j - k) % 2 == 0) ? 1.0 : -1.0;
            s += b * binom[j][k] * sign * std::pow(a, static_cast<double>(j - k - 1)) * (mom(k + 1) - base * mom(k));
          }
        } else {
          s += static_cast<double>(j) * b * (base * mom(j - 1) - mom(j));
        }
        dy[j - 1] = s;
      }
      const double ex = y[0], ex2 = y[1], en = y[mi], exn = y[mi + 1];
      dy[mi] = ex;
      dy[mi + 1] = ex2 + a * exn + a * ex - b * exn + b * base * en;
      dy[mi + 2] = ex + 2.0 * exn;
    };
  };
  auto initial = [&](double x0) {
    std::vector<double> y(mi + 3, 0.0);
    for (std::size_t j = 1; j <= mi; ++j) y[j - 1] = std::pow(x0, static_cast<double>(j));
    return y;
  };
  const auto ye = rk4_integrate(field(true), initial(*e.intensity0), t_grid, max_step);
  const auto yh = rk4_integrate(field(false), initial(*h.intensity0), t_grid, max_step);
  MomentTrajectories out;
  out.t = t_grid;
  out.esep_intensity.assign(static_cast<std::size_t>(m), {});
  out.hawkes_intensity.assign(static_cast<std::size_t>(m), {});
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    for (std::size_t j = 0; j < static_cast<std::size_t>(m); ++j) {
      out.esep_intensity[j].push_back(ye[i][j]);
      out.hawkes_intensity[j].push_back(yh[i][j]);
    }
    out.esep_count_mean.push_back(ye[i][mi]);
    out.esep_cross.push_back(ye[i][mi + 1]);
    out.esep_count_second.push_back(ye[i][mi + 2]);
    out.hawkes_count_mean.push_back(yh[i][mi]);
    out.hawkes_cross.push_back(yh[i][mi + 1]);
    out.hawkes_count_second.push_back(yh[i][mi + 2]);
  }
  return out;
}

TransformResult gesep2_steady_mgf(const ModelParams& p, double theta) {
  const ModelParams v = esep_params(p, true);
  TransformResult r;
  r.argument = {theta};
  const double a = v.jump, b = v.expire_rate, eta = v.baseline;
  if (!(a > 0.0)) throw Error(ErrorCode::DomainViolation, "gesep2_steady_mgf needs jump > 0");
  const double bound = std::log(0.5 * (-1.0 + std::sqrt(1.0 + 8.0 * b / a)));
  r.domain_bound = bound;
  const double e = std::exp(theta);
  const double den = 2.0 * b - a * (e + e * e);
  if (theta >= bound || !(den > 1e-12)) return flagged(r, ErrorCode::DomainViolation);
  const double s = std::sqrt(a / (a + 8.0 * b));
  const double expo = 2.0 * eta / std::sqrt(a * (a + 8.0 * b)) * (std::atanh((2.0 * e + 1.0) * s) - std::atanh(3.0 * s));
  r.value = std::exp(expo + eta / a * std::log((2.0 * b - 2.0 * a) / den));
  return r;
}

}  // namespace eseplab
