#include "eseplab/limits.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "eseplab/numerics.hpp"
#include "eseplab/parallel.hpp"

namespace eseplab {

namespace {

double phi1(double x) {
  if (std::fabs(x) < 1e-5) return 1.0 - x / 2.0 + x * x / 6.0;
  return -std::expm1(-x) / x;
}

// (e^{-kappa t} - e^{-mu t}) / (mu - kappa)
double exp_gap(double mu, double kappa, double t) {
  const double d = mu - kappa;
  if (d == 0.0) return t * std::exp(-mu * t);
  return std::exp(-mu * t) * std::expm1(d * t) / d;
}

std::string gamma_label(double g) {
  std::ostringstream os;
  os << "sigma2_gamma=" << std::setprecision(6) << g;
  return os.str();
}

ModelParams hesep_validated(const ModelParams& p) { return validate_params(p, ModelTag::Hesep); }

}  // namespace

ModelParams ngesep_params(const ModelParams& base, std::int64_t n, BatchFamily family) {
  if (n < 1) throw Error(ErrorCode::DomainViolation, "n must be >= 1");
  if (!base.duration_law) throw Error(ErrorCode::MissingField, "duration_law is required");
  ModelParams p = base;
  p.scale = n;
  p.q0 = 0;
  p.intensity0.reset();
  if (family == BatchFamily::Deterministic) {
    p.batch_law = FixedBatch{n};
  } else {
    p.batch_law = GeometricBatch{1.0 / static_cast<double>(n)};
  }
  return validate_params(p, ModelTag::NGesep);
}

KernelSpec matched_hawkes_kernel(const ModelParams& base, BatchFamily family) {
  if (!base.duration_law) throw Error(ErrorCode::MissingField, "duration_law is required");
  if (!(base.jump > 0.0)) throw Error(ErrorCode::NonPositiveRate, "matched kernel needs jump > 0");
  KernelSpec k;
  k.kind = TailKernel{*base.duration_law};
  if (family == BatchFamily::Deterministic) {
    k.mark_law = DeterministicLaw{base.jump};
  } else {
    k.mark_law = ExponentialLaw{1.0 / base.jump};
  }
  return k;
}

std::vector<double> ngesep_intensity_samples(const ModelParams& p, std::size_t replications, double horizon,
                                             RngStreamSpec first, int threads) {
  const ModelParams v = validate_params(p, ModelTag::NGesep);
  return replicate<double>(replications, threads, [&](std::size_t i) {
    NGesepStepper s(v, {first.seed, first.stream_id + i});
    s.advance_to(horizon);
    return s.intensity();
  });
}

std::vector<double> hawkes_intensity_samples(const ModelParams& p, const KernelSpec& kernel,
                                             std::size_t replications, double horizon, RngStreamSpec first,
                                             int threads) {
  const ModelParams v = validate_params(p, ModelTag::Hawkes);
  validate_kernel(kernel);
  return replicate<double>(replications, threads, [&](std::size_t i) {
    HawkesStepper s(v, kernel, {first.seed, first.stream_id + i});
    s.advance_to(horizon);
    return s.intensity();
  });
}

SweepReport batch_scaling_sweep(const ModelParams& base, const std::vector<std::int64_t>& n_list,
                                std::size_t replications, std::uint64_t seed, BatchScalingOptions opts) {
  if (replications == 0) throw Error(ErrorCode::EmptySample, "replications must be > 0");
  const ModelParams p1 = ngesep_params(base, 1, opts.family);
  const double horizon = opts.horizon > 0.0 ? opts.horizon : default_burn_in(p1, ModelTag::NGesep);
  ModelParams hp;
  hp.baseline = base.baseline;
  hp.jump = base.jump;
  const KernelSpec kernel = matched_hawkes_kernel(base, opts.family);
  const std::vector<double> hawkes = hawkes_intensity_samples(hp, kernel, replications, horizon, {seed, 0}, opts.threads);
  SweepReport report;
  report.monotone_expected = true;
  for (std::size_t j = 0; j < n_list.size(); ++j) {
    const ModelParams pn = ngesep_params(base, n_list[j], opts.family);
    const std::vector<double> gesep = ngesep_intensity_samples(
        pn, replications, horizon, {seed, (j + 1) * static_cast<std::uint64_t>(replications)}, opts.threads);
    const double scale = static_cast<double>(n_list[j]);
    report.rows.push_back({scale, "ks", ks_statistic(gesep, hawkes), replications, seed});
    report.rows.push_back({scale, "ks_critical_95", 1.358 * std::sqrt(2.0 / static_cast<double>(replications)),
                           replications, seed});
  }
  report.sort_rows();
  return report;
}

TvEstimate tv_with_error(const std::vector<std::int64_t>& samples, const std::vector<double>& pmf,
                         std::size_t batches) {
  if (samples.empty()) throw Error(ErrorCode::EmptySample, "no samples");
  const Histogram h = histogram_of(samples);
  const Histogram ref = histogram_of(pmf);
  TvEstimate est;
  est.tv = tv_distance(h, ref);
  const double n = static_cast<double>(samples.size());
  auto sign_at = [&](std::int64_t k) {
    const auto it = h.find(k);
    const double emp = it == h.end() ? 0.0 : it->second / n;
    const double p = (k >= 0 && k < static_cast<std::int64_t>(pmf.size())) ? pmf[static_cast<std::size_t>(k)] : 0.0;
    return emp > p ? 1.0 : (emp < p ? -1.0 : 0.0);
  };
  std::vector<double> f;
  f.reserve(samples.size());
  for (std::int64_t x : samples) f.push_back(0.5 * sign_at(x));
  est.se = batch_means_standard_error(f, std::min(batches, samples.size()));
  return est;
}

SweepReport sis_convergence_sweep(const ModelParams& p, const std::vector<std::int64_t>& population_list,
                                  std::size_t samples, std::uint64_t seed, GridSamplingOptions opts) {
  if (samples == 0) throw Error(ErrorCode::EmptySample, "samples must be > 0");
  ModelParams esep;
  esep.baseline = p.baseline;
  esep.jump = p.jump;
  esep.expire_rate = p.expire_rate;
  const PmfTable law = esep_steady_negbin(esep);
  SweepReport report;
  report.monotone_expected = true;
  for (std::size_t j = 0; j < population_list.size(); ++j) {
    ModelParams sp = p;
    sp.population = population_list[j];
    sp.q0 = 0;
    sp.intensity0.reset();
    const ModelParams v = validate_params(sp, ModelTag::Sis);
    const double burn = opts.burn_in > 0.0 ? opts.burn_in : default_burn_in(v, ModelTag::Sis);
    // the SIS population is finite, so no explosion guard is needed
    SisStepper s(v, {seed, j}, nullptr, SimOptions{std::numeric_limits<std::uint64_t>::max()});
    s.advance_to(burn);
    std::vector<std::int64_t> xs;
    xs.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
      s.advance_to(burn + static_cast<double>(i + 1) * opts.spacing);
      xs.push_back(s.infected());
    }
    const TvEstimate est = tv_with_error(xs, law.probs, opts.se_batches);
    const double scale = static_cast<double>(population_list[j]);
    report.rows.push_back({scale, "tv", est.tv, samples, seed});
    report.rows.push_back({scale, "tv_se", est.se, samples, seed});
  }
  report.sort_rows();
  return report;
}

double hesep_nu_infinity(const ModelParams& p) {
  const double kappa = p.expire_rate + p.decay_rate - p.jump;
  if (!(kappa > 0.0)) throw Error(ErrorCode::Unstable, "needs expire_rate + decay_rate > jump");
  return (p.expire_rate + p.decay_rate) * p.baseline / kappa;
}

SweepReport renewal_check(const ModelParams& p_hesep, const std::vector<double>& t_list, std::uint64_t seed) {
  const ModelParams v = hesep_validated(p_hesep);
  const double nu_inf = hesep_nu_infinity(v);
  std::vector<double> ts = t_list;
  std::sort(ts.begin(), ts.end());
  if (ts.empty()) return {};
  SweepReport report;
  report.monotone_expected = true;
  const double expected = 2.0 * nu_inf * ts.back();
  HesepStepper s(v, {seed, 0}, nullptr, SimOptions{static_cast<std::uint64_t>(50.0 * expected) + 10'000'000});
  for (double t : ts) {
    if (!(t > 0.0)) throw Error(ErrorCode::TimeOutOfRange, "renewal times must be > 0");
    s.advance_to(t);
    const double arrivals = static_cast<double>(s.n() - v.n0);
    report.rows.push_back({t, "relative_error", std::fabs(arrivals / t - nu_inf) / nu_inf, 1, seed});
    report.rows.push_back({t, "interarrival_ratio", arrivals > 0.0 ? t / arrivals * nu_inf : 0.0, 1, seed});
  }
  return report;
}

HesepMeans hesep_means(const ModelParams& p_hesep, double t) {
  const ModelParams v = hesep_validated(p_hesep);
  if (t < 0.0) throw Error(ErrorCode::NegativeTime, "t must be >= 0");
  const double a = v.jump, b = v.decay_rate, mu = v.expire_rate, star = v.baseline;
  const double kappa = mu + b - a;
  const double nu0 = *v.intensity0, q0 = static_cast<double>(v.q0);
  HesepMeans m;
  m.nu = nu0 * std::exp(-kappa * t) + (mu + b) * star * t * phi1(kappa * t);
  if (!(mu > 0.0) || kappa == 0.0) throw Error(ErrorCode::DomainViolation, "queue mean needs mu > 0 and mu+beta != alpha");
  const double nu_inf = (mu + b) * star / kappa;
  if (b == a) {
    m.q = nu_inf / mu + (q0 - nu_inf / mu) * std::exp(-mu * t) + (nu0 - nu_inf) * t * std::exp(-mu * t);
  } else {
    m.q = nu_inf * -std::expm1(-mu * t) / mu + q0 * std::exp(-mu * t) + (nu0 - nu_inf) * exp_gap(mu, kappa, t);
  }
  return m;
}

TransformResult fluid_limit_mgf(const ModelParams& p_hesep, double theta_nu, double theta_q, double t) {
  const ModelParams v = hesep_validated(p_hesep);
  TransformResult r;
  r.argument = {theta_nu, theta_q, t};
  const double kappa = v.expire_rate + v.decay_rate - v.jump;
  if (!(v.expire_rate > 0.0) || kappa == 0.0) {
    r.in_domain = false;
    r.value = std::numeric_limits<double>::quiet_NaN();
    r.violation = ErrorCode::DomainViolation;
    return r;
  }
  const HesepMeans m = hesep_means(v, t);
  r.value = std::exp(theta_nu * m.nu + theta_q * m.q);
  return r;
}

DiffusionBound diffusion_bound(const ModelParams& p_hesep, double gamma) {
  const ModelParams v = hesep_validated(p_hesep);
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw Error(ErrorCode::DomainViolation, "gamma must lie in [0,1]");
  if (!(v.expire_rate > 0.0)) throw Error(ErrorCode::DomainViolation, "diffusion bound needs mu > 0");
  DiffusionBound d;
  d.gamma = gamma;
  d.alpha = v.jump;
  d.beta = v.decay_rate;
  d.mu = v.expire_rate;
  d.nu_star = v.baseline;
  d.nu_inf = hesep_nu_infinity(v);
  d.mean_nu = d.nu_inf;
  d.mean_q = d.nu_inf / d.mu;
  const double a = d.alpha, b = d.beta, mu = d.mu, ni = d.nu_inf, ex = d.nu_inf - d.nu_star;
  const double kappa = mu + b - a;
  d.sigma2_nu = (gamma * a * mu * ex + a * a * ni) / (2.0 * kappa);
  if (b != a) {
    const double dd = b - a;
    d.sigma2_q = (gamma * a * mu * ex + a * a * ni) / (2.0 * dd * dd * kappa) -
                 ((2.0 * gamma * a * mu + 2.0 * mu * dd) * ex + 2.0 * a * b * ni) / (dd * dd * (2.0 * mu + dd)) +
                 (gamma * a * mu * ex + ni * b * b) / (2.0 * mu * dd * dd) + ex / dd + ni / (2.0 * mu);
  } else {
    d.sigma2_q = (1.0 / (2.0 * mu) + gamma * a / (4.0 * mu * mu)) * ex +
                 (1.0 / mu + a / (2.0 * mu * mu) + a * a / (4.0 * mu * mu * mu)) * ni;
  }
  return d;
}

double DiffusionBound::log_mgf(double tn, double tq, double t) const {
  if (t < 0.0) throw Error(ErrorCode::NegativeTime, "t must be >= 0");
  const double a = alpha, b = beta, g = gamma, ni = nu_inf, ex = nu_inf - nu_star;
  const double nu0 = initial_nu, q0 = initial_q;
  if (b != a) {
    const double dd = b - a, kappa = mu + b - a;
    const double head = nu0 * tn * std::exp(-kappa * t) + nu0 * tq / dd * (std::exp(-mu * t) - std::exp(-kappa * t)) +
                        q0 * tq * std::exp(-mu * t);
    const double u = tn - tq / dd;
    const double first = u * u * (g * a * mu * ex / 2.0 + a * a * ni / 2.0) * (-std::expm1(-2.0 * kappa * t)) / (2.0 * kappa);
    const double second = (tn * tq - tq * tq / dd) * ((g * a * mu / dd + mu) * ex + a * b * ni / dd) *
                          (-std::expm1(-(2.0 * mu + dd) * t)) / (2.0 * mu + dd);
    const double third = tq * tq *
                         (g * a * mu * ex / (2.0 * dd * dd) + mu * ex / dd + ni / 2.0 + ni * b * b / (2.0 * dd * dd)) *
                         (-std::expm1(-2.0 * mu * t)) / (2.0 * mu);
    return head + first + second + third;
  }
  const double e = std::exp(-mu * t);
  const double e2 = -std::expm1(-2.0 * mu * t);
  const double l1 = 2.0 * mu * t + std::expm1(-2.0 * mu * t);
  const double l2 = 2.0 * mu * t * (mu * t - 1.0) - std::expm1(-2.0 * mu * t);
  const double head = nu0 * tn * e + nu0 * tq * t * e + q0 * tq * e;
  const double s = tn + tq * t;
  const double excess_part = (g * a * s * s / 2.0 + tn * tq + tq * tq * t) * e2 / 2.0 -
                             (g * a * (tn * tq + tq * tq * t) + tq * tq) * l1 / (4.0 * mu) +
                             g * a * tq * tq / 2.0 * l2 / (4.0 * mu * mu);
  const double w = tq + a * tn;
  const double base_part = (tq * tq + w * w + 2.0 * (a * a * tn * tq + a * tq * tq) * t + a * a * tq * tq * t * t) * e2 /
                               (2.0 * mu) -
                           2.0 * (a * a * tn * tq + a * tq * tq + a * a * tq * tq * t) * l1 / (4.0 * mu * mu) +
                           a * a * tq * tq * l2 / (4.0 * mu * mu * mu);
  return head + excess_part * ex + ni / 2.0 * base_part;
}

double DiffusionBound::mgf(double tn, double tq, double t) const { return std::exp(log_mgf(tn, tq, t)); }

VarianceEstimate variance_with_error(const std::vector<double>& x) {
  if (x.size() < 2) throw Error(ErrorCode::EmptySample, "need at least two values");
  const MeanVar mv = mean_var(x);
  double m4 = 0.0;
  for (double v : x) m4 += std::pow(v - mv.mean, 4.0);
  m4 /= static_cast<double>(x.size());
  const double s2 = mv.variance;
  return {s2, std::sqrt(std::max(0.0, m4 - s2 * s2) / static_cast<double>(x.size()))};
}

VarianceEstimate covariance_with_error(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::EmptySample, "need paired samples");
  const double mx = mean_var(x).mean, my = mean_var(y).mean;
  std::vector<double> prod(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) prod[i] = (x[i] - mx) * (y[i] - my);
  const MeanVar pv = mean_var(prod);
  const double n = static_cast<double>(x.size());
  return {pv.mean * n / (n - 1.0), std::sqrt(pv.variance / n)};
}

SweepReport diffusion_fit_check(const ModelParams& p_hesep, const std::vector<std::int64_t>& n_list,
                                const std::vector<double>& gamma_list, std::size_t samples, std::uint64_t seed,
                                DiffusionFitOptions opts) {
  if (samples == 0) throw Error(ErrorCode::EmptySample, "samples must be > 0");
  SweepReport report;
  std::vector<DiffusionBound> bounds;
  for (double g : gamma_list) bounds.push_back(diffusion_bound(p_hesep, g));
  for (std::size_t j = 0; j < n_list.size(); ++j) {
    const std::int64_t n = n_list[j];
    if (n < 1) throw Error(ErrorCode::DomainViolation, "scales must be >= 1");
    ModelParams sp = p_hesep;
    sp.baseline = p_hesep.baseline * static_cast<double>(n);
    sp.q0 = 0;
    sp.intensity0.reset();
    const ModelParams v = hesep_validated(sp);
    const double burn = opts.burn_in > 0.0 ? opts.burn_in : default_burn_in(v, ModelTag::Hesep);
    const double span = burn + static_cast<double>(samples) * opts.spacing;
    const double expected = 2.0 * hesep_nu_infinity(v) * span;
    HesepStepper s(v, {seed, j}, nullptr, SimOptions{static_cast<std::uint64_t>(50.0 * expected) + 10'000'000});
    s.advance_to(burn);
    std::vector<double> xs;
    xs.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
      s.advance_to(burn + static_cast<double>(i + 1) * opts.spacing);
      xs.push_back(s.intensity());
    }
    const MeanVar mv = mean_var(xs);
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - mv.mean) * (xs[i] - mv.mean);
    const double scale = static_cast<double>(n);
    report.rows.push_back({scale, "scaled_variance", mv.variance / scale, samples, seed});
    report.rows.push_back(
        {scale, "variance_se", batch_means_standard_error(sq, std::min(opts.se_batches, sq.size())) / scale, samples,
         seed});
    for (const DiffusionBound& b : bounds) report.rows.push_back({scale, gamma_label(b.gamma), b.sigma2_nu, 1, seed});
  }
  report.sort_rows();
  return report;
}

SweepReport sandwich_check(const ModelParams& p_hesep, const std::vector<double>& t_list, std::size_t replications,
                           std::uint64_t seed, int threads) {
  const ModelParams hv = hesep_validated(p_hesep);
  if (hv.q0 != 0 || *hv.intensity0 != hv.baseline) {
    throw Error(ErrorCode::InvalidInitialState, "sandwich_check starts all models empty");
  }
  hesep_nu_infinity(hv);
  std::vector<double> ts = t_list;
  std::sort(ts.begin(), ts.end());
  const double rate = hv.expire_rate + hv.decay_rate;
  ModelParams hawkes;
  hawkes.baseline = hv.baseline;
  hawkes.jump = hv.jump;
  hawkes.decay_rate = rate;
  hawkes = validate_params(hawkes, ModelTag::Hawkes);
  const KernelSpec kernel = exponential_kernel(hawkes);
  ModelParams esep;
  esep.baseline = hv.baseline;
  esep.jump = hv.jump;
  esep.expire_rate = rate;
  esep = validate_params(esep, ModelTag::Esep);

  using Obs = std::vector<std::pair<double, double>>;  // per t: (intensity, count)
  const std::uint64_t reps = replications;
  auto run = [&](int model) {
    return replicate<Obs>(replications, threads, [&](std::size_t i) {
      const RngStreamSpec spec{seed, static_cast<std::uint64_t>(model) * reps + i};
      Obs out;
      if (model == 0) {
        HawkesStepper s(hawkes, kernel, spec);
        for (double t : ts) {
          s.advance_to(t);
          out.emplace_back(s.intensity(), static_cast<double>(s.n()));
        }
      } else if (model == 1) {
        HesepStepper s(hv, spec);
        for (double t : ts) {
          s.advance_to(t);
          out.emplace_back(s.intensity(), static_cast<double>(s.n()));
        }
      } else {
        EsepStepper s(esep, ModelTag::Esep, spec);
        for (double t : ts) {
          s.advance_to(t);
          out.emplace_back(s.intensity(), static_cast<double>(s.n()));
        }
      }
      return out;
    });
  };
  const char* names[3] = {"hawkes", "hesep", "esep"};
  SweepReport report;
  for (int model = 0; model < 3; ++model) {
    const std::vector<Obs> obs = run(model);
    for (std::size_t k = 0; k < ts.size(); ++k) {
      std::vector<double> x(replications), y(replications);
      for (std::size_t i = 0; i < replications; ++i) {
        x[i] = obs[i][k].first;
        y[i] = obs[i][k].second;
      }
      const std::string m = names[model];
      const VarianceEstimate vx = variance_with_error(x), vy = variance_with_error(y), c = covariance_with_error(x, y);
      report.rows.push_back({ts[k], "mean_intensity_" + m, mean_var(x).mean, replications, seed});
      report.rows.push_back({ts[k], "var_intensity_" + m, vx.variance, replications, seed});
      report.rows.push_back({ts[k], "se_var_intensity_" + m, vx.se, replications, seed});
      report.rows.push_back({ts[k], "var_count_" + m, vy.variance, replications, seed});
      report.rows.push_back({ts[k], "se_var_count_" + m, vy.se, replications, seed});
      report.rows.push_back({ts[k], "cov_" + m, c.variance, replications, seed});
      report.rows.push_back({ts[k], "se_cov_" + m, c.se, replications, seed});
    }
  }
  report.sort_rows();
  return report;
}

}  // namespace eseplab
