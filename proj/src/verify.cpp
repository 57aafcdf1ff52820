#include "eseplab/verify.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <map>
#include <set>

#include "eseplab/analytics.hpp"
#include "eseplab/blocking.hpp"
#include "eseplab/branching.hpp"
#include "eseplab/limits.hpp"
#include "eseplab/numerics.hpp"
#include "eseplab/parallel.hpp"
#include "eseplab/simulators.hpp"

namespace eseplab {

const char* statistic_name(Statistic s) {
  switch (s) {
    case Statistic::TotalVariation: return "tv";
    case Statistic::KolmogorovSmirnov: return "ks";
    case Statistic::ChiSquare: return "chi2";
    case Statistic::MomentZ: return "moment-z";
    case Statistic::OneSidedOrder: return "one-sided-order";
    case Statistic::AbsoluteError: return "abs-error";
  }
  return "?";
}

namespace {

const char* direction_name(Direction d) {
  switch (d) {
    case Direction::Below: return "<";
    case Direction::BelowOrEqual: return "<=";
    case Direction::Above: return ">";
  }
  return "?";
}

ModelParams esep(double eta, double alpha, double beta) {
  ModelParams p;
  p.baseline = eta;
  p.jump = alpha;
  p.expire_rate = beta;
  return p;
}

ModelParams hesep(double nu, double alpha, double beta, double mu) {
  ModelParams p;
  p.baseline = nu;
  p.jump = alpha;
  p.decay_rate = beta;
  p.expire_rate = mu;
  return p;
}

double z_score(double diff, double se) { return se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : INFINITY * diff); }

struct Moments2 {
  double mean;
  double var;
  double se_mean;
  double se_var;
};

Moments2 moments_of(const std::vector<double>& x) {
  const VarianceEstimate v = variance_with_error(x);
  const MeanVar mv = mean_var(x);
  return {mv.mean, v.variance, std::sqrt(mv.variance / static_cast<double>(x.size())), v.se};
}

// ---- steady law of the ESEP ----
std::vector<Check> run_steady_negbin(const ClaimSpec& spec, std::uint64_t seed, int threads) {
  const ModelParams v = validate_params(esep(10.0, 2.0, 3.0), ModelTag::Esep);
  const double burn = default_burn_in(v, ModelTag::Esep);
  const auto qs = replicate<std::int64_t>(spec.replications, threads, [&](std::size_t i) {
    EsepStepper s(v, ModelTag::Esep, {seed, i});
    s.advance_to(burn);
    return s.q();
  });
  const double tv = tv_distance(histogram_of(qs), histogram_of(esep_steady_negbin(v).probs));
  return {make_check("tv", tv, spec.tolerance)};
}

// ---- matched ESEP / Hawkes means and variances ----
std::vector<Check> run_mean_variance_order(const ClaimSpec& spec, std::uint64_t seed, int threads) {
  const double horizon = 5.0;
  const ModelParams pe = validate_params(esep(10.0, 2.0, 3.0), ModelTag::Esep);
  ModelParams ph;
  ph.baseline = 10.0;
  ph.jump = 2.0;
  ph.decay_rate = 3.0;
  ph = validate_params(ph, ModelTag::Hawkes);
  const KernelSpec kernel = exponential_kernel(ph);
  const std::size_t reps = spec.replications;
  using Pair = std::pair<double, double>;
  const auto e = replicate<Pair>(reps, threads, [&](std::size_t i) {
    EsepStepper s(pe, ModelTag::Esep, {seed, i});
    s.advance_to(horizon);
    return Pair{s.intensity(), static_cast<double>(s.n())};
  });
  const auto h = replicate<Pair>(reps, threads, [&](std::size_t i) {
    HawkesStepper s(ph, kernel, {seed, reps + i});
    s.advance_to(horizon);
    return Pair{s.intensity(), static_cast<double>(s.n())};
  });
  std::vector<double> ei, ec, hi, hc;
  for (std::size_t i = 0; i < reps; ++i) {
    ei.push_back(e[i].first);
    ec.push_back(e[i].second);
    hi.push_back(h[i].first);
    hc.push_back(h[i].second);
  }
  const Moments2 mei = moments_of(ei), mec = moments_of(ec), mhi = moments_of(hi), mhc = moments_of(hc);
  auto mean_z = [](const Moments2& a, const Moments2& b) {
    return std::fabs(z_score(a.mean - b.mean, std::hypot(a.se_mean, b.se_mean)));
  };
  auto order_z = [](const Moments2& small, const Moments2& large) {
    return z_score(small.var - large.var, std::hypot(small.se_var, large.se_var));
  };
  std::vector<double> grid;
  for (int k = 0; k <= 50; ++k) grid.push_back(0.1 * k);
  const MomentTrajectories mt = moment_odes(pe, ph, 2, grid);
  double mean_gap = 0.0, var_excess = -INFINITY;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    mean_gap = std::max(mean_gap, std::fabs(mt.esep_intensity[0][i] - mt.hawkes_intensity[0][i]));
    mean_gap = std::max(mean_gap, std::fabs(mt.esep_count_mean[i] - mt.hawkes_count_mean[i]));
    const double ve = mt.esep_intensity[1][i] - mt.esep_intensity[0][i] * mt.esep_intensity[0][i];
    const double vh = mt.hawkes_intensity[1][i] - mt.hawkes_intensity[0][i] * mt.hawkes_intensity[0][i];
    const double ce = mt.esep_count_second[i] - mt.esep_count_mean[i] * mt.esep_count_mean[i];
    const double ch = mt.hawkes_count_second[i] - mt.hawkes_count_mean[i] * mt.hawkes_count_mean[i];
    var_excess = std::max({var_excess, vh - ve, ch - ce});
  }
  return {make_check("mean_intensity_z", mean_z(mei, mhi), spec.tolerance),
          make_check("mean_count_z", mean_z(mec, mhc), spec.tolerance),
          make_check("var_intensity_hawkes_minus_esep_z", order_z(mhi, mei), 3.0),
          make_check("var_count_hawkes_minus_esep_z", order_z(mhc, mec), 3.0),
          make_check("ode_mean_gap", mean_gap, 1e-8),
          make_check("ode_var_hawkes_minus_esep", var_excess, 1e-8)};
}

// ---- transient transforms against Monte Carlo ----
std::vector<Check> run_transient_transforms(const ClaimSpec& spec, std::uint64_t seed, int threads) {
  ModelParams p = esep(2.0, 2.0, 3.0);
  p.q0 = 2;
  p.n0 = 2;
  const ModelParams v = validate_params(p, ModelTag::Esep);
  const std::array<double, 3> times{0.5, 1.0, 2.0};
  const std::vector<double> thetas{-0.4, -0.2, -0.1, 0.03, 0.08};
  const std::vector<double> zs{0.2, 0.4, 0.6, 0.8, 0.95};
  const std::vector<std::pair<double, double>> joint{{0.5, 0.9}, {0.8, 0.8}, {0.9, 0.5}, {0.95, 0.95}, {0.3, 0.7}};
  using Obs = std::array<std::int64_t, 6>;  // (Q, N) per time
  const auto obs = replicate<Obs>(spec.replications, threads, [&](std::size_t i) {
    EsepStepper s(v, ModelTag::Esep, {seed, i});
    Obs o{};
    for (std::size_t k = 0; k < times.size(); ++k) {
      s.advance_to(times[k]);
      o[2 * k] = s.q();
      o[2 * k + 1] = s.n();
    }
    return o;
  });
  double worst_mgf = 0.0, worst_count = 0.0, worst_joint = 0.0;
  std::vector<double> f(obs.size());
  auto mc_z = [&](double analytic) {
    const MeanVar mv = mean_var(f);
    return std::fabs(z_score(mv.mean - analytic, std::sqrt(mv.variance / static_cast<double>(f.size()))));
  };
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    for (double th : thetas) {
      for (std::size_t i = 0; i < obs.size(); ++i) f[i] = std::exp(th * (v.baseline + v.jump * obs[i][2 * k]));
      worst_mgf = std::max(worst_mgf, mc_z(esep_transient_mgf(v, th, t).checked()));
    }
    for (double z : zs) {
      for (std::size_t i = 0; i < obs.size(); ++i) f[i] = std::pow(z, static_cast<double>(obs[i][2 * k + 1]));
      worst_count = std::max(worst_count, mc_z(esep_counting_pgf(v, z, t).checked()));
    }
    for (const auto& [z1, z2] : joint) {
      for (std::size_t i = 0; i < obs.size(); ++i) {
        const auto q = obs[i][2 * k], n = obs[i][2 * k + 1];
        f[i] = std::pow(z1, static_cast<double>(q)) * std::pow(z2, static_cast<double>(n - q));
      }
      worst_joint = std::max(worst_joint, mc_z(joint_qd_pgf(v, z1, z2, t).checked()));
    }
  }
  return {make_check("max_z", std::max({worst_mgf, worst_count, worst_joint}), spec.tolerance),
          make_check("intensity_mgf_max_z", worst_mgf, spec.tolerance),
          make_check("counting_pgf_max_z", worst_count, spec.tolerance),
          make_check("joint_pgf_max_z", worst_joint, spec.tolerance)};
}

// ---- matrix PMF of N_t ----
std::vector<Check> run_matrix_pmf(const ClaimSpec& spec, std::uint64_t seed, int threads) {
  ModelParams p = esep(2.0, 2.0, 3.0);
  p.q0 = 1;
  p.n0 = 1;
  const ModelParams v = validate_params(p, ModelTag::Esep);
  const std::array<double, 2> times{0.5, 1.0};
  const std::int64_t n_max = 10;
  using Obs = std::array<std::int64_t, 2>;
  const auto obs = replicate<Obs>(spec.replications, threads, [&](std::size_t i) {
    EsepStepper s(v, ModelTag::Esep, {seed, i});
    Obs o{};
    for (std::size_t k = 0; k < times.size(); ++k) {
      s.advance_to(times[k]);
      o[k] = s.n();
    }
    return o;
  });
  double worst_z = 0.0, worst_gap = 0.0;
  const double reps = static_cast<double>(obs.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const std::vector<double> via_pgf = counting_pmf_transform(v, n_max, times[k]);
    std::vector<double> counts(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (const Obs& o : obs) {
      if (o[k] <= n_max) counts[static_cast<std::size_t>(o[k])] += 1.0;
    }
    for (std::int64_t n = 0; n <= n_max; ++n) {
      const double pm = counting_pmf_matrix(v, n, times[k]);
      const auto idx = static_cast<std::size_t>(n);
      worst_gap = std::max(worst_gap, std::fabs(pm - via_pgf[idx]));
      const double se = std::sqrt(std::max(pm * (1.0 - pm), 1e-300) / reps);
      worst_z = std::max(worst_z, std::fabs(z_score(counts[idx] / reps - pm, se)));
    }
  }
  return {make_check("simulation_max_z", worst_z, spec.tolerance), make_check("pgf_extraction_max_abs", worst_gap, 1e-6)};
}

// ---- cluster laws ----
std::vector<Check> run_branching_laws(const ClaimSpec& spec, std::uint64_t seed, int threads) {
  const ModelParams p = esep(1.0, 2.0, 3.0);
  using Obs = std::pair<std::int64_t, std::int64_t>;
  const auto obs = replicate<Obs>(spec.replications, threads, [&](std::size_t i) {
    const ClusterPath c = simulate_cluster(p, ClusterModel::Esep, {seed, i});
    return Obs{c.total, static_cast<std::int64_t>(c.generations.size())};
  });
  std::vector<std::int64_t> totals, gens;
  std::vector<double> totals_d;
  for (const auto& [t, g] : obs) {
    totals.push_back(t);
    gens.push_back(g);
    totals_d.push_back(static_cast<double>(t));
  }
  const DiscreteLaw progeny = progeny_law(p, BranchModel::Esep);
  const DiscreteLaw generations = generations_law_esep(p);
  const ChiSquareResult cp = chi_square(histogram_of(totals), progeny.pmf);
  const ChiSquareResult cg = chi_square(histogram_of(gens), generations.pmf);
  const MeanVar mv = mean_var(totals_d);
  const double target = p.expire_rate / (p.expire_rate - p.jump);
  const double z = std::fabs(z_score(mv.mean - target, std::sqrt(mv.variance / static_cast<double>(totals_d.size()))));
  return {make_check("progeny_chi2_p", cp.pvalue, spec.tolerance, Direction::Above),
          make_check("generations_chi2_p", cg.pvalue, spec.tolerance, Direction::Above),
          make_check("mean_progeny_z", z, 3.0)};
}

// ---- Poisson number of families with logarithmic sizes ----
std::vector<Check> run_family_decomposition(const ClaimSpec& spec, std::uint64_t, int) {
  const ModelParams p = validate_params(esep(10.0, 2.0, 3.0), ModelTag::Esep);
  const DiscreteLaw families = active_families_law(p);
  const DiscreteLaw sizes = logarithmic_law(p);
  const PmfTable negbin = esep_steady_negbin(p);
  double worst = 0.0;
  for (double z : {0.3, 0.7, 0.95}) {
    const double inner = sizes.pgf(z);
    double compound = 0.0, power = 1.0;
    for (double w : families.pmf) {
      compound += w * power;
      power *= inner;
    }
    double direct = 0.0, zk = 1.0;
    for (double w : negbin.probs) {
      direct += w * zk;
      zk *= z;
    }
    worst = std::max(worst, std::fabs(compound - direct));
  }
  const double poisson_mean = families.mean.value_or(families.table_mean());
  return {make_check("pgf_max_abs", worst, spec.tolerance),
          make_check("family_count_mean_gap", std::fabs(poisson_mean - 5.0 * std::log(3.0)), 1e-10)};
}

// ---- SIS towards the ESEP law ----
std::vector<Check> run_sis_convergence(const ClaimSpec& spec, std::uint64_t seed, int) {
  ModelParams p = esep(10.0, 2.0, 3.0);
  const std::vector<std::int64_t> pops{50, 100, 500, 1000, 10000};
  const SweepReport r = sis_convergence_sweep(p, pops, spec.replications, seed);
  const auto tv = r.metric("tv");
  const auto se = r.metric("tv_se");
  double worst_rise = -INFINITY;
  for (std::size_t i = 0; i + 1 < tv.size(); ++i) {
    const double band = std::hypot(se[i].metric_value, se[i + 1].metric_value);
    worst_rise = std::max(worst_rise, z_score(tv[i + 1].metric_value - tv[i].metric_value, band));
  }
  std::vector<Check> out{make_check("tv_at_10000", tv.back().metric_value, spec.tolerance),
                         make_check("max_tv_rise_in_se", worst_rise, 2.0)};
  for (std::size_t i = 0; i < tv.size(); ++i) {
    out.push_back(make_check("tv_n" + std::to_string(pops[i]), tv[i].metric_value, 1.0));
  }
  return out;
}

// ---- n-GESEP towards the matched Hawkes process ----
std::vector<Check> run_batch_scaling(const ClaimSpec& spec, std::uint64_t seed, int threads) {
  const std::vector<std::int64_t> ns{1, 2, 4, 8};
  const std::array<std::array<double, 3>, 2> sets{{{1.0, 1.0, 2.0}, {5.0, 2.0, 3.0}}};
  std::vector<Check> limits, orders, detail;
  for (std::size_t s = 0; s < sets.size(); ++s) {
    ModelParams base;
    base.baseline = sets[s][0];
    base.jump = sets[s][1];
    base.duration_law = ExponentialLaw{sets[s][2]};
    BatchScalingOptions opts;
    opts.threads = threads;
    const SweepReport r = batch_scaling_sweep(base, ns, spec.replications, seed + s, opts);
    const auto ks = r.metric("ks");
    const std::string tag = "_set" + std::to_string(s + 1);
    limits.push_back(make_check("ks8" + tag, ks.back().metric_value, spec.tolerance, Direction::BelowOrEqual));
    orders.push_back(make_check("ks8_over_ks1" + tag, ks.back().metric_value / ks.front().metric_value, 1.0));
    for (std::size_t i = 0; i < ks.size(); ++i) {
      detail.push_back(make_check("ks_n" + std::to_string(ns[i]) + tag, ks[i].metric_value, 1.0, Direction::BelowOrEqual));
    }
  }
  limits.insert(limits.end(), orders.begin(), orders.end());
  limits.insert(limits.end(), detail.begin(), detail.end());
  return limits;
}

// ---- HESEP variance sandwich and renewal rate ----
std::vector<Check> run_hesep_sandwich(const ClaimSpec& spec, std::uint64_t seed, int threads) {
  const ModelParams p = hesep(10.0, 2.0, 2.0, 2.0);
  const SweepReport r = sandwich_check(p, {1.0, 5.0}, spec.replications, seed, threads);
  double worst = -INFINITY;
  std::vector<Check> detail;
  for (const std::string& x : {std::string("var_intensity_"), std::string("var_count_"), std::string("cov_")}) {
    const std::string se_prefix = x == "cov_" ? "se_cov_" : "se_" + x;
    const auto h = r.metric(x + "hawkes"), m = r.metric(x + "hesep"), e = r.metric(x + "esep");
    const auto sh = r.metric(se_prefix + "hawkes"), sm = r.metric(se_prefix + "hesep"), se = r.metric(se_prefix + "esep");
    for (std::size_t k = 0; k < h.size(); ++k) {
      const double z1 = z_score(h[k].metric_value - m[k].metric_value, std::hypot(sh[k].metric_value, sm[k].metric_value));
      const double z2 = z_score(m[k].metric_value - e[k].metric_value, std::hypot(sm[k].metric_value, se[k].metric_value));
      const std::string at = "t" + format_double(h[k].scale);
      detail.push_back(make_check(x + "hawkes_minus_hesep_z_" + at, z1, spec.tolerance));
      detail.push_back(make_check(x + "hesep_minus_esep_z_" + at, z2, spec.tolerance));
      worst = std::max({worst, z1, z2});
    }
  }
  const SweepReport ren = renewal_check(p, {1e4}, seed);
  std::vector<Check> out{make_check("max_order_z", worst, spec.tolerance),
                         make_check("renewal_relative_error", ren.metric("relative_error").back().metric_value, 0.01)};
  out.insert(out.end(), detail.begin(), detail.end());
  return out;
}

// ---- scaled steady variance of the HESEP against the diffusion bracket ----
std::vector<Check> run_diffusion_bracket(const ClaimSpec& spec, std::uint64_t seed, int) {
  const ModelParams p = hesep(1.0, 3.0, 2.0, 2.0);
  const double mid = p.expire_rate / (p.expire_rate + p.decay_rate);
  const double lo = diffusion_bound(p, 0.0).sigma2_nu;
  const double hi = diffusion_bound(p, 1.0).sigma2_nu;
  const double target = diffusion_bound(p, mid).sigma2_nu;
  std::vector<Check> out;
  const std::vector<std::pair<std::int64_t, std::size_t>> runs{{1000, spec.replications / 5}, {100, spec.replications}};
  for (const auto& [n, samples] : runs) {
    const SweepReport r = diffusion_fit_check(p, {n}, {0.0, mid, 1.0}, samples, seed + static_cast<std::uint64_t>(n));
    const double v = r.metric("scaled_variance").back().metric_value;
    const std::string tag = "_n" + std::to_string(n);
    if (n == 1000) out.push_back(make_check("relative_gap_mid_gamma" + tag, std::fabs(v - target) / target, spec.tolerance));
    out.push_back(make_check("scaled_variance_vs_upper" + tag, v, hi));
    out.push_back(make_check("scaled_variance_vs_lower" + tag, v, lo, Direction::Above));
  }
  return out;
}

// ---- finite-capacity ESEP ----
double brute_negbin_truncated(std::int64_t k, std::int64_t c, double eta, double alpha, double beta) {
  const double r = eta / alpha, q = alpha / beta;
  auto w = [&](std::int64_t j) {
    const double jd = static_cast<double>(j);
    return std::exp(std::lgamma(jd + r) - std::lgamma(r) - std::lgamma(jd + 1.0) + jd * std::log(q) + r * std::log1p(-q));
  };
  double total = 0.0;
  for (std::int64_t j = 0; j <= c; ++j) total += w(j);
  return w(k) / total;
}

std::vector<Check> run_blocking(const ClaimSpec& spec, std::uint64_t seed, int threads) {
  double worst_pmf = 0.0;
  for (double eta : {0.5, 5.0, 20.0}) {
    for (const auto& [a, b] : {std::pair{2.0, 3.0}, std::pair{1.0, 4.0}}) {
      for (std::int64_t c : {0, 1, 8, 30, 100}) {
        ModelParams p = esep(eta, a, b);
        p.capacity = c;
        const BlockingSummary s = esepb_steady(p);
        for (std::int64_t k = 0; k <= c; ++k) {
          worst_pmf = std::max(worst_pmf,
                               std::fabs(s.pmf.probs[static_cast<std::size_t>(k)] - brute_negbin_truncated(k, c, eta, a, b)));
        }
      }
    }
  }

  ModelParams pb = esep(5.0, 2.0, 3.0);
  pb.capacity = 8;
  const ModelParams vb = validate_params(pb, ModelTag::EsepB);
  const BlockingSummary sb = esepb_steady(vb);
  const double burn = default_burn_in(vb, ModelTag::EsepB);
  const double window = 200.0;
  struct Tally {
    double blocked, attempts, at_cap;
  };
  const auto tallies = replicate<Tally>(spec.replications, threads, [&](std::size_t i) {
    EsepStepper s(vb, ModelTag::EsepB, {seed, i});
    s.advance_to(burn);
    const auto b0 = s.blocked(), a0 = s.admitted();
    const double c0 = s.time_at_capacity();
    s.advance_to(burn + window);
    const double blocked = static_cast<double>(s.blocked() - b0);
    return Tally{blocked, blocked + static_cast<double>(s.admitted() - a0), s.time_at_capacity() - c0};
  });
  double sb_sum = 0.0, sa_sum = 0.0;
  std::vector<double> caps;
  for (const Tally& t : tallies) {
    sb_sum += t.blocked;
    sa_sum += t.attempts;
    caps.push_back(t.at_cap / window);
  }
  const double ratio = sb_sum / sa_sum;
  std::vector<double> resid;
  for (const Tally& t : tallies) resid.push_back(t.blocked - ratio * t.attempts);
  const double n = static_cast<double>(tallies.size());
  const double ratio_se = std::sqrt(mean_var(resid).variance / n) / (sa_sum / n);
  const MeanVar cap_mv = mean_var(caps);
  const double cap_z = z_score(cap_mv.mean - sb.pmf.probs.back(), std::sqrt(cap_mv.variance / n));

  ModelParams pp = esep(2.0, 2.0, 3.0);
  pp.capacity = 1;
  const SweepReport pr = pasta_ratio_sweep(pp, {1, 2, 5, 10, 20, 50, 100});
  const auto ratios = pr.metric("ratio");
  double worst_rise = -INFINITY;
  for (std::size_t i = 0; i + 1 < ratios.size(); ++i) {
    worst_rise = std::max(worst_rise, std::fabs(ratios[i + 1].metric_value - 1.0) - std::fabs(ratios[i].metric_value - 1.0));
  }
  return {make_check("pmf_max_abs_vs_bruteforce", worst_pmf, spec.tolerance),
          make_check("block_fraction_z", std::fabs(z_score(ratio - sb.block_fraction, ratio_se)), 3.0),
          make_check("capacity_occupancy_z", std::fabs(cap_z), 3.0),
          make_check("pasta_gap_at_largest_scale", std::fabs(ratios.back().metric_value - 1.0), 0.05),
          make_check("pasta_gap_max_increase", worst_rise, 1e-12),
          make_check("pasta_ratio_at_unit_scale", ratios.front().metric_value, 1.0, Direction::Above)};
}

struct Registration {
  Statistic statistic;
  double tolerance;
  std::uint64_t replications;
  std::string rationale;
  ClaimRunner runner;
};

const std::map<std::string, Registration>& registry() {
  static const std::map<std::string, Registration> r = {
      {"steady-negbin",
       {Statistic::TotalVariation, 0.02, 100000, "TV of end states after burn-in vs the negative binomial law",
        run_steady_negbin}},
      {"mean-variance-order",
       {Statistic::MomentZ, 3.0, 100000,
        "matched ESEP and Hawkes at t=5: equal means (3 SE), Hawkes variance not larger (3 SE), moment ODEs to 1e-8",
        run_mean_variance_order}},
      {"transient-transforms",
       {Statistic::MomentZ, 3.0, 1000000, "MGF and PGFs at t in {0.5,1,2} within 3 SE of Monte Carlo means",
        run_transient_transforms}},
      {"matrix-pmf",
       {Statistic::MomentZ, 3.0, 200000, "uniformized PMF of N_t vs histogram (3 SE) and vs PGF contour extraction",
        run_matrix_pmf}},
      {"branching-laws",
       {Statistic::ChiSquare, 0.01, 100000, "chi-square p-values for progeny and generations; mean progeny 3 SE",
        run_branching_laws}},
      {"family-decomposition",
       {Statistic::AbsoluteError, 1e-10, 1, "compound Poisson-logarithmic PGF equals the negative binomial PGF",
        run_family_decomposition}},
      {"sis-convergence",
       {Statistic::TotalVariation, 0.02, 100000, "TV to the ESEP law falls with N (2 SE band), below 0.02 at N=1e4",
        run_sis_convergence}},
      {"batch-scaling",
       {Statistic::KolmogorovSmirnov, 0.05, 10000, "KS(n=8) <= 0.05 and KS(8) < KS(1) for both parameter sets",
        run_batch_scaling}},
      {"hesep-sandwich",
       {Statistic::OneSidedOrder, 3.0, 100000,
        "Hawkes <= HESEP <= ESEP variances and covariances at t in {1,5} (3 SE); renewal rate within 1% at t=1e4",
        run_hesep_sandwich}},
      {"diffusion-bracket",
       {Statistic::AbsoluteError, 0.1, 100000,
        "scaled steady variance of nu in [sigma2(0), sigma2(1)]; within 10% of sigma2(mu/(mu+beta)) at n=1000",
        run_diffusion_bracket}},
      {"blocking",
       {Statistic::AbsoluteError, 1e-10, 2000,
        "truncated PMF vs brute force (1e-10), blocked fraction and occupancy (3 SE), PASTA ratio toward 1",
        run_blocking}},
  };
  return r;
}

}  // namespace

Check make_check(std::string name, double observed, double threshold, Direction direction) {
  Check c{std::move(name), observed, threshold, direction, false};
  switch (direction) {
    case Direction::Below: c.pass = observed < threshold; break;
    case Direction::BelowOrEqual: c.pass = observed <= threshold; break;
    case Direction::Above: c.pass = observed > threshold; break;
  }
  return c;
}

std::uint64_t retry_seed(std::uint64_t seed) { return seed ^ 0x9E3779B97F4A7C15ULL; }

std::vector<std::string> registered_claims() {
  std::vector<std::string> ids;
  for (const auto& [id, reg] : registry()) ids.push_back(id);
  return ids;
}

ClaimSpec registered_claim(const std::string& claim_id, std::uint64_t seed) {
  const auto it = registry().find(claim_id);
  if (it == registry().end()) throw Error(ErrorCode::UnknownClaim, "unknown claim '" + claim_id + "'");
  const Registration& r = it->second;
  return {claim_id, r.statistic, r.tolerance, r.replications, seed, r.rationale, r.runner};
}

ClaimReport run_claim(const ClaimSpec& spec, int threads, bool allow_retry) {
  if (!(spec.tolerance > 0.0)) throw Error(ErrorCode::ConfigInvalid, "tolerance must be > 0");
  if (spec.replications == 0) throw Error(ErrorCode::ConfigInvalid, "replications must be > 0");
  ClaimRunner runner = spec.runner;
  if (!runner) runner = registered_claim(spec.claim_id, spec.seed).runner;
  const auto start = std::chrono::steady_clock::now();
  auto attempt = [&](std::uint64_t seed) {
    std::vector<Check> checks = runner(spec, seed, threads);
    if (checks.empty()) throw Error(ErrorCode::ConfigInvalid, "claim produced no checks");
    return checks;
  };
  auto passed = [](const std::vector<Check>& cs) {
    return std::all_of(cs.begin(), cs.end(), [](const Check& c) { return c.pass; });
  };
  ClaimReport r;
  r.claim_id = spec.claim_id;
  r.statistic = spec.statistic;
  r.seed = spec.seed;
  r.checks = attempt(spec.seed);
  if (!passed(r.checks) && allow_retry) {
    r.first_attempt = std::move(r.checks);
    r.retried = true;
    r.seed = retry_seed(spec.seed);
    r.checks = attempt(r.seed);
  }
  r.pass = passed(r.checks);
  r.observed = r.checks.front().observed;
  r.threshold = r.checks.front().threshold;
  r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<ClaimReport> run_suite(const std::vector<ClaimSpec>& suite, int threads, bool fail_fast) {
  std::set<std::string> seen;
  for (const ClaimSpec& s : suite) {
    if (!seen.insert(s.claim_id).second) throw Error(ErrorCode::DuplicateClaim, "duplicate claim '" + s.claim_id + "'");
  }
  std::vector<ClaimReport> out;
  for (const ClaimSpec& s : suite) {
    out.push_back(run_claim(s, threads));
    if (fail_fast && !out.back().pass) break;
  }
  std::sort(out.begin(), out.end(), [](const ClaimReport& a, const ClaimReport& b) { return a.claim_id < b.claim_id; });
  return out;
}

std::vector<ClaimSpec> default_suite(std::uint64_t seed) {
  std::vector<ClaimSpec> suite;
  for (const std::string& id : registered_claims()) suite.push_back(registered_claim(id, seed));
  return suite;
}

namespace {

Json checks_to_json(const std::vector<Check>& checks) {
  Json a = Json::array();
  for (const Check& c : checks) {
    a.push_back({{"name", c.name},
                 {"observed", c.observed},
                 {"threshold", c.threshold},
                 {"direction", direction_name(c.direction)},
                 {"pass", c.pass}});
  }
  return a;
}

}  // namespace

Json report_to_json(const ClaimReport& r) {
  Json j = {{"claim_id", r.claim_id},
            {"statistic", statistic_name(r.statistic)},
            {"observed", r.observed},
            {"threshold", r.threshold},
            {"pass", r.pass},
            {"runtime_seconds", r.runtime_seconds},
            {"seed", r.seed},
            {"retried", r.retried},
            {"checks", checks_to_json(r.checks)}};
  if (r.retried) j["first_attempt"] = checks_to_json(r.first_attempt);
  return j;
}

Json suite_to_json(const std::vector<ClaimReport>& reports) {
  Json a = Json::array();
  for (const ClaimReport& r : reports) a.push_back(report_to_json(r));
  return {{"claims", a}, {"all_pass", all_pass(reports)}};
}

bool all_pass(const std::vector<ClaimReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const ClaimReport& r) { return r.pass; });
}

}  // namespace eseplab
