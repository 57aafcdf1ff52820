#pragma once

#include <cstdint>
#include <vector>

#include "eseplab/analytics.hpp"
#include "eseplab/simulators.hpp"
#include "eseplab/sweep.hpp"

namespace eseplab {

enum class BatchFamily { Deterministic, Geometric };

struct BatchScalingOptions {
  BatchFamily family = BatchFamily::Deterministic;
  double horizon = 0.0;  // 0 uses the default burn-in rule
  int threads = 1;
};

// Base params: baseline, jump, duration_law. Batches have size n (or mean n).
ModelParams ngesep_params(const ModelParams& base, std::int64_t n, BatchFamily family);
// Hawkes with kernel P(G > x) and marks equal to the limit of alpha*B/n.
KernelSpec matched_hawkes_kernel(const ModelParams& base, BatchFamily family);

std::vector<double> ngesep_intensity_samples(const ModelParams& p, std::size_t replications, double horizon,
                                             RngStreamSpec first, int threads);
std::vector<double> hawkes_intensity_samples(const ModelParams& p, const KernelSpec& kernel,
                                             std::size_t replications, double horizon, RngStreamSpec first,
                                             int threads);

// metric "ks" per n: end-of-horizon intensity, n-GESEP vs matched Hawkes.
SweepReport batch_scaling_sweep(const ModelParams& base, const std::vector<std::int64_t>& n_list,
                                std::size_t replications, std::uint64_t seed, BatchScalingOptions opts = {});

struct GridSamplingOptions {
  double spacing = 2.0;
  double burn_in = 0.0;  // 0 uses the default rule
  std::size_t se_batches = 50;
};

// I_t sampled on a grid of one long path per N; metrics "tv" and "tv_se".
SweepReport sis_convergence_sweep(const ModelParams& p, const std::vector<std::int64_t>& population_list,
                                  std::size_t samples, std::uint64_t seed, GridSamplingOptions opts = {});
// TV of a grid sample against a pmf, with a batch-means standard error.
struct TvEstimate {
  double tv = 0.0;
  double se = 0.0;
};
TvEstimate tv_with_error(const std::vector<std::int64_t>& samples, const std::vector<double>& pmf,
                         std::size_t batches);

double hesep_nu_infinity(const ModelParams& p);

// metrics "relative_error" and "interarrival_ratio" per t, one path to max t.
SweepReport renewal_check(const ModelParams& p_hesep, const std::vector<double>& t_list, std::uint64_t seed);

struct HesepMeans {
  double nu = 0.0;
  double q = 0.0;
};
HesepMeans hesep_means(const ModelParams& p_hesep, double t);
TransformResult fluid_limit_mgf(const ModelParams& p_hesep, double theta_nu, double theta_q, double t);

struct DiffusionBound {
  double gamma = 0.0;
  double alpha = 0.0, beta = 0.0, mu = 0.0, nu_star = 0.0;
  double nu_inf = 0.0;
  double mean_nu = 0.0, mean_q = 0.0;
  double sigma2_nu = 0.0, sigma2_q = 0.0;
  double initial_nu = 0.0, initial_q = 0.0;  // centred, scaled initial state

  double log_mgf(double theta_nu, double theta_q, double t) const;
  double mgf(double theta_nu, double theta_q, double t) const;
};
DiffusionBound diffusion_bound(const ModelParams& p_hesep, double gamma);

struct DiffusionFitOptions {
  double spacing = 1.0;
  double burn_in = 0.0;
  std::size_t se_batches = 50;
};
// Baseline scaled by each n; metrics "scaled_variance", "variance_se",
// "sigma2_gamma=<g>" for each gamma.
SweepReport diffusion_fit_check(const ModelParams& p_hesep, const std::vector<std::int64_t>& n_list,
                                const std::vector<double>& gamma_list, std::size_t samples, std::uint64_t seed,
                                DiffusionFitOptions opts = {});

// HESEP vs Hawkes (decay mu+beta) vs ESEP (service mu+beta) from the same start.
// metrics per t: var_<x>_<model>, se_var_<x>_<model>, cov_<model>, se_cov_<model>
// with x in {intensity, count} and model in {hawkes, hesep, esep}.
SweepReport sandwich_check(const ModelParams& p_hesep, const std::vector<double>& t_list, std::size_t replications,
                           std::uint64_t seed, int threads = 1);

struct VarianceEstimate {
  double variance = 0.0;
  double se = 0.0;
};
VarianceEstimate variance_with_error(const std::vector<double>& x);
VarianceEstimate covariance_with_error(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace eseplab
