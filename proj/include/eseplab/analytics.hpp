#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "eseplab/core.hpp"

namespace eseplab {

struct TransformResult {
  double value = 0.0;
  std::vector<double> argument;
  bool in_domain = true;
  std::optional<double> domain_bound;
  std::optional<ErrorCode> violation;

  // value, or throws the recorded violation
  double checked() const;
};

struct PmfTable {
  std::vector<double> probs;  // support 0..K
  double truncation_mass = 0.0;
  double mass() const;
};

// E[exp(theta eta_t)]
TransformResult esep_transient_mgf(const ModelParams& p, double theta, double t);
// E[z^{Q_t}]
TransformResult esep_qt_pgf(const ModelParams& p, double z, double t);

// Steady negative binomial law; K = 0 picks the support so the tail is below 1e-13.
PmfTable esep_steady_negbin(const ModelParams& p, std::int64_t k_max = 0);
struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};
Moments esep_steady_moments(const ModelParams& p);
double negbin_pmf(std::int64_t k, double r, double prob);

// E[z^{N_t}] with N_t = n0 + arrivals in (0, t]; stable exponential form.
TransformResult esep_counting_pgf(const ModelParams& p, double z, double t);
// The same quantity through the raw closed form with exp(t*sqrt(.)) terms.
TransformResult esep_counting_pgf_raw(const ModelParams& p, double z, double t);
// E[z1^{Q_t} z2^{D_t}] with D_0 = n0 - q0; algebraic form valid for any tanh argument.
TransformResult joint_qd_pgf(const ModelParams& p, double z1, double z2, double t);
// Literal tanh/atanh/cosh form; needs |beta+alpha-2 alpha z1| < sqrt(radicand).
TransformResult joint_qd_pgf_hyperbolic(const ModelParams& p, double z1, double z2, double t);

struct MatrixPmfOptions {
  std::size_t max_dimension = 5000;
  std::optional<double> uniformization_rate;
};
// P(N_t = n) via the block-bidiagonal sub-generator.
double counting_pmf_matrix(const ModelParams& p, std::int64_t n, double t, MatrixPmfOptions opts = {});
std::size_t counting_pmf_dimension(std::int64_t n, std::int64_t q0);

// P(N_t = k) for k = 0..n_max from the counting PGF by a Cauchy contour
// integral on the unit circle; points = 0 picks a default.
std::vector<double> counting_pmf_transform(const ModelParams& p, std::int64_t n_max, double t, std::size_t points = 0);
double esep_mean_nt(const ModelParams& p, double t);

struct MomentTrajectories {
  std::vector<double> t;
  // [j-1][i] = E[X^j] at t[i]
  std::vector<std::vector<double>> esep_intensity;
  std::vector<std::vector<double>> hawkes_intensity;
  std::vector<double> esep_count_mean, esep_count_second, esep_cross;
  std::vector<double> hawkes_count_mean, hawkes_count_second, hawkes_cross;
};
// Hawkes decay parameter is taken from p_hawkes.decay_rate.
MomentTrajectories moment_odes(const ModelParams& p_esep, const ModelParams& p_hawkes, int m,
                               const std::vector<double>& t_grid, double max_step = 1e-3);

// Steady MGF of Q(2) for the 2-GESEP with pair batches and Exp(beta) durations.
TransformResult gesep2_steady_mgf(const ModelParams& p, double theta);

}  // namespace eseplab
