#pragma once

#include <cstdint>
#include <vector>

#include "eseplab/analytics.hpp"
#include "eseplab/sweep.hpp"

namespace eseplab {

struct IncompleteBeta {
  double value = 0.0;       // I_z(a, b)
  double complement = 1.0;  // 1 - I_z(a, b), computed without cancellation
};

IncompleteBeta incomplete_beta(double z, double a, double b);
double regularized_incomplete_beta(double z, double a, double b);
// P(X <= k) for X ~ NegBin(r, p) with P(X = k) proportional to p^k
double negbin_cdf(std::int64_t k, double r, double p);

struct BlockingSummary {
  PmfTable pmf;  // support 0..c
  double mean = 0.0;
  double variance = 0.0;
  double block_fraction = 0.0;
};

BlockingSummary esepb_steady(const ModelParams& p);
double blocking_fraction(const ModelParams& p);

struct PastaOptions {
  // > 0 adds a simulated ratio per scale from a path with about this many events
  std::uint64_t simulated_events = 0;
  std::uint64_t seed = 0;
};
// Scales baseline and capacity by each n; metric "ratio" = pi_B / P(Q = c).
SweepReport pasta_ratio_sweep(const ModelParams& p, const std::vector<std::int64_t>& n_list, PastaOptions opts = {});

}  // namespace eseplab
