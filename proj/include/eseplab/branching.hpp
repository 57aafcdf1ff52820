#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "eseplab/core.hpp"

namespace eseplab {

enum class BranchModel { Esep, Hawkes };

// pmf[k] = P(X = k) for k = 0..K
struct DiscreteLaw {
  std::vector<double> pmf;
  double tail_mass = 0.0;
  std::optional<double> mean;
  std::optional<double> variance;

  double mass() const;
  double pgf(double z) const;
  double tail_beyond(std::int64_t k) const;  // P(X > k)
  double table_mean() const;
};

// All laws read alpha = jump and beta = expire_rate + decay_rate.
// K = 0 picks K adaptively so the tail bound is below 1e-12.
DiscreteLaw offspring_law(const ModelParams& p, BranchModel model);
DiscreteLaw progeny_law(const ModelParams& p, BranchModel model, std::int64_t k_max = 0);
DiscreteLaw generations_law_esep(const ModelParams& p, std::int64_t k_max = 0);
double generations_cdf_hawkes(const ModelParams& p, std::int64_t k);
DiscreteLaw generations_law_hawkes(const ModelParams& p, std::int64_t k_max = 0);
double family_duration_mean(const ModelParams& p);
DiscreteLaw active_families_law(const ModelParams& p);
DiscreteLaw logarithmic_law(const ModelParams& p, std::int64_t k_max = 0);

}  // namespace eseplab
