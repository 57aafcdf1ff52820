#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "eseplab/rng.hpp"

namespace eseplab {

// Laws over positive reals (activity durations, marks).
struct ExponentialLaw {
  double rate = 1.0;
};
struct DeterministicLaw {
  double value = 1.0;
};
struct LogNormalLaw {
  double mu = 0.0;
  double sigma = 1.0;
};
struct HyperExponentialLaw {
  std::vector<double> probs;
  std::vector<double> rates;
};
using ContinuousLaw = std::variant<ExponentialLaw, DeterministicLaw, LogNormalLaw, HyperExponentialLaw>;

// Laws over positive integers (batch sizes).
struct FixedBatch {
  std::int64_t size = 1;
};
// support {1, 2, ...}, mean 1/p
struct GeometricBatch {
  double p = 1.0;
};
using BatchLaw = std::variant<FixedBatch, GeometricBatch>;

void validate_law(const ContinuousLaw& law);
void validate_law(const BatchLaw& law);

double law_mean(const ContinuousLaw& law);
double law_mean(const BatchLaw& law);
// P(X > x)
double law_tail(const ContinuousLaw& law, double x);
double law_sample(const ContinuousLaw& law, RandomStream& rng);
std::int64_t law_sample(const BatchLaw& law, RandomStream& rng);
bool law_is_continuous(const ContinuousLaw& law);

std::string law_name(const ContinuousLaw& law);
std::string law_name(const BatchLaw& law);

}  // namespace eseplab
