#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "eseplab/laws.hpp"

namespace eseplab {

// g(x) = alpha * exp(-beta x)
struct ExponentialKernel {
  double alpha = 0.0;
  double beta = 1.0;
};
// g(x) = k / (c + x)^p
struct PowerLawKernel {
  double k = 1.0;
  double c = 1.0;
  double p = 2.0;
};
// g(x) = P(G > x)
struct TailKernel {
  ContinuousLaw duration = ExponentialLaw{1.0};
};

struct KernelSpec {
  std::variant<ExponentialKernel, PowerLawKernel, TailKernel> kind = ExponentialKernel{};
  ContinuousLaw mark_law = DeterministicLaw{1.0};
};

// Throws NonMonotoneKernel / NonPositiveRate.
void validate_kernel(const KernelSpec& kernel);
double kernel_value(const KernelSpec& kernel, double x);
// integral of g over [0, inf); may be +inf
double kernel_integral(const KernelSpec& kernel);
// E[M] * integral of g
double branching_ratio(const KernelSpec& kernel);
// (weight, rate) pairs when g is a finite exponential mixture
std::optional<std::vector<std::pair<double, double>>> exponential_components(const KernelSpec& kernel);
// x beyond which g vanishes (infinite unless a deterministic tail kernel)
double kernel_support_end(const KernelSpec& kernel);
std::string kernel_name(const KernelSpec& kernel);

}  // namespace eseplab
