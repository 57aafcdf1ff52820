#include "eseplab/kernel.hpp"

#include <cmath>
#include <limits>

#include "eseplab/error.hpp"

namespace eseplab {

void validate_kernel(const KernelSpec& kernel) {
  validate_law(kernel.mark_law);
  if (const auto* e = std::get_if<ExponentialKernel>(&kernel.kind)) {
    if (e->alpha < 0.0) throw Error(ErrorCode::NonPositiveRate, "kernel alpha must be >= 0");
    if (e->beta < 0.0) throw Error(ErrorCode::NonMonotoneKernel, "kernel beta < 0 gives an increasing kernel");
  } else if (const auto* pl = std::get_if<PowerLawKernel>(&kernel.kind)) {
    if (!(pl->k > 0.0) || !(pl->c > 0.0)) throw Error(ErrorCode::NonPositiveRate, "power-law k and c must be > 0");
    if (pl->p < 0.0) throw Error(ErrorCode::NonMonotoneKernel, "power-law exponent p < 0 gives an increasing kernel");
  } else {
    validate_law(std::get<TailKernel>(kernel.kind).duration);
  }
}

double kernel_value(const KernelSpec& kernel, double x) {
  if (x < 0.0) return 0.0;
  if (const auto* e = std::get_if<ExponentialKernel>(&kernel.kind)) return e->alpha * std::exp(-e->beta * x);
  if (const auto* pl = std::get_if<PowerLawKernel>(&kernel.kind)) return pl->k / std::pow(pl->c + x, pl->p);
  return law_tail(std::get<TailKernel>(kernel.kind).duration, x);
}

double kernel_integral(const KernelSpec& kernel) {
  const double inf = std::numeric_limits<double>::infinity();
  if (const auto* e = std::get_if<ExponentialKernel>(&kernel.kind)) {
    if (e->alpha == 0.0) return 0.0;
    return e->beta > 0.0 ? e->alpha / e->beta : inf;
  }
  if (const auto* pl = std::get_if<PowerLawKernel>(&kernel.kind)) {
    if (pl->p <= 1.0) return inf;
    return pl->k / ((pl->p - 1.0) * std::pow(pl->c, pl->p - 1.0));
  }
  return law_mean(std::get<TailKernel>(kernel.kind).duration);
}

double branching_ratio(const KernelSpec& kernel) {
  return law_mean(kernel.mark_law) * kernel_integral(kernel);
}

std::optional<std::vector<std::pair<double, double>>> exponential_components(const KernelSpec& kernel) {
  if (const auto* e = std::get_if<ExponentialKernel>(&kernel.kind)) {
    return std::vector<std::pair<double, double>>{{e->alpha, e->beta}};
  }
  if (const auto* t = std::get_if<TailKernel>(&kernel.kind)) {
    if (const auto* ex = std::get_if<ExponentialLaw>(&t->duration)) {
      return std::vector<std::pair<double, double>>{{1.0, ex->rate}};
    }
    if (const auto* h = std::get_if<HyperExponentialLaw>(&t->duration)) {
      std::vector<std::pair<double, double>> out;
      for (std::size_t i = 0; i < h->probs.size(); ++i) out.emplace_back(h->probs[i], h->rates[i]);
      return out;
    }
  }
  return std::nullopt;
}

double kernel_support_end(const KernelSpec& kernel) {
  if (const auto* t = std::get_if<TailKernel>(&kernel.kind)) {
    if (const auto* d = std::get_if<DeterministicLaw>(&t->duration)) return d->value;
  }
  return std::numeric_limits<double>::infinity();
}

std::string kernel_name(const KernelSpec& kernel) {
  if (std::holds_alternative<ExponentialKernel>(kernel.kind)) return "exponential";
  if (std::holds_alternative<PowerLawKernel>(kernel.kind)) return "power_law";
  return "tail_of_duration";
}

}  // namespace eseplab
