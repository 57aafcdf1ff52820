#include "eseplab/laws.hpp"

#include <cmath>
#include <numeric>

#include "eseplab/error.hpp"

namespace eseplab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

void validate_law(const ContinuousLaw& law) {
  std::visit(overloaded{
                 [](const ExponentialLaw& l) {
                   if (!(l.rate > 0.0)) throw Error(ErrorCode::NonPositiveRate, "exponential rate must be > 0");
                 },
                 [](const DeterministicLaw& l) {
                   if (!(l.value > 0.0)) throw Error(ErrorCode::NonPositiveRate, "deterministic value must be > 0");
                 },
                 [](const LogNormalLaw& l) {
                   if (!(l.sigma >= 0.0) || !std::isfinite(l.mu)) {
                     throw Error(ErrorCode::DomainViolation, "lognormal needs finite mu and sigma >= 0");
                   }
                 },
                 [](const HyperExponentialLaw& l) {
                   if (l.probs.empty() || l.probs.size() != l.rates.size()) {
                     throw Error(ErrorCode::DomainViolation, "hyperexponential probs/rates size mismatch");
                   }
                   double total = 0.0;
                   for (std::size_t i = 0; i < l.probs.size(); ++i) {
                     if (!(l.probs[i] >= 0.0)) throw Error(ErrorCode::DomainViolation, "negative mixture weight");
                     if (!(l.rates[i] > 0.0)) throw Error(ErrorCode::NonPositiveRate, "mixture rate must be > 0");
                     total += l.probs[i];
                   }
                   if (std::fabs(total - 1.0) > 1e-9) throw Error(ErrorCode::DomainViolation, "mixture weights must sum to 1");
                 },
             },
             law);
}

void validate_law(const BatchLaw& law) {
  std::visit(overloaded{
                 [](const FixedBatch& b) {
                   if (b.size < 1) throw Error(ErrorCode::DomainViolation, "batch size must be >= 1");
                 },
                 [](const GeometricBatch& b) {
                   if (!(b.p > 0.0 && b.p <= 1.0)) throw Error(ErrorCode::DomainViolation, "geometric batch p in (0,1]");
                 },
             },
             law);
}

double law_mean(const ContinuousLaw& law) {
  return std::visit(overloaded{
                        [](const ExponentialLaw& l) { return 1.0 / l.rate; },
                        [](const DeterministicLaw& l) { return l.value; },
                        [](const LogNormalLaw& l) { return std::exp(l.mu + 0.5 * l.sigma * l.sigma); },
                        [](const HyperExponentialLaw& l) {
                          double m = 0.0;
                          for (std::size_t i = 0; i < l.probs.size(); ++i) m += l.probs[i] / l.rates[i];
                          return m;
                        },
                    },
                    law);
}

double law_mean(const BatchLaw& law) {
  return std::visit(overloaded{
                        [](const FixedBatch& b) { return static_cast<double>(b.size); },
                        [](const GeometricBatch& b) { return 1.0 / b.p; },
                    },
                    law);
}

double law_tail(const ContinuousLaw& law, double x) {
  if (x < 0.0) return 1.0;
  return std::visit(overloaded{
                        [x](const ExponentialLaw& l) { return std::exp(-l.rate * x); },
                        [x](const DeterministicLaw& l) { return x < l.value ? 1.0 : 0.0; },
                        [x](const LogNormalLaw& l) {
                          if (x == 0.0) return 1.0;
                          if (l.sigma == 0.0) return x < std::exp(l.mu) ? 1.0 : 0.0;
                          return 0.5 * std::erfc((std::log(x) - l.mu) / (l.sigma * std::sqrt(2.0)));
                        },
                        [x](const HyperExponentialLaw& l) {
                          double s = 0.0;
                          for (std::size_t i = 0; i < l.probs.size(); ++i) s += l.probs[i] * std::exp(-l.rates[i] * x);
                          return s;
                        },
                    },
                    law);
}

double law_sample(const ContinuousLaw& law, RandomStream& rng) {
  return std::visit(overloaded{
                        [&rng](const ExponentialLaw& l) { return rng.exponential(l.rate); },
                        [](const DeterministicLaw& l) { return l.value; },
                        [&rng](const LogNormalLaw& l) { return std::exp(l.mu + l.sigma * rng.standard_normal()); },
                        [&rng](const HyperExponentialLaw& l) {
                          const double u = rng.uniform();
                          double acc = 0.0;
                          std::size_t i = 0;
                          for (; i + 1 < l.probs.size(); ++i) {
                            acc += l.probs[i];
                            if (u < acc) break;
                          }
                          return rng.exponential(l.rates[i]);
                        },
                    },
                    law);
}

std::int64_t law_sample(const BatchLaw& law, RandomStream& rng) {
  return std::visit(overloaded{
                        [](const FixedBatch& b) { return b.size; },
                        [&rng](const GeometricBatch& b) { return 1 + rng.geometric_failures(b.p); },
                    },
                    law);
}

bool law_is_continuous(const ContinuousLaw& law) {
  return !std::holds_alternative<DeterministicLaw>(law);
}

std::string law_name(const ContinuousLaw& law) {
  return std::visit(overloaded{
                        [](const ExponentialLaw&) { return std::string("exponential"); },
                        [](const DeterministicLaw&) { return std::string("deterministic"); },
                        [](const LogNormalLaw&) { return std::string("lognormal"); },
                        [](const HyperExponentialLaw&) { return std::string("hyperexponential"); },
                    },
                    law);
}

std::string law_name(const BatchLaw& law) {
  return std::visit(overloaded{
                        [](const FixedBatch&) { return std::string("deterministic"); },
                        [](const GeometricBatch&) { return std::string("geometric"); },
                    },
                    law);
}

}  // namespace eseplab
