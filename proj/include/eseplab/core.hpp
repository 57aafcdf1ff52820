#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eseplab/error.hpp"
#include "eseplab/kernel.hpp"
#include "eseplab/laws.hpp"
#include "eseplab/rng.hpp"

namespace eseplab {

enum class ModelTag { Esep, Hawkes, NGesep, Hesep, EsepB, Sis };

const char* model_name(ModelTag model);
ModelTag parse_model(const std::string& name);

struct ModelParams {
  double baseline = 0.0;     // eta*, lambda*, nu*
  double jump = 0.0;         // alpha
  double expire_rate = 0.0;  // beta (ESEP family), mu (HESEP, n-GESEP service)
  double decay_rate = 0.0;   // beta (Hawkes, HESEP)
  std::optional<std::int64_t> capacity;
  std::optional<BatchLaw> batch_law;
  std::optional<ContinuousLaw> duration_law;
  std::optional<std::int64_t> population;
  std::int64_t q0 = 0;
  std::int64_t n0 = 0;
  std::optional<double> intensity0;
  std::int64_t scale = 1;  // n of the n-GESEP
  bool stable = false;     // set by validate_params
};

// Fills intensity0 defaults and the stability flag.
ModelParams validate_params(const ModelParams& p, ModelTag model);
bool is_stable(const ModelParams& p, ModelTag model);
// default steady-state burn-in: 20 relaxation times
double default_burn_in(const ModelParams& p, ModelTag model);

enum class EventKind { Arrival, Expiration, Block };

const char* event_kind_name(EventKind kind);
EventKind parse_event_kind(const std::string& name);

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::Arrival;
  std::int64_t batch = 1;
  double mark = 1.0;
  bool operator==(const Event&) const = default;
};

struct SimDiagnostics {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
  double acceptance_rate() const { return proposals == 0 ? 1.0 : static_cast<double>(accepted) / proposals; }
};

struct SamplePath {
  ModelTag model = ModelTag::Esep;
  ModelParams params;
  std::optional<KernelSpec> kernel;
  double horizon = 0.0;
  RngStreamSpec rng;
  std::vector<Event> events;
  SimDiagnostics diagnostics;
};

struct StateAt {
  std::int64_t q = 0;
  std::int64_t n = 0;
  double intensity = 0.0;
};

StateAt reconstruct_state(const SamplePath& path, double t);

struct EmpiricalSummary {
  std::uint64_t samples = 0;
  std::map<std::int64_t, std::uint64_t> histogram;  // discrete data
  std::vector<double> sorted;                       // continuous data
  double mean = 0.0;
  double variance = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t first_stream = 0;
  std::uint64_t last_stream = 0;
};

EmpiricalSummary summarize_discrete(const std::vector<std::int64_t>& values, std::uint64_t seed,
                                    std::uint64_t first_stream);
EmpiricalSummary summarize_continuous(const std::vector<double>& values, std::uint64_t seed,
                                      std::uint64_t first_stream);

}  // namespace eseplab
