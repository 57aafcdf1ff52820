#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "eseplab/analytics.hpp"
#include "eseplab/core.hpp"
#include "eseplab/sweep.hpp"

namespace eseplab {

using Json = nlohmann::json;

// Locale-independent number formatting (%.17g) and parsing.
std::string format_double(double x);
double parse_double(const std::string& s);
std::int64_t parse_int(const std::string& s);

Json law_to_json(const ContinuousLaw& law);
Json law_to_json(const BatchLaw& law);
ContinuousLaw continuous_law_from_json(const Json& j);
BatchLaw batch_law_from_json(const Json& j);
Json kernel_to_json(const KernelSpec& kernel);
KernelSpec kernel_from_json(const Json& j);
// Unknown keys are rejected with ConfigInvalid.
Json params_to_json(const ModelParams& p);
ModelParams params_from_json(const Json& j);

// time,kind,batch[,mark]
std::string events_to_csv(const std::vector<Event>& events, bool with_mark);
std::vector<Event> events_from_csv(const std::string& csv);
bool path_has_marks(const SamplePath& path);
std::string path_to_csv(const SamplePath& path);
// model, params, kernel, horizon, seed, stream, diagnostics
Json path_envelope(const SamplePath& path);
SamplePath path_from_files(const std::string& csv, const Json& envelope);

Json summary_to_json(const EmpiricalSummary& s);

// scale,metric,value,samples,seed
std::string sweep_to_csv(const SweepReport& r);
SweepReport sweep_from_csv(const std::string& csv);

// k,probability
std::string pmf_to_csv(const std::vector<double>& probs);
std::vector<double> pmf_from_csv(const std::string& csv);

struct TransformRow {
  std::vector<double> argument;
  double value = 0.0;
  bool in_domain = true;
  bool operator==(const TransformRow&) const = default;
};
// argument columns named by the caller, then value,in_domain
std::string transforms_to_csv(const std::vector<std::string>& argument_names, const std::vector<TransformRow>& rows);
std::vector<TransformRow> transforms_from_csv(const std::string& csv);

struct RunConfig {
  ModelTag model = ModelTag::Esep;
  ModelParams params;
  std::optional<KernelSpec> kernel;
  double horizon = 10.0;
  std::uint64_t replications = 1;
  bool replications_set = false;  // given explicitly (config or flag)
  std::uint64_t seed = 1;
  std::string out = "out";
  int threads = 0;  // 0: ESEPLAB_THREADS or hardware
  std::string quantity;  // analytic / sweep selector
  std::vector<double> theta_grid;
  std::vector<double> z_grid;
  std::vector<double> t_grid;
  std::int64_t k_max = 0;
  std::vector<std::int64_t> n_list;
  std::vector<double> gamma_list;
  std::string batch_family = "deterministic";
  double spacing = 0.0;
  double burn_in = 0.0;
  std::vector<std::string> claims;  // empty: default suite
};

RunConfig run_config_from_json(const Json& j);
Json run_config_to_json(const RunConfig& c);
// reads a file; parse failures are ConfigInvalid, missing file IoError
Json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace eseplab
