#include "eseplab/serialization.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace eseplab {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); }

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) bad(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) bad(where + ": unknown key '" + it.key() + "'");
  }
}

template <typename T>
T get(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) bad(where + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    bad(where + ": bad value for '" + key + "'");
  }
}

template <typename T>
void get_opt(const Json& j, const char* key, T& out, const std::string& where) {
  if (j.contains(key)) out = get<T>(j, key, where);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& s) {
  if (s == "nan" || s == "-nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) bad("not a number: '" + s + "'");
  return v;
}

std::int64_t parse_int(const std::string& s) {
  std::int64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) bad("not an integer: '" + s + "'");
  return v;
}

Json law_to_json(const ContinuousLaw& law) {
  return std::visit(
      [](const auto& l) -> Json {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, ExponentialLaw>) return {{"type", "exponential"}, {"rate", l.rate}};
        if constexpr (std::is_same_v<T, DeterministicLaw>) return {{"type", "deterministic"}, {"value", l.value}};
        if constexpr (std::is_same_v<T, LogNormalLaw>)
          return {{"type", "lognormal"}, {"mu", l.mu}, {"sigma", l.sigma}};
        if constexpr (std::is_same_v<T, HyperExponentialLaw>)
          return {{"type", "hyperexponential"}, {"probs", l.probs}, {"rates", l.rates}};
      },
      law);
}

Json law_to_json(const BatchLaw& law) {
  if (const auto* f = std::get_if<FixedBatch>(&law)) return {{"type", "fixed"}, {"size", f->size}};
  return {{"type", "geometric"}, {"p", std::get<GeometricBatch>(law).p}};
}

ContinuousLaw continuous_law_from_json(const Json& j) {
  const std::string where = "duration law";
  if (!j.is_object()) bad(where + ": expected an object");
  const auto type = get<std::string>(j, "type", where);
  ContinuousLaw law;
  if (type == "exponential") {
    check_keys(j, {"type", "rate"}, where);
    law = ExponentialLaw{get<double>(j, "rate", where)};
  } else if (type == "deterministic") {
    check_keys(j, {"type", "value"}, where);
    law = DeterministicLaw{get<double>(j, "value", where)};
  } else if (type == "lognormal") {
    check_keys(j, {"type", "mu", "sigma"}, where);
    law = LogNormalLaw{get<double>(j, "mu", where), get<double>(j, "sigma", where)};
  } else if (type == "hyperexponential") {
    check_keys(j, {"type", "probs", "rates"}, where);
    law = HyperExponentialLaw{get<std::vector<double>>(j, "probs", where), get<std::vector<double>>(j, "rates", where)};
  } else {
    bad(where + ": unknown type '" + type + "'");
  }
  validate_law(law);
  return law;
}

BatchLaw batch_law_from_json(const Json& j) {
  const std::string where = "batch law";
  if (!j.is_object()) bad(where + ": expected an object");
  const auto type = get<std::string>(j, "type", where);
  BatchLaw law;
  if (type == "fixed") {
    check_keys(j, {"type", "size"}, where);
    law = FixedBatch{get<std::int64_t>(j, "size", where)};
  } else if (type == "geometric") {
    check_keys(j, {"type", "p"}, where);
    law = GeometricBatch{get<double>(j, "p", where)};
  } else {
    bad(where + ": unknown type '" + type + "'");
  }
  validate_law(law);
  return law;
}

Json kernel_to_json(const KernelSpec& kernel) {
  Json j;
  if (const auto* e = std::get_if<ExponentialKernel>(&kernel.kind)) {
    j = {{"type", "exponential"}, {"alpha", e->alpha}, {"beta", e->beta}};
  } else if (const auto* p = std::get_if<PowerLawKernel>(&kernel.kind)) {
    j = {{"type", "power_law"}, {"k", p->k}, {"c", p->c}, {"p", p->p}};
  } else {
    j = {{"type", "tail"}, {"duration", law_to_json(std::get<TailKernel>(kernel.kind).duration)}};
  }
  j["mark_law"] = law_to_json(kernel.mark_law);
  return j;
}

KernelSpec kernel_from_json(const Json& j) {
  const std::string where = "kernel";
  if (!j.is_object()) bad(where + ": expected an object");
  const auto type = get<std::string>(j, "type", where);
  KernelSpec k;
  if (type == "exponential") {
    check_keys(j, {"type", "alpha", "beta", "mark_law"}, where);
    k.kind = ExponentialKernel{get<double>(j, "alpha", where), get<double>(j, "beta", where)};
  } else if (type == "power_law") {
    check_keys(j, {"type", "k", "c", "p", "mark_law"}, where);
    k.kind = PowerLawKernel{get<double>(j, "k", where), get<double>(j, "c", where), get<double>(j, "p", where)};
  } else if (type == "tail") {
    check_keys(j, {"type", "duration", "mark_law"}, where);
    k.kind = TailKernel{continuous_law_from_json(j.at("duration"))};
  } else {
    bad(where + ": unknown type '" + type + "'");
  }
  if (j.contains("mark_law")) k.mark_law = continuous_law_from_json(j.at("mark_law"));
  validate_kernel(k);
  return k;
}

Json params_to_json(const ModelParams& p) {
  Json j = {{"baseline", p.baseline}, {"jump", p.jump},   {"expire_rate", p.expire_rate},
            {"decay_rate", p.decay_rate}, {"q0", p.q0}, {"n0", p.n0},
            {"scale", p.scale}};
  if (p.capacity) j["capacity"] = *p.capacity;
  if (p.batch_law) j["batch_law"] = law_to_json(*p.batch_law);
  if (p.duration_law) j["duration_law"] = law_to_json(*p.duration_law);
  if (p.population) j["population"] = *p.population;
  if (p.intensity0) j["intensity0"] = *p.intensity0;
  return j;
}

ModelParams params_from_json(const Json& j) {
  const std::string where = "params";
  check_keys(j,
             {"baseline", "jump", "expire_rate", "decay_rate", "capacity", "batch_law", "duration_law", "population",
              "q0", "n0", "intensity0", "scale"},
             where);
  ModelParams p;
  get_opt(j, "baseline", p.baseline, where);
  get_opt(j, "jump", p.jump, where);
  get_opt(j, "expire_rate", p.expire_rate, where);
  get_opt(j, "decay_rate", p.decay_rate, where);
  get_opt(j, "q0", p.q0, where);
  get_opt(j, "n0", p.n0, where);
  get_opt(j, "scale", p.scale, where);
  if (j.contains("capacity")) p.capacity = get<std::int64_t>(j, "capacity", where);
  if (j.contains("population")) p.population = get<std::int64_t>(j, "population", where);
  if (j.contains("intensity0")) p.intensity0 = get<double>(j, "intensity0", where);
  if (j.contains("batch_law")) p.batch_law = batch_law_from_json(j.at("batch_law"));
  if (j.contains("duration_law")) p.duration_law = continuous_law_from_json(j.at("duration_law"));
  return p;
}

std::string events_to_csv(const std::vector<Event>& events, bool with_mark) {
  std::string out = with_mark ? "time,kind,batch,mark\n" : "time,kind,batch\n";
  for (const Event& e : events) {
    out += format_double(e.time);
    out += ',';
    out += event_kind_name(e.kind);
    out += ',';
    out += std::to_string(e.batch);
    if (with_mark) {
      out += ',';
      out += format_double(e.mark);
    }
    out += '\n';
  }
  return out;
}

std::vector<Event> events_from_csv(const std::string& csv) {
  const auto lines = lines_of(csv);
  if (lines.empty()) bad("event CSV: missing header");
  const bool with_mark = lines[0] == "time,kind,batch,mark";
  if (!with_mark && lines[0] != "time,kind,batch") bad("event CSV: unexpected header '" + lines[0] + "'");
  std::vector<Event> events;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != (with_mark ? 4u : 3u)) bad("event CSV: bad row " + std::to_string(i));
    Event e;
    e.time = parse_double(f[0]);
    e.kind = parse_event_kind(f[1]);
    e.batch = parse_int(f[2]);
    if (with_mark) e.mark = parse_double(f[3]);
    events.push_back(e);
  }
  return events;
}

bool path_has_marks(const SamplePath& path) {
  return path.model == ModelTag::Hawkes && path.kernel &&
         !std::holds_alternative<DeterministicLaw>(path.kernel->mark_law);
}

std::string path_to_csv(const SamplePath& path) { return events_to_csv(path.events, path_has_marks(path)); }

Json path_envelope(const SamplePath& path) {
  Json j = {{"model", model_name(path.model)},
            {"params", params_to_json(path.params)},
            {"horizon", path.horizon},
            {"seed", path.rng.seed},
            {"stream", path.rng.stream_id},
            {"events", path.events.size()},
            {"proposals", path.diagnostics.proposals},
            {"accepted", path.diagnostics.accepted}};
  if (path.kernel) j["kernel"] = kernel_to_json(*path.kernel);
  return j;
}

SamplePath path_from_files(const std::string& csv, const Json& envelope) {
  const std::string where = "path envelope";
  check_keys(envelope, {"model", "params", "kernel", "horizon", "seed", "stream", "events", "proposals", "accepted"},
             where);
  SamplePath path;
  path.model = parse_model(get<std::string>(envelope, "model", where));
  path.params = validate_params(params_from_json(envelope.at("params")), path.model);
  if (envelope.contains("kernel")) path.kernel = kernel_from_json(envelope.at("kernel"));
  path.horizon = get<double>(envelope, "horizon", where);
  path.rng = {get<std::uint64_t>(envelope, "seed", where), get<std::uint64_t>(envelope, "stream", where)};
  get_opt(envelope, "proposals", path.diagnostics.proposals, where);
  get_opt(envelope, "accepted", path.diagnostics.accepted, where);
  path.events = events_from_csv(csv);
  if (envelope.contains("events") && get<std::size_t>(envelope, "events", where) != path.events.size()) {
    bad(where + ": event count does not match the CSV");
  }
  return path;
}

Json summary_to_json(const EmpiricalSummary& s) {
  Json j = {{"samples", s.samples},   {"mean", s.mean},           {"variance", s.variance},
            {"seed", s.seed},         {"first_stream", s.first_stream}, {"last_stream", s.last_stream}};
  if (!s.histogram.empty()) {
    Json h = Json::array();
    for (const auto& [k, c] : s.histogram) h.push_back({k, c});
    j["histogram"] = h;
  }
  return j;
}

std::string sweep_to_csv(const SweepReport& r) {
  std::string out = "scale,metric,value,samples,seed\n";
  for (const SweepRow& row : r.rows) {
    out += format_double(row.scale) + ',' + row.metric_name + ',' + format_double(row.metric_value) + ',' +
           std::to_string(row.samples) + ',' + std::to_string(row.seed) + '\n';
  }
  return out;
}

SweepReport sweep_from_csv(const std::string& csv) {
  const auto lines = lines_of(csv);
  if (lines.empty() || lines[0] != "scale,metric,value,samples,seed") bad("sweep CSV: unexpected header");
  SweepReport r;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != 5) bad("sweep CSV: bad row " + std::to_string(i));
    r.rows.push_back({parse_double(f[0]), f[1], parse_double(f[2]), static_cast<std::uint64_t>(parse_int(f[3])),
                      static_cast<std::uint64_t>(std::stoull(f[4]))});
  }
  return r;
}

std::string pmf_to_csv(const std::vector<double>& probs) {
  std::string out = "k,probability\n";
  for (std::size_t k = 0; k < probs.size(); ++k) out += std::to_string(k) + ',' + format_double(probs[k]) + '\n';
  return out;
}

std::vector<double> pmf_from_csv(const std::string& csv) {
  const auto lines = lines_of(csv);
  if (lines.empty() || lines[0] != "k,probability") bad("pmf CSV: unexpected header");
  std::vector<double> probs;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != 2 || parse_int(f[0]) != static_cast<std::int64_t>(i - 1)) bad("pmf CSV: bad row");
    probs.push_back(parse_double(f[1]));
  }
  return probs;
}

std::string transforms_to_csv(const std::vector<std::string>& argument_names, const std::vector<TransformRow>& rows) {
  std::string out;
  for (const auto& n : argument_names) out += n + ',';
  out += "value,in_domain\n";
  for (const TransformRow& r : rows) {
    if (r.argument.size() != argument_names.size()) bad("transform CSV: argument arity mismatch");
    for (double a : r.argument) out += format_double(a) + ',';
    out += format_double(r.value) + ',' + (r.in_domain ? "1" : "0") + '\n';
  }
  return out;
}

std::vector<TransformRow> transforms_from_csv(const std::string& csv) {
  const auto lines = lines_of(csv);
  if (lines.empty()) bad("transform CSV: missing header");
  const auto header = split(lines[0], ',');
  if (header.size() < 2 || header[header.size() - 2] != "value" || header.back() != "in_domain") {
    bad("transform CSV: unexpected header");
  }
  std::vector<TransformRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != header.size()) bad("transform CSV: bad row " + std::to_string(i));
    TransformRow r;
    for (std::size_t c = 0; c + 2 < f.size(); ++c) r.argument.push_back(parse_double(f[c]));
    r.value = parse_double(f[f.size() - 2]);
    r.in_domain = f.back() == "1";
    rows.push_back(r);
  }
  return rows;
}

RunConfig run_config_from_json(const Json& j) {
  const std::string where = "config";
  check_keys(j,
             {"model", "params", "kernel", "horizon", "replications", "seed", "out", "threads", "quantity",
              "theta_grid", "z_grid", "t_grid", "k_max", "n_list", "gamma_list", "batch_family", "spacing", "burn_in",
              "claims"},
             where);
  RunConfig c;
  if (j.contains("model")) c.model = parse_model(get<std::string>(j, "model", where));
  if (j.contains("params")) c.params = params_from_json(j.at("params"));
  if (j.contains("kernel")) c.kernel = kernel_from_json(j.at("kernel"));
  get_opt(j, "horizon", c.horizon, where);
  get_opt(j, "replications", c.replications, where);
  c.replications_set = j.contains("replications");
  get_opt(j, "seed", c.seed, where);
  get_opt(j, "out", c.out, where);
  get_opt(j, "threads", c.threads, where);
  get_opt(j, "quantity", c.quantity, where);
  get_opt(j, "theta_grid", c.theta_grid, where);
  get_opt(j, "z_grid", c.z_grid, where);
  get_opt(j, "t_grid", c.t_grid, where);
  get_opt(j, "k_max", c.k_max, where);
  get_opt(j, "n_list", c.n_list, where);
  get_opt(j, "gamma_list", c.gamma_list, where);
  get_opt(j, "batch_family", c.batch_family, where);
  get_opt(j, "spacing", c.spacing, where);
  get_opt(j, "burn_in", c.burn_in, where);
  get_opt(j, "claims", c.claims, where);
  if (c.replications == 0) bad("replications must be >= 1");
  if (c.threads < 0) bad("threads must be >= 0");
  if (!(c.horizon > 0.0)) bad("horizon must be > 0");
  if (c.batch_family != "deterministic" && c.batch_family != "geometric") bad("batch_family must be deterministic or geometric");
  return c;
}

Json run_config_to_json(const RunConfig& c) {
  Json j = {{"model", model_name(c.model)},
            {"params", params_to_json(c.params)},
            {"horizon", c.horizon},
            {"replications", c.replications},
            {"seed", c.seed},
            {"out", c.out},
            {"threads", c.threads},
            {"quantity", c.quantity},
            {"theta_grid", c.theta_grid},
            {"z_grid", c.z_grid},
            {"t_grid", c.t_grid},
            {"k_max", c.k_max},
            {"n_list", c.n_list},
            {"gamma_list", c.gamma_list},
            {"batch_family", c.batch_family},
            {"spacing", c.spacing},
            {"burn_in", c.burn_in},
            {"claims", c.claims}};
  if (c.kernel) j["kernel"] = kernel_to_json(*c.kernel);
  return j;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json read_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    bad(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace eseplab
