#include "eseplab/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eseplab {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveRate: return "NonPositiveRate";
    case ErrorCode::AffineMismatch: return "AffineMismatch";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::InvalidInitialState: return "InvalidInitialState";
    case ErrorCode::TimeOutOfRange: return "TimeOutOfRange";
    case ErrorCode::ExplosionGuard: return "ExplosionGuard";
    case ErrorCode::NonMonotoneKernel: return "NonMonotoneKernel";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::BranchViolation: return "BranchViolation";
    case ErrorCode::Unstable: return "Unstable";
    case ErrorCode::DimensionOverflow: return "DimensionOverflow";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::CapacityMissing: return "CapacityMissing";
    case ErrorCode::UnknownClaim: return "UnknownClaim";
    case ErrorCode::DuplicateClaim: return "DuplicateClaim";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

const char* model_name(ModelTag model) {
  switch (model) {
    case ModelTag::Esep: return "esep";
    case ModelTag::Hawkes: return "hawkes";
    case ModelTag::NGesep: return "ngesep";
    case ModelTag::Hesep: return "hesep";
    case ModelTag::EsepB: return "esep_b";
    case ModelTag::Sis: return "sis";
  }
  return "unknown";
}

ModelTag parse_model(const std::string& name) {
  for (ModelTag m : {ModelTag::Esep, ModelTag::Hawkes, ModelTag::NGesep, ModelTag::Hesep, ModelTag::EsepB,
                     ModelTag::Sis}) {
    if (name == model_name(m)) return m;
  }
  throw Error(ErrorCode::ConfigInvalid, "unknown model '" + name + "'");
}

const char* event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::Arrival: return "arrival";
    case EventKind::Expiration: return "expiration";
    case EventKind::Block: return "block";
  }
  return "unknown";
}

EventKind parse_event_kind(const std::string& name) {
  if (name == "arrival") return EventKind::Arrival;
  if (name == "expiration") return EventKind::Expiration;
  if (name == "block") return EventKind::Block;
  throw Error(ErrorCode::ConfigInvalid, "unknown event kind '" + name + "'");
}

namespace {

void require_rate(double v, const char* name, bool allow_zero) {
  if (!std::isfinite(v) || v < 0.0 || (!allow_zero && v == 0.0)) {
    throw Error(ErrorCode::NonPositiveRate, std::string(name) + " must be " + (allow_zero ? ">= 0" : "> 0"));
  }
}

bool esep_family(ModelTag m) { return m == ModelTag::Esep || m == ModelTag::EsepB || m == ModelTag::NGesep; }

}  // namespace

bool is_stable(const ModelParams& p, ModelTag model) {
  switch (model) {
    case ModelTag::Sis: return true;
    case ModelTag::NGesep: {
      if (!p.batch_law || !p.duration_law) return false;
      const double rho = p.jump * law_mean(*p.batch_law) / static_cast<double>(p.scale) * law_mean(*p.duration_law);
      return rho < 1.0;
    }
    default: return p.expire_rate + p.decay_rate > p.jump;
  }
}

ModelParams validate_params(const ModelParams& p, ModelTag model) {
  ModelParams v = p;
  require_rate(p.baseline, "baseline", model == ModelTag::Sis);
  require_rate(p.jump, "jump", true);
  require_rate(p.expire_rate, "expire_rate", true);
  require_rate(p.decay_rate, "decay_rate", true);
  if (p.q0 < 0 || p.n0 < 0) throw Error(ErrorCode::InvalidInitialState, "q0 and n0 must be >= 0");
  if (p.scale < 1) throw Error(ErrorCode::DomainViolation, "scale n must be >= 1");
  if (model != ModelTag::NGesep && p.scale != 1) {
    throw Error(ErrorCode::DomainViolation, "scale is only used by the n-GESEP");
  }

  if (model == ModelTag::EsepB) {
    if (!p.capacity) throw Error(ErrorCode::MissingField, "capacity is required for esep_b");
    if (*p.capacity < 0) throw Error(ErrorCode::DomainViolation, "capacity must be >= 0");
    if (p.q0 > *p.capacity) throw Error(ErrorCode::InvalidInitialState, "q0 exceeds capacity");
  } else if (p.capacity) {
    throw Error(ErrorCode::DomainViolation, "capacity is only used by esep_b");
  }

  if (model == ModelTag::Sis) {
    if (!p.population) throw Error(ErrorCode::MissingField, "population is required for sis");
    if (*p.population < 1) throw Error(ErrorCode::DomainViolation, "population must be >= 1");
    if (p.q0 > *p.population) throw Error(ErrorCode::InvalidInitialState, "I0 exceeds population");
  } else if (p.population) {
    throw Error(ErrorCode::DomainViolation, "population is only used by sis");
  }

  if (model == ModelTag::NGesep) {
    if (!p.batch_law) throw Error(ErrorCode::MissingField, "batch_law is required for ngesep");
    if (!p.duration_law) throw Error(ErrorCode::MissingField, "duration_law is required for ngesep");
    validate_law(*p.batch_law);
    validate_law(*p.duration_law);
  } else if (p.batch_law || p.duration_law) {
    throw Error(ErrorCode::DomainViolation, "batch_law/duration_law are only used by ngesep");
  }

  const double affine = p.baseline + p.jump / static_cast<double>(p.scale) * static_cast<double>(p.q0);
  if (esep_family(model)) {
    if (p.intensity0) {
      if (std::fabs(*p.intensity0 - affine) > 1e-9 * std::max(1.0, std::fabs(affine))) {
        throw Error(ErrorCode::AffineMismatch, "intensity0 must equal baseline + jump*q0/n = " + std::to_string(affine));
      }
    }
    v.intensity0 = affine;
  } else if (model == ModelTag::Hawkes) {
    if (!v.intensity0) v.intensity0 = p.baseline;
    if (*v.intensity0 < p.baseline) throw Error(ErrorCode::InvalidInitialState, "intensity0 below baseline");
  } else if (model == ModelTag::Hesep) {
    if (!v.intensity0) v.intensity0 = affine;
    const double excess = *v.intensity0 - p.baseline;
    if (excess < 0.0) throw Error(ErrorCode::InvalidInitialState, "intensity0 below baseline");
    if (excess > p.jump * static_cast<double>(p.q0) * (1.0 + 1e-12) + 1e-12) {
      throw Error(ErrorCode::InvalidInitialState, "intensity0 - baseline must not exceed jump*q0");
    }
  } else {
    v.intensity0 = (p.baseline + p.jump * static_cast<double>(p.q0)) *
                   static_cast<double>(*p.population - p.q0) / static_cast<double>(*p.population);
  }
  v.stable = is_stable(v, model);
  return v;
}

double default_burn_in(const ModelParams& p, ModelTag model) {
  if (model == ModelTag::NGesep) {
    const double rho = p.jump * law_mean(*p.batch_law) / static_cast<double>(p.scale) * law_mean(*p.duration_law);
    if (rho >= 1.0) throw Error(ErrorCode::Unstable, "burn-in needs a stable n-GESEP");
    return 20.0 * law_mean(*p.duration_law) / (1.0 - rho);
  }
  const double gap = p.expire_rate + p.decay_rate - p.jump;
  if (gap > 0.0) return 20.0 / gap;
  if (model == ModelTag::Sis) return 20.0 / p.expire_rate;
  throw Error(ErrorCode::Unstable, "burn-in needs expire_rate + decay_rate > jump");
}

namespace {

double hawkes_intensity(const SamplePath& path, double t) {
  const ModelParams& p = path.params;
  const KernelSpec& kernel = *path.kernel;
  const double g0 = kernel_value(kernel, 0.0);
  double lambda = p.baseline;
  const double excess = *p.intensity0 - p.baseline;
  if (excess > 0.0 && g0 > 0.0) lambda += excess * kernel_value(kernel, t) / g0;
  for (const Event& e : path.events) {
    if (e.time > t) break;
    if (e.kind == EventKind::Arrival) lambda += e.mark * kernel_value(kernel, t - e.time);
  }
  return lambda;
}

double hesep_intensity(const SamplePath& path, double t) {
  const ModelParams& p = path.params;
  double nu = *p.intensity0;
  std::int64_t q = p.q0;
  double now = 0.0;
  for (const Event& e : path.events) {
    if (e.time > t) break;
    nu = p.baseline + (nu - p.baseline) * std::exp(-p.decay_rate * (e.time - now));
    now = e.time;
    if (e.kind == EventKind::Arrival) {
      nu += p.jump;
      ++q;
    } else if (e.kind == EventKind::Expiration) {
      nu -= (nu - p.baseline) / static_cast<double>(q);
      --q;
    }
  }
  return p.baseline + (nu - p.baseline) * std::exp(-p.decay_rate * (t - now));
}

}  // namespace

StateAt reconstruct_state(const SamplePath& path, double t) {
  if (!(t >= 0.0 && t <= path.horizon)) throw Error(ErrorCode::TimeOutOfRange, "t outside [0, horizon]");
  const ModelParams& p = path.params;
  StateAt s{p.q0, p.n0, 0.0};
  for (const Event& e : path.events) {
    if (e.time > t) break;
    if (e.kind == EventKind::Arrival) {
      s.q += e.batch;
      s.n += 1;
    } else if (e.kind == EventKind::Expiration) {
      s.q -= 1;
    }
  }
  switch (path.model) {
    case ModelTag::Hawkes: s.intensity = hawkes_intensity(path, t); break;
    case ModelTag::Hesep: s.intensity = hesep_intensity(path, t); break;
    case ModelTag::Sis: {
      const double n = static_cast<double>(*p.population);
      s.intensity = (p.baseline + p.jump * static_cast<double>(s.q)) * (n - static_cast<double>(s.q)) / n;
      break;
    }
    default:
      s.intensity = p.baseline + p.jump / static_cast<double>(p.scale) * static_cast<double>(s.q);
  }
  return s;
}

EmpiricalSummary summarize_discrete(const std::vector<std::int64_t>& values, std::uint64_t seed,
                                    std::uint64_t first_stream) {
  if (values.empty()) throw Error(ErrorCode::EmptySample, "no samples to summarize");
  EmpiricalSummary s;
  s.samples = values.size();
  double mean = 0.0, m2 = 0.0;
  std::uint64_t k = 0;
  for (std::int64_t v : values) {
    ++s.histogram[v];
    ++k;
    const double d = static_cast<double>(v) - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (static_cast<double>(v) - mean);
  }
  s.mean = mean;
  s.variance = values.size() > 1 ? m2 / static_cast<double>(values.size() - 1) : 0.0;
  s.seed = seed;
  s.first_stream = first_stream;
  s.last_stream = first_stream + values.size() - 1;
  return s;
}

EmpiricalSummary summarize_continuous(const std::vector<double>& values, std::uint64_t seed,
                                      std::uint64_t first_stream) {
  if (values.empty()) throw Error(ErrorCode::EmptySample, "no samples to summarize");
  EmpiricalSummary s;
  s.samples = values.size();
  s.sorted = values;
  std::sort(s.sorted.begin(), s.sorted.end());
  double mean = 0.0, m2 = 0.0;
  std::uint64_t k = 0;
  for (double v : values) {
    ++k;
    const double d = v - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (v - mean);
  }
  s.mean = mean;
  s.variance = values.size() > 1 ? m2 / static_cast<double>(values.size() - 1) : 0.0;
  s.seed = seed;
  s.first_stream = first_stream;
  s.last_stream = first_stream + values.size() - 1;
  return s;
}

}  // namespace eseplab
