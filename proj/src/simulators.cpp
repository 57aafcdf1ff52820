#include "eseplab/simulators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eseplab {

namespace {

void check_horizon(double horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw Error(ErrorCode::TimeOutOfRange, "horizon must be finite and > 0");
}

void count_event(std::uint64_t& events, const SimOptions& opts) {
  if (++events > opts.max_events) {
    throw Error(ErrorCode::ExplosionGuard, "event cap of " + std::to_string(opts.max_events) + " exceeded");
  }
}

void log_event(std::vector<Event>* log, double t, EventKind kind, std::int64_t batch = 1, double mark = 1.0) {
  if (log) log->push_back(Event{t, kind, batch, mark});
}

SamplePath make_path(ModelTag model, const ModelParams& p, double horizon, RngStreamSpec rng) {
  SamplePath path;
  path.model = model;
  path.params = p;
  path.horizon = horizon;
  path.rng = rng;
  return path;
}

}  // namespace

EsepStepper::EsepStepper(const ModelParams& p, ModelTag model, RngStreamSpec rng, std::vector<Event>* log,
                         SimOptions opts)
    : baseline_(p.baseline),
      jump_(p.jump),
      expire_(p.expire_rate),
      cap_(model == ModelTag::EsepB ? p.capacity.value() : -1),
      rng_(rng),
      log_(log),
      opts_(opts),
      q_(p.q0),
      n_(p.n0) {}

void EsepStepper::advance_to(double t) {
  while (true) {
    const double up = baseline_ + jump_ * static_cast<double>(q_);
    const double down = expire_ * static_cast<double>(q_);
    const double next = now_ + rng_.exponential(up + down);
    const bool at_cap = q_ == cap_;
    if (next > t) {
      if (at_cap) time_at_cap_ += t - now_;
      now_ = std::max(now_, t);
      return;
    }
    if (at_cap) time_at_cap_ += next - now_;
    now_ = next;
    count_event(events_, opts_);
    if (rng_.uniform() * (up + down) < up) {
      if (at_cap) {
        ++blocked_;
        log_event(log_, now_, EventKind::Block);
      } else {
        ++admitted_;
        ++q_;
        ++n_;
        log_event(log_, now_, EventKind::Arrival);
      }
    } else {
      --q_;
      log_event(log_, now_, EventKind::Expiration);
    }
  }
}

SisStepper::SisStepper(const ModelParams& p, RngStreamSpec rng, std::vector<Event>* log, SimOptions opts)
    : baseline_(p.baseline),
      jump_(p.jump),
      recover_(p.expire_rate),
      pop_(p.population.value()),
      rng_(rng),
      log_(log),
      opts_(opts),
      i_(p.q0),
      n_(p.n0) {}

void SisStepper::advance_to(double t) {
  const double pop = static_cast<double>(pop_);
  while (true) {
    const double i = static_cast<double>(i_);
    const double up = (baseline_ + jump_ * i) * (pop - i) / pop;
    const double down = recover_ * i;
    const double next = now_ + rng_.exponential(up + down);
    if (next > t) {
      now_ = std::max(now_, t);
      return;
    }
    now_ = next;
    count_event(events_, opts_);
    if (rng_.uniform() * (up + down) < up) {
      ++i_;
      ++n_;
      log_event(log_, now_, EventKind::Arrival);
    } else {
      --i_;
      log_event(log_, now_, EventKind::Expiration);
    }
  }
}

HawkesStepper::HawkesStepper(const ModelParams& p, const KernelSpec& kernel, RngStreamSpec rng,
                             std::vector<Event>* log, SimOptions opts)
    : baseline_(p.baseline),
      kernel_(kernel),
      support_end_(kernel_support_end(kernel)),
      rng_(rng),
      log_(log),
      opts_(opts),
      n_(p.n0) {
  validate_kernel(kernel_);
  init_excess_ = p.intensity0.value_or(p.baseline) - p.baseline;
  g0_ = kernel_value(kernel_, 0.0);
  if (auto comps = exponential_components(kernel_)) {
    mixture_ = true;
    double total = 0.0;
    for (const auto& [w, r] : *comps) {
      weights_.push_back(w);
      rates_.push_back(r);
      total += w;
    }
    excess_.assign(weights_.size(), 0.0);
    if (init_excess_ > 0.0 && total > 0.0) {
      for (std::size_t i = 0; i < weights_.size(); ++i) excess_[i] = init_excess_ * weights_[i] / total;
    }
  }
}

double HawkesStepper::intensity_at(double t) const {
  if (mixture_) {
    double s = baseline_;
    for (std::size_t i = 0; i < excess_.size(); ++i) s += excess_[i] * std::exp(-rates_[i] * (t - now_));
    return s;
  }
  double s = baseline_;
  if (init_excess_ > 0.0 && g0_ > 0.0) s += init_excess_ * kernel_value(kernel_, t) / g0_;
  for (std::size_t j = history_start_; j < history_.size(); ++j) {
    s += history_[j].second * kernel_value(kernel_, t - history_[j].first);
  }
  return s;
}

void HawkesStepper::decay_to(double t) {
  if (mixture_) {
    for (std::size_t i = 0; i < excess_.size(); ++i) excess_[i] *= std::exp(-rates_[i] * (t - now_));
  } else if (std::isfinite(support_end_)) {
    while (history_start_ < history_.size() && t - history_[history_start_].first >= support_end_) ++history_start_;
    if (history_start_ > 4096 && 2 * history_start_ > history_.size()) {
      history_.erase(history_.begin(), history_.begin() + static_cast<std::ptrdiff_t>(history_start_));
      history_start_ = 0;
    }
  }
  now_ = t;
}

void HawkesStepper::advance_to(double t) {
  while (true) {
    const double bound = intensity_at(now_);
    const double candidate = now_ + rng_.exponential(bound);
    if (candidate > t) {
      decay_to(std::max(now_, t));
      return;
    }
    ++diag_.proposals;
    decay_to(candidate);
    const double lambda = intensity_at(now_);
    if (rng_.uniform() * bound >= lambda) continue;
    ++diag_.accepted;
    count_event(events_, opts_);
    const double mark = law_sample(kernel_.mark_law, rng_);
    ++n_;
    if (mixture_) {
      for (std::size_t i = 0; i < excess_.size(); ++i) excess_[i] += mark * weights_[i];
    } else {
      history_.emplace_back(now_, mark);
    }
    log_event(log_, now_, EventKind::Arrival, 1, mark);
  }
}

NGesepStepper::NGesepStepper(const ModelParams& p, RngStreamSpec rng, std::vector<Event>* log, SimOptions opts)
    : baseline_(p.baseline),
      jump_(p.jump),
      scale_(p.scale),
      batch_(p.batch_law.value()),
      duration_(p.duration_law.value()),
      rng_(rng),
      log_(log),
      opts_(opts),
      q_(0),
      n_(p.n0) {
  admit(p.q0);
}

void NGesepStepper::admit(std::int64_t count) {
  for (std::int64_t i = 0; i < count; ++i) expiries_.emplace(now_ + law_sample(duration_, rng_), seq_++);
  q_ += count;
}

void NGesepStepper::advance_to(double t) {
  while (true) {
    const double next_exp = expiries_.empty() ? std::numeric_limits<double>::infinity() : expiries_.top().first;
    const double candidate = now_ + rng_.exponential(intensity());
    if (std::min(candidate, next_exp) > t) {
      now_ = std::max(now_, t);
      return;
    }
    count_event(events_, opts_);
    if (candidate < next_exp) {
      now_ = candidate;
      const std::int64_t b = law_sample(batch_, rng_);
      admit(b);
      ++n_;
      log_event(log_, now_, EventKind::Arrival, b);
    } else {
      now_ = next_exp;
      expiries_.pop();
      --q_;
      log_event(log_, now_, EventKind::Expiration);
    }
  }
}

HesepStepper::HesepStepper(const ModelParams& p, RngStreamSpec rng, std::vector<Event>* log, SimOptions opts)
    : baseline_(p.baseline),
      jump_(p.jump),
      decay_(p.decay_rate),
      service_(p.expire_rate),
      rng_(rng),
      log_(log),
      opts_(opts),
      nu_(p.intensity0.value_or(p.baseline + p.jump * static_cast<double>(p.q0))),
      q_(p.q0),
      n_(p.n0) {}

void HesepStepper::decay_to(double t) {
  if (decay_ > 0.0) nu_ = baseline_ + (nu_ - baseline_) * std::exp(-decay_ * (t - now_));
  now_ = t;
}

void HesepStepper::advance_to(double t) {
  while (true) {
    const double bound = nu_;
    const double candidate = now_ + rng_.exponential(bound);
    const double expiry = now_ + rng_.exponential(service_ * static_cast<double>(q_));
    if (std::min(candidate, expiry) > t) {
      decay_to(std::max(now_, t));
      return;
    }
    if (expiry <= candidate) {
      decay_to(expiry);
      count_event(events_, opts_);
      nu_ -= (nu_ - baseline_) / static_cast<double>(q_);
      --q_;
      log_event(log_, now_, EventKind::Expiration);
      continue;
    }
    ++diag_.proposals;
    decay_to(candidate);
    if (rng_.uniform() * bound >= nu_) continue;
    ++diag_.accepted;
    count_event(events_, opts_);
    nu_ += jump_;
    ++q_;
    ++n_;
    log_event(log_, now_, EventKind::Arrival);
  }
}

SamplePath simulate_esep(const ModelParams& p, double horizon, RngStreamSpec rng, SimOptions opts) {
  check_horizon(horizon);
  const ModelParams v = validate_params(p, ModelTag::Esep);
  SamplePath path = make_path(ModelTag::Esep, v, horizon, rng);
  EsepStepper s(v, ModelTag::Esep, rng, &path.events, opts);
  s.advance_to(horizon);
  return path;
}

SamplePath simulate_esep_b(const ModelParams& p, double horizon, RngStreamSpec rng, SimOptions opts) {
  check_horizon(horizon);
  const ModelParams v = validate_params(p, ModelTag::EsepB);
  SamplePath path = make_path(ModelTag::EsepB, v, horizon, rng);
  EsepStepper s(v, ModelTag::EsepB, rng, &path.events, opts);
  s.advance_to(horizon);
  return path;
}

SamplePath simulate_sis(const ModelParams& p, double horizon, RngStreamSpec rng, SimOptions opts) {
  check_horizon(horizon);
  const ModelParams v = validate_params(p, ModelTag::Sis);
  SamplePath path = make_path(ModelTag::Sis, v, horizon, rng);
  SisStepper s(v, rng, &path.events, opts);
  s.advance_to(horizon);
  return path;
}

SamplePath simulate_hawkes(const ModelParams& p, const KernelSpec& kernel, double horizon, RngStreamSpec rng,
                           SimOptions opts) {
  check_horizon(horizon);
  validate_kernel(kernel);
  const ModelParams v = validate_params(p, ModelTag::Hawkes);
  SamplePath path = make_path(ModelTag::Hawkes, v, horizon, rng);
  path.kernel = kernel;
  HawkesStepper s(v, kernel, rng, &path.events, opts);
  s.advance_to(horizon);
  path.diagnostics = s.diagnostics();
  return path;
}

SamplePath simulate_ngesep(const ModelParams& p, std::int64_t n, double horizon, RngStreamSpec rng,
                           SimOptions opts) {
  check_horizon(horizon);
  if (n < 1) throw Error(ErrorCode::DomainViolation, "n must be >= 1");
  ModelParams scaled = p;
  scaled.scale = n;
  const ModelParams v = validate_params(scaled, ModelTag::NGesep);
  SamplePath path = make_path(ModelTag::NGesep, v, horizon, rng);
  NGesepStepper s(v, rng, &path.events, opts);
  s.advance_to(horizon);
  return path;
}

SamplePath simulate_hesep(const ModelParams& p, double horizon, RngStreamSpec rng, SimOptions opts) {
  check_horizon(horizon);
  const ModelParams v = validate_params(p, ModelTag::Hesep);
  SamplePath path = make_path(ModelTag::Hesep, v, horizon, rng);
  HesepStepper s(v, rng, &path.events, opts);
  s.advance_to(horizon);
  path.diagnostics = s.diagnostics();
  return path;
}

KernelSpec exponential_kernel(const ModelParams& p) {
  KernelSpec k;
  k.kind = ExponentialKernel{p.jump, p.decay_rate};
  return k;
}

ClusterPath simulate_cluster(const ModelParams& p, ClusterModel model, RngStreamSpec rng, std::uint64_t max_total) {
  const double alpha = p.jump;
  const double beta = p.expire_rate + p.decay_rate;
  if (alpha < 0.0) throw Error(ErrorCode::NonPositiveRate, "jump must be >= 0");
  if (!(beta > 0.0)) throw Error(ErrorCode::NonPositiveRate, "cluster needs expire_rate + decay_rate > 0");
  RandomStream r(rng);
  ClusterPath c;
  c.generations.push_back({0.0});
  c.total = 1;
  while (true) {
    const std::vector<double>& parents = c.generations.back();
    std::vector<double> children;
    for (double birth : parents) {
      if (model == ClusterModel::Esep) {
        const std::int64_t k = r.geometric_failures(beta / (alpha + beta));
        if (k == 0) continue;
        const double life = r.gamma_int(k + 1, alpha + beta);
        for (std::int64_t i = 0; i < k; ++i) children.push_back(birth + life * r.uniform());
      } else {
        const std::int64_t k = r.poisson(alpha / beta);
        for (std::int64_t i = 0; i < k; ++i) children.push_back(birth + r.exponential(beta));
      }
      if (static_cast<std::uint64_t>(c.total) + children.size() > max_total) {
        throw Error(ErrorCode::ExplosionGuard, "cluster exceeded " + std::to_string(max_total) + " arrivals");
      }
    }
    if (children.empty()) break;
    std::sort(children.begin(), children.end());
    c.total += static_cast<std::int64_t>(children.size());
    c.generations.push_back(std::move(children));
  }
  return c;
}

}  // namespace eseplab
