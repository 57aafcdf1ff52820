#pragma once

#include <cstdint>
#include <queue>
#include <vector>

#include "eseplab/core.hpp"

namespace eseplab {

struct SimOptions {
  std::uint64_t max_events = 10'000'000;
};

// Incremental samplers. Each owns its random stream; advance_to(t) moves the
// state to time t exactly, optionally logging events.

class EsepStepper {
 public:
  // model is Esep or EsepB; params must be validated.
  EsepStepper(const ModelParams& p, ModelTag model, RngStreamSpec rng, std::vector<Event>* log = nullptr,
              SimOptions opts = {});
  void advance_to(double t);
  double time() const { return now_; }
  std::int64_t q() const { return q_; }
  std::int64_t n() const { return n_; }
  double intensity() const { return baseline_ + jump_ * static_cast<double>(q_); }
  std::uint64_t blocked() const { return blocked_; }
  std::uint64_t admitted() const { return admitted_; }
  // time spent at capacity since construction
  double time_at_capacity() const { return time_at_cap_; }

 private:
  double baseline_, jump_, expire_;
  std::int64_t cap_;
  RandomStream rng_;
  std::vector<Event>* log_;
  SimOptions opts_;
  double now_ = 0.0;
  std::int64_t q_, n_;
  std::uint64_t events_ = 0, blocked_ = 0, admitted_ = 0;
  double time_at_cap_ = 0.0;
};

class SisStepper {
 public:
  SisStepper(const ModelParams& p, RngStreamSpec rng, std::vector<Event>* log = nullptr, SimOptions opts = {});
  void advance_to(double t);
  double time() const { return now_; }
  std::int64_t infected() const { return i_; }
  std::int64_t n() const { return n_; }

 private:
  double baseline_, jump_, recover_;
  std::int64_t pop_;
  RandomStream rng_;
  std::vector<Event>* log_;
  SimOptions opts_;
  double now_ = 0.0;
  std::int64_t i_, n_;
  std::uint64_t events_ = 0;
};

class HawkesStepper {
 public:
  HawkesStepper(const ModelParams& p, const KernelSpec& kernel, RngStreamSpec rng, std::vector<Event>* log = nullptr,
                SimOptions opts = {});
  void advance_to(double t);
  double time() const { return now_; }
  std::int64_t n() const { return n_; }
  double intensity() const { return intensity_at(now_); }
  const SimDiagnostics& diagnostics() const { return diag_; }

 private:
  double intensity_at(double t) const;
  void decay_to(double t);

  double baseline_;
  KernelSpec kernel_;
  bool mixture_ = false;
  std::vector<double> weights_, rates_, excess_;
  double init_excess_ = 0.0, g0_ = 0.0, support_end_;
  std::vector<std::pair<double, double>> history_;  // (time, mark)
  std::size_t history_start_ = 0;
  RandomStream rng_;
  std::vector<Event>* log_;
  SimOptions opts_;
  double now_ = 0.0;
  std::int64_t n_;
  std::uint64_t events_ = 0;
  SimDiagnostics diag_;
};

class NGesepStepper {
 public:
  NGesepStepper(const ModelParams& p, RngStreamSpec rng, std::vector<Event>* log = nullptr, SimOptions opts = {});
  void advance_to(double t);
  double time() const { return now_; }
  std::int64_t q() const { return q_; }
  std::int64_t n() const { return n_; }
  double intensity() const { return baseline_ + jump_ / static_cast<double>(scale_) * static_cast<double>(q_); }

 private:
  using Expiry = std::pair<double, std::uint64_t>;  // (time, insertion order)
  void admit(std::int64_t count);

  double baseline_, jump_;
  std::int64_t scale_;
  BatchLaw batch_;
  ContinuousLaw duration_;
  std::priority_queue<Expiry, std::vector<Expiry>, std::greater<Expiry>> expiries_;
  std::uint64_t seq_ = 0;
  RandomStream rng_;
  std::vector<Event>* log_;
  SimOptions opts_;
  double now_ = 0.0;
  std::int64_t q_, n_;
  std::uint64_t events_ = 0;
};

class HesepStepper {
 public:
  HesepStepper(const ModelParams& p, RngStreamSpec rng, std::vector<Event>* log = nullptr, SimOptions opts = {});
  void advance_to(double t);
  double time() const { return now_; }
  std::int64_t q() const { return q_; }
  std::int64_t n() const { return n_; }
  double intensity() const { return nu_; }
  const SimDiagnostics& diagnostics() const { return diag_; }

 private:
  void decay_to(double t);

  double baseline_, jump_, decay_, service_;
  RandomStream rng_;
  std::vector<Event>* log_;
  SimOptions opts_;
  double now_ = 0.0, nu_;
  std::int64_t q_, n_;
  std::uint64_t events_ = 0;
  SimDiagnostics diag_;
};

SamplePath simulate_esep(const ModelParams& p, double horizon, RngStreamSpec rng, SimOptions opts = {});
SamplePath simulate_hawkes(const ModelParams& p, const KernelSpec& kernel, double horizon, RngStreamSpec rng,
                           SimOptions opts = {});
SamplePath simulate_ngesep(const ModelParams& p, std::int64_t n, double horizon, RngStreamSpec rng,
                           SimOptions opts = {});
SamplePath simulate_hesep(const ModelParams& p, double horizon, RngStreamSpec rng, SimOptions opts = {});
SamplePath simulate_esep_b(const ModelParams& p, double horizon, RngStreamSpec rng, SimOptions opts = {});
SamplePath simulate_sis(const ModelParams& p, double horizon, RngStreamSpec rng, SimOptions opts = {});

// Exponential kernel alpha*exp(-beta x) built from jump and decay_rate.
KernelSpec exponential_kernel(const ModelParams& p);

enum class ClusterModel { Esep, Hawkes };

struct ClusterPath {
  std::vector<std::vector<double>> generations;
  std::int64_t total = 0;
};

// Progeny of one arrival at time 0. The offspring parameter beta is
// expire_rate + decay_rate, so either slot may carry it.
ClusterPath simulate_cluster(const ModelParams& p, ClusterModel model, RngStreamSpec rng,
                             std::uint64_t max_total = 10'000'000);

}  // namespace eseplab
