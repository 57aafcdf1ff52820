#pragma once

#include <array>
#include <cstdint>

namespace eseplab {

struct RngStreamSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

// Philox4x32-10 counter-based generator.
// Key = seed, counter = (block index, stream id).
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Block bijection(Block ctr, Key key);

  explicit Philox4x32(RngStreamSpec spec);

  std::uint64_t next_u64();

 private:
  Key key_{};
  std::uint64_t stream_ = 0;
  std::uint64_t block_ = 0;
  Block buffer_{};
  int used_ = 4;
};

// Portable samplers on top of Philox; no std:: distributions so draws are
// identical across standard libraries.
class RandomStream {
 public:
  explicit RandomStream(RngStreamSpec spec) : engine_(spec), spec_(spec) {}

  const RngStreamSpec& spec() const { return spec_; }

  std::uint64_t bits() { return engine_.next_u64(); }
  // [0, 1)
  double uniform();
  // (0, 1)
  double uniform_open();
  double exponential(double rate);
  double standard_normal();
  // Poisson(mean)
  std::int64_t poisson(double mean);
  // failures before first success, support {0, 1, ...}
  std::int64_t geometric_failures(double success);
  // Gamma(shape k integer, rate)
  double gamma_int(std::int64_t shape, double rate);
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::int64_t poisson_ptrs(double mean);

  Philox4x32 engine_;
  RngStreamSpec spec_;
};

}  // namespace eseplab
