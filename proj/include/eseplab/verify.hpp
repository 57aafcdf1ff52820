#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "eseplab/serialization.hpp"

namespace eseplab {

enum class Statistic { TotalVariation, KolmogorovSmirnov, ChiSquare, MomentZ, OneSidedOrder, AbsoluteError };
const char* statistic_name(Statistic s);

enum class Direction { Below, BelowOrEqual, Above };

struct Check {
  std::string name;
  double observed = 0.0;
  double threshold = 0.0;
  Direction direction = Direction::Below;
  bool pass = false;
};
Check make_check(std::string name, double observed, double threshold, Direction direction = Direction::Below);

struct ClaimSpec;
// checks of one run; the first check is the headline statistic
using ClaimRunner = std::function<std::vector<Check>(const ClaimSpec& spec, std::uint64_t seed, int threads)>;

struct ClaimSpec {
  std::string claim_id;
  Statistic statistic = Statistic::MomentZ;
  double tolerance = 3.0;
  std::uint64_t replications = 1;
  std::uint64_t seed = 1;
  std::string rationale;
  ClaimRunner runner;  // empty: looked up in the registry by claim_id
};

struct ClaimReport {
  std::string claim_id;
  Statistic statistic = Statistic::MomentZ;
  double observed = 0.0;  // headline check
  double threshold = 0.0;
  bool pass = false;      // every check passed
  double runtime_seconds = 0.0;
  std::uint64_t seed = 0;  // seed of the reported run
  bool retried = false;
  std::vector<Check> checks;
  std::vector<Check> first_attempt;  // kept when retried
};

// Second seed used once when a claim fails with its master seed.
std::uint64_t retry_seed(std::uint64_t seed);

std::vector<std::string> registered_claims();
// UnknownClaim for unregistered ids.
ClaimSpec registered_claim(const std::string& claim_id, std::uint64_t seed);

ClaimReport run_claim(const ClaimSpec& spec, int threads = 1, bool allow_retry = true);
// DuplicateClaim on repeated ids; reports ordered by claim_id.
std::vector<ClaimReport> run_suite(const std::vector<ClaimSpec>& suite, int threads = 1, bool fail_fast = false);
std::vector<ClaimSpec> default_suite(std::uint64_t seed);

Json report_to_json(const ClaimReport& r);
Json suite_to_json(const std::vector<ClaimReport>& reports);
bool all_pass(const std::vector<ClaimReport>& reports);

}  // namespace eseplab
