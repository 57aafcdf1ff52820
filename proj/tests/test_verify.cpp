#include <doctest.h>

#include <algorithm>
#include <cstring>

#include "eseplab/analytics.hpp"
#include "eseplab/numerics.hpp"
#include "eseplab/simulators.hpp"
#include "eseplab/verify.hpp"
#include "test_util.hpp"

using namespace eseplab;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::IoError;
}

// TV of end-of-run ESEP samples against NegBin(r=5, success) with the given p
ClaimSpec negbin_claim(const std::string& id, double p) {
  ClaimSpec s;
  s.claim_id = id;
  s.statistic = Statistic::TotalVariation;
  s.tolerance = 0.03;
  s.replications = 20000;
  s.seed = 5;
  s.runner = [p](const ClaimSpec& spec, std::uint64_t seed, int) {
    const auto e = testutil::esep(10, 2, 3);
    std::vector<std::int64_t> q;
    for (std::uint64_t i = 0; i < spec.replications; ++i) {
      EsepStepper st(e, ModelTag::Esep, {seed, i});
      st.advance_to(15.0);
      q.push_back(st.q());
    }
    const auto law = testutil::negbin_by_recurrence(5.0, p, 300);
    return std::vector<Check>{make_check("tv", tv_distance(histogram_of(q), histogram_of(law)), spec.tolerance)};
  };
  return s;
}

ClaimSpec constant_claim(const std::string& id, double observed) {
  ClaimSpec s;
  s.claim_id = id;
  s.tolerance = 1.0;
  s.runner = [observed](const ClaimSpec& spec, std::uint64_t, int) {
    return std::vector<Check>{make_check("x", observed, spec.tolerance)};
  };
  return s;
}

}  // namespace

TEST_SUITE("verify") {
  TEST_CASE("checks follow their direction") {
    CHECK(make_check("a", 0.5, 1.0).pass);
    CHECK_FALSE(make_check("a", 1.0, 1.0).pass);
    CHECK(make_check("a", 1.0, 1.0, Direction::BelowOrEqual).pass);
    CHECK(make_check("a", 2.0, 1.0, Direction::Above).pass);
    CHECK_FALSE(make_check("a", std::nan(""), 1.0).pass);
    CHECK(std::strcmp(statistic_name(Statistic::TotalVariation), statistic_name(Statistic::MomentZ)) != 0);
  }

  TEST_CASE("registry") {
    const auto ids = registered_claims();
    for (const char* id : {"steady-negbin", "mean-variance-order", "transient-transforms", "matrix-pmf",
                           "branching-laws", "family-decomposition", "sis-convergence", "batch-scaling",
                           "hesep-sandwich", "diffusion-bracket", "blocking"})
      CHECK(std::find(ids.begin(), ids.end(), id) != ids.end());
    CHECK(default_suite(1).size() == ids.size());
    for (const auto& s : default_suite(1)) {
      CHECK(s.tolerance > 0.0);
      CHECK_FALSE(s.rationale.empty());
    }
    CHECK(code_of([] { registered_claim("no-such-claim", 1); }) == ErrorCode::UnknownClaim);
    ClaimSpec bad = registered_claim("blocking", 1);
    bad.tolerance = 0.0;
    CHECK(code_of([&] { run_claim(bad); }) == ErrorCode::ConfigInvalid);
    ClaimSpec unknown;
    unknown.claim_id = "no-such-claim";
    CHECK(code_of([&] { run_claim(unknown); }) == ErrorCode::UnknownClaim);
  }

  TEST_CASE("negative control fails, correct oracle passes") {
    const auto good = run_claim(negbin_claim("negbin-right", 2.0 / 3.0), 1, false);
    const auto wrong = run_claim(negbin_claim("negbin-swapped", 1.0 / 3.0), 1, true);
    CHECK(good.pass);
    CHECK(good.observed < 0.03);
    CHECK_FALSE(wrong.pass);
    CHECK(wrong.retried);
    CHECK(wrong.observed > 0.5);
    CHECK(wrong.first_attempt.size() == 1);
  }

  TEST_CASE("suites") {
    CHECK(run_suite({}).empty());
    CHECK(all_pass({}));
    CHECK(code_of([] { run_suite({constant_claim("a", 0.0), constant_claim("a", 0.0)}); }) == ErrorCode::DuplicateClaim);
    const auto r = run_suite({constant_claim("zeta", 0.0), constant_claim("alpha", 2.0), constant_claim("mid", 0.5)});
    REQUIRE(r.size() == 3);
    CHECK(r[0].claim_id == "alpha");
    CHECK(r[1].claim_id == "mid");
    CHECK(r[2].claim_id == "zeta");
    CHECK_FALSE(r[0].pass);
    CHECK_FALSE(all_pass(r));
    const Json j = suite_to_json(r);
    CHECK(j.at("all_pass") == false);
    CHECK(j.at("claims").size() == 3);
    CHECK(report_to_json(r[1]).at("checks").size() == 1);
  }

  TEST_CASE("retry uses the documented second seed") {
    ClaimSpec s;
    s.claim_id = "flaky";
    s.seed = 10;
    s.runner = [](const ClaimSpec& spec, std::uint64_t seed, int) {
      return std::vector<Check>{make_check("seed-is-master", seed == spec.seed ? 1.0 : 0.0, 0.5)};
    };
    const auto r = run_claim(s);
    CHECK(r.pass);
    CHECK(r.retried);
    CHECK(r.seed == retry_seed(10));
    CHECK(retry_seed(10) == (10ULL ^ 0x9E3779B97F4A7C15ULL));
    CHECK_FALSE(r.first_attempt.front().pass);
    const auto once = run_claim(s, 1, false);
    CHECK_FALSE(once.pass);
    CHECK_FALSE(once.retried);
  }

  TEST_CASE("reruns are bit-identical") {
    for (const char* id : {"family-decomposition", "blocking", "branching-laws"}) {
      const auto spec = registered_claim(id, 31);
      const auto a = run_claim(spec), b = run_claim(spec);
      REQUIRE(a.checks.size() == b.checks.size());
      for (std::size_t i = 0; i < a.checks.size(); ++i)
        CHECK(std::memcmp(&a.checks[i].observed, &b.checks[i].observed, sizeof(double)) == 0);
    }
    const auto c = negbin_claim("mc", 2.0 / 3.0);
    CHECK(run_claim(c).observed == run_claim(c).observed);
  }

  TEST_CASE("cheap claims pass across master seeds") {
    for (const char* id : {"family-decomposition", "blocking", "branching-laws", "matrix-pmf"}) {
      int passes = 0;
      for (std::uint64_t seed = 1; seed <= 10; ++seed) passes += run_claim(registered_claim(id, seed * 7919)).pass;
      CAPTURE(id);
      CHECK(passes >= 9);
    }
  }
}
