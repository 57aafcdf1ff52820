#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "eseplab/core.hpp"
#include "eseplab/numerics.hpp"
#include "eseplab/rng.hpp"
#include "eseplab/simulators.hpp"
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

}  // namespace

TEST_SUITE("core") {
  TEST_CASE("philox known answers") {
    using B = Philox4x32::Block;
    CHECK(Philox4x32::bijection(B{0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::bijection(B{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::bijection(B{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
  }

  TEST_CASE("streams are reproducible and distinct") {
    RandomStream a({7, 3}), b({7, 3}), c({7, 4}), d({8, 3});
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
      const auto x = a.bits();
      CHECK(x == b.bits());
      seen.insert(x);
      seen.insert(c.bits());
      seen.insert(d.bits());
    }
    CHECK(seen.size() == 3000);
  }

  TEST_CASE("uniform and sampler moments") {
    RandomStream r({11, 0});
    const int n = 200000;
    std::vector<double> u, e, z, po, ge, ga;
    for (int i = 0; i < n; ++i) {
      const double x = r.uniform();
      REQUIRE(x >= 0.0);
      REQUIRE(x < 1.0);
      u.push_back(x);
      e.push_back(r.exponential(2.0));
      z.push_back(r.standard_normal());
      po.push_back(static_cast<double>(r.poisson(i % 2 ? 3.0 : 50.0)));
      ge.push_back(static_cast<double>(r.geometric_failures(0.25)));
      ga.push_back(r.gamma_int(3, 2.0));
    }
    auto near = [](const std::vector<double>& x, double mean, double var) {
      const auto s = testutil::stats(x);
      CHECK(std::abs(s.mean - mean) < 4.0 * std::sqrt(var / x.size()));
      CHECK(std::abs(s.var / var - 1.0) < 0.03);
    };
    near(u, 0.5, 1.0 / 12.0);
    near(e, 0.5, 0.25);
    near(z, 0.0, 1.0);
    near(ge, 3.0, 12.0);
    near(ga, 1.5, 0.75);
    std::vector<double> p3, p50;
    for (int i = 0; i < n; ++i) (i % 2 ? p3 : p50).push_back(po[static_cast<std::size_t>(i)]);
    near(p3, 3.0, 3.0);
    near(p50, 50.0, 50.0);
  }

  TEST_CASE("poisson sampler matches the pmf") {
    for (double mean : {0.7, 12.0, 80.0}) {
      RandomStream r({5, static_cast<std::uint64_t>(mean * 10)});
      std::vector<std::int64_t> draws;
      for (int i = 0; i < 100000; ++i) draws.push_back(r.poisson(mean));
      std::vector<double> pmf;
      for (int k = 0; k < 400; ++k) pmf.push_back(std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0)));
      CHECK(chi_square(histogram_of(draws), pmf).pvalue > 0.001);
    }
  }

  TEST_CASE("validate_params examples") {
    auto p = testutil::esep(10, 2, 3);
    CHECK(p.stable);
    CHECK(*p.intensity0 == doctest::Approx(10.0));
    CHECK_FALSE(testutil::esep(1, 2, 1).stable);

    ModelParams m;
    m.baseline = 10;
    m.jump = 2;
    m.expire_rate = 3;
    m.q0 = 1;
    m.intensity0 = 10.0;
    CHECK(code_of([&] { validate_params(m, ModelTag::Esep); }) == ErrorCode::AffineMismatch);
    m.intensity0 = 12.0;
    CHECK(validate_params(m, ModelTag::Esep).q0 == 1);
    m.intensity0.reset();
    m.baseline = 0.0;
    CHECK(code_of([&] { validate_params(m, ModelTag::Esep); }) == ErrorCode::NonPositiveRate);
    m.baseline = 10;
    m.jump = -1;
    CHECK(code_of([&] { validate_params(m, ModelTag::Esep); }) == ErrorCode::NonPositiveRate);
    m.jump = 2;
    CHECK(code_of([&] { validate_params(m, ModelTag::EsepB); }) == ErrorCode::MissingField);
    CHECK(code_of([&] { validate_params(m, ModelTag::Sis); }) == ErrorCode::MissingField);
    m.q0 = -1;
    CHECK(code_of([&] { validate_params(m, ModelTag::Esep); }) == ErrorCode::InvalidInitialState);

    ModelParams h;
    h.baseline = 10;
    h.jump = 2;
    h.decay_rate = 3;
    h.intensity0 = 5.0;
    CHECK(code_of([&] { validate_params(h, ModelTag::Hawkes); }) == ErrorCode::InvalidInitialState);
  }

  TEST_CASE("burn-in needs stability") {
    CHECK(default_burn_in(testutil::esep(10, 2, 3), ModelTag::Esep) > 0.0);
    CHECK(code_of([] { default_burn_in(testutil::esep(1, 2, 1), ModelTag::Esep); }) == ErrorCode::Unstable);
  }

  TEST_CASE("reconstruct_state") {
    SamplePath path;
    path.params = testutil::esep(10, 2, 3, 2, 5);
    path.horizon = 5.0;
    CHECK(reconstruct_state(path, 3.0).q == 2);
    CHECK(reconstruct_state(path, 3.0).n == 5);
    CHECK(reconstruct_state(path, 3.0).intensity == doctest::Approx(14.0));
    path.events = {{1.0, EventKind::Arrival, 1, 1.0}, {2.0, EventKind::Expiration, 1, 1.0}};
    CHECK(reconstruct_state(path, 0.5).q == 2);
    CHECK(reconstruct_state(path, 1.0).q == 3);
    CHECK(reconstruct_state(path, 1.5).n == 6);
    CHECK(reconstruct_state(path, 1.5).intensity == doctest::Approx(16.0));
    CHECK(reconstruct_state(path, 2.5).q == 2);
    CHECK(code_of([&] { reconstruct_state(path, 6.0); }) == ErrorCode::TimeOutOfRange);
    CHECK(code_of([&] { reconstruct_state(path, -1.0); }) == ErrorCode::TimeOutOfRange);
  }

  TEST_CASE("reconstruction agrees with the stepper") {
    const auto p = testutil::esep(10, 2, 3);
    const auto path = simulate_esep(p, 20.0, {3, 1});
    for (double t : {0.0, 1.3, 7.7, 20.0}) {
      EsepStepper s(p, ModelTag::Esep, {3, 1});
      s.advance_to(t);
      const auto st = reconstruct_state(path, t);
      CHECK(st.q == s.q());
      CHECK(st.n == s.n());
      CHECK(st.intensity == doctest::Approx(s.intensity()));
    }
  }

  TEST_CASE("summaries") {
    CHECK(code_of([] { summarize_discrete({}, 1, 0); }) == ErrorCode::EmptySample);
    CHECK(code_of([] { summarize_continuous({}, 1, 0); }) == ErrorCode::EmptySample);
    const auto s = summarize_discrete({1, 2, 2, 5}, 9, 4);
    CHECK(s.samples == 4);
    CHECK(s.histogram.at(2) == 2);
    CHECK(s.mean == doctest::Approx(2.5));
    CHECK(s.variance == doctest::Approx(3.0));
    CHECK(s.first_stream == 4);
    const auto c = summarize_continuous({3.0, 1.0, 2.0}, 9, 0);
    CHECK(c.sorted == std::vector<double>{1.0, 2.0, 3.0});
  }

  TEST_CASE("model and event names round-trip") {
    for (auto m : {ModelTag::Esep, ModelTag::Hawkes, ModelTag::NGesep, ModelTag::Hesep, ModelTag::EsepB, ModelTag::Sis})
      CHECK(parse_model(model_name(m)) == m);
    for (auto k : {EventKind::Arrival, EventKind::Expiration, EventKind::Block})
      CHECK(parse_event_kind(event_kind_name(k)) == k);
    CHECK(code_of([] { parse_model("nope"); }) == ErrorCode::ConfigInvalid);
  }
}
