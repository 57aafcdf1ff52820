#include <doctest.h>

#include <boost/math/special_functions/beta.hpp>
#include <cmath>

#include "eseplab/blocking.hpp"
#include "eseplab/simulators.hpp"
#include "test_util.hpp"

using namespace eseplab;
using testutil::esep_b;

namespace {

// NegBin(r = eta/alpha, p = alpha/beta) renormalized on 0..c, using only lgamma
std::vector<double> truncated_negbin(double eta, double alpha, double beta, std::int64_t c) {
  const double r = eta / alpha, p = alpha / beta;
  std::vector<double> w;
  double z = 0.0;
  for (std::int64_t k = 0; k <= c; ++k) {
    const double v = std::exp(std::lgamma(k + r) - std::lgamma(r) - std::lgamma(k + 1.0) + r * std::log1p(-p) +
                              static_cast<double>(k) * std::log(p));
    w.push_back(v);
    z += v;
  }
  for (double& v : w) v /= z;
  return w;
}

}  // namespace

TEST_SUITE("blocking") {
  TEST_CASE("incomplete beta") {
    CHECK(regularized_incomplete_beta(2.0 / 3.0, 1.0, 5.0) == doctest::Approx(1.0 - std::pow(1.0 / 3.0, 5.0)).epsilon(1e-14));
    CHECK(regularized_incomplete_beta(0.0, 2.5, 3.0) == 0.0);
    CHECK(regularized_incomplete_beta(1.0, 2.5, 3.0) == 1.0);
    for (double z : {0.01, 0.2, 0.5, 2.0 / 3.0, 0.9, 0.999})
      for (double a : {0.3, 1.0, 2.5, 9.0, 60.0})
        for (double b : {0.5, 1.0, 5.0, 40.0}) {
          const auto ib = incomplete_beta(z, a, b);
          CHECK(std::abs(ib.value - boost::math::ibeta(a, b, z)) < 1e-13);
          CHECK(std::abs(ib.complement - boost::math::ibetac(a, b, z)) < 1e-13);
          const double lb = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
          const double term = std::exp(a * std::log(z) + b * std::log1p(-z) - std::log(a) - lb);
          CHECK(std::abs(ib.value - (regularized_incomplete_beta(z, a + 1.0, b) + term)) < 1e-12);
        }
    CHECK_THROWS_AS(regularized_incomplete_beta(1.5, 1.0, 1.0), Error);
    CHECK_THROWS_AS(regularized_incomplete_beta(0.5, 0.0, 1.0), Error);
    CHECK_THROWS_AS(regularized_incomplete_beta(0.5, 1.0, -1.0), Error);
  }

  TEST_CASE("negbin cdf") {
    const auto pmf = testutil::negbin_by_recurrence(2.5, 2.0 / 3.0, 30);
    double acc = 0.0;
    for (std::int64_t k = 0; k <= 30; ++k) {
      acc += pmf[static_cast<std::size_t>(k)];
      CHECK(negbin_cdf(k, 2.5, 2.0 / 3.0) == doctest::Approx(acc).epsilon(1e-12));
    }
  }

  TEST_CASE("steady law against brute-force truncation on a grid") {
    int points = 0;
    for (double eta : {0.5, 5.0, 20.0})
      for (auto [a, b] : {std::pair{2.0, 3.0}, {1.0, 4.0}})
        for (std::int64_t c : {0, 1, 8, 30, 100}) {
          const auto s = esepb_steady(esep_b(eta, a, b, c));
          const auto ref = truncated_negbin(eta, a, b, c);
          REQUIRE(s.pmf.probs.size() == ref.size());
          double mean = 0.0, second = 0.0, mass = 0.0;
          for (std::size_t k = 0; k < ref.size(); ++k) {
            CHECK(std::abs(s.pmf.probs[k] - ref[k]) < 1e-10);
            mean += k * ref[k];
            second += double(k) * k * ref[k];
            mass += s.pmf.probs[k];
          }
          CHECK(std::abs(mass - 1.0) < 1e-10);
          CHECK(s.mean == doctest::Approx(mean).epsilon(1e-9));
          CHECK(s.variance == doctest::Approx(second - mean * mean).epsilon(1e-8));
          // over-dispersion needs a loose capacity; c = 1 and a binding c = 8 are counterexamples
          double untruncated_below = 0.0;
          for (double v : testutil::negbin_by_recurrence(eta / a, a / b, c)) untruncated_below += v;
          if (c >= 2 && 1.0 - untruncated_below <= 0.2) CHECK(s.variance > s.mean);
          if (c == 1 || (eta == 20.0 && c == 8)) CHECK(s.variance < s.mean);
          ++points;
        }
    CHECK(points == 30);
  }

  TEST_CASE("capacity extremes") {
    const auto s0 = esepb_steady(esep_b(5, 2, 3, 0));
    CHECK(s0.pmf.probs.size() == 1);
    CHECK(s0.pmf.probs[0] == doctest::Approx(1.0));
    CHECK(s0.mean == 0.0);
    CHECK(blocking_fraction(esep_b(5, 2, 3, 0)) == doctest::Approx(1.0));
    const auto big = esep_b(10, 2, 3, 200);
    CHECK(std::abs(esepb_steady(big).mean - 10.0) < 1e-6);
    CHECK(blocking_fraction(big) < 1e-6);
    ModelParams p;
    p.baseline = 5;
    p.jump = 2;
    p.expire_rate = 3;
    try {
      esepb_steady(p);
      FAIL("expected CapacityMissing");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::CapacityMissing);
    }
    CHECK_THROWS_AS(esepb_steady(esep_b(5, 3, 2, 4)), Error);
  }

  TEST_CASE("blocking fraction and capacity occupancy match simulation") {
    const auto p = esep_b(5, 2, 3, 8);
    const auto s = esepb_steady(p);
    // batch means over long windows of one path
    const int windows = 100;
    std::vector<double> frac, occ;
    EsepStepper st(p, ModelTag::EsepB, {60, 0}, nullptr, {UINT64_MAX});
    st.advance_to(20.0);
    double t = 20.0;
    for (int w = 0; w < windows; ++w) {
      const auto b0 = st.blocked(), a0 = st.admitted();
      const double c0 = st.time_at_capacity();
      st.advance_to(t + 500.0);
      t += 500.0;
      frac.push_back(double(st.blocked() - b0) / double(st.blocked() - b0 + st.admitted() - a0));
      occ.push_back((st.time_at_capacity() - c0) / 500.0);
    }
    const auto sf = testutil::stats(frac), so = testutil::stats(occ);
    CHECK(std::abs(sf.mean - s.block_fraction) < 4.0 * sf.se);
    CHECK(std::abs(so.mean - s.pmf.probs.back()) < 4.0 * so.se);
    CHECK(s.block_fraction > s.pmf.probs.back());
  }

  TEST_CASE("pasta ratio") {
    const auto base = esep_b(2, 2, 3, 1);
    const auto r = pasta_ratio_sweep(base, {1, 2, 5, 10, 20, 50, 100});
    const auto ratio = r.metric("ratio");
    REQUIRE(ratio.size() == 7);
    CHECK(ratio.front().metric_value > 1.0);
    for (std::size_t i = 1; i < ratio.size(); ++i) CHECK(ratio[i].metric_value <= ratio[i - 1].metric_value + 1e-12);
    CHECK(std::abs(ratio.back().metric_value - 1.0) < 0.05);
    const auto flat = pasta_ratio_sweep(esep_b(2, 1e-12, 3, 1), {1, 10});
    for (const auto& row : flat.metric("ratio")) CHECK(row.metric_value == doctest::Approx(1.0).epsilon(1e-9));
    ModelParams nocap;
    nocap.baseline = 2;
    nocap.jump = 2;
    nocap.expire_rate = 3;
    CHECK_THROWS_AS(pasta_ratio_sweep(nocap, {1}), Error);
  }
}
