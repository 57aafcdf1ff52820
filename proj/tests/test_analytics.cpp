#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "eseplab/analytics.hpp"
#include "eseplab/numerics.hpp"
#include "eseplab/simulators.hpp"
#include "test_util.hpp"

using namespace eseplab;
using testutil::esep;

namespace {

struct EndState {
  std::vector<std::int64_t> q, n;
};

EndState simulate_end(const ModelParams& p, double t, int reps, std::uint64_t seed) {
  EndState s;
  for (int i = 0; i < reps; ++i) {
    EsepStepper st(p, ModelTag::Esep, {seed, static_cast<std::uint64_t>(i)});
    st.advance_to(t);
    s.q.push_back(st.q());
    s.n.push_back(st.n());
  }
  return s;
}

template <class F>
testutil::Stats mc(const EndState& s, F f) {
  std::vector<double> x;
  for (std::size_t i = 0; i < s.q.size(); ++i) x.push_back(f(s.q[i], s.n[i]));
  return testutil::stats(x);
}

}  // namespace

TEST_SUITE("analytics") {
  TEST_CASE("transforms normalize at trivial arguments") {
    const auto p = esep(10, 2, 3, 2, 2);
    for (double t : {0.0, 0.5, 4.0}) {
      CHECK(esep_transient_mgf(p, 0.0, t).checked() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(esep_qt_pgf(p, 1.0, t).checked() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(esep_counting_pgf(p, 1.0, t).checked() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(joint_qd_pgf(p, 1.0, 1.0, t).checked() == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(esep_transient_mgf(p, 0.1, 0.0).checked() == doctest::Approx(std::exp(0.1 * 14.0)).epsilon(1e-12));
    CHECK(esep_qt_pgf(p, 0.3, 0.0).checked() == doctest::Approx(0.09).epsilon(1e-12));
    CHECK(esep_counting_pgf(p, 0.3, 0.0).checked() == doctest::Approx(0.09).epsilon(1e-12));
    CHECK(joint_qd_pgf(p, 0.3, 0.7, 0.0).checked() == doctest::Approx(0.09).epsilon(1e-12));
  }

  TEST_CASE("mgf and pgf obey the affine identity") {
    const auto p = esep(10, 2, 3, 4, 4);
    for (double t : {0.2, 1.0, 3.0})
      for (double th : {-0.5, -0.1, 0.05, 0.15}) {
        const double lhs = esep_transient_mgf(p, th, t).checked();
        const double rhs = std::exp(th * 10.0) * esep_qt_pgf(p, std::exp(2.0 * th), t).checked();
        CHECK(std::abs(lhs / rhs - 1.0) < 1e-10);
      }
  }

  TEST_CASE("transforms flag points outside their domain") {
    const auto p = esep(10, 2, 3);
    const auto r = esep_transient_mgf(p, 0.5, 1.0);
    CHECK_FALSE(r.in_domain);
    CHECK(*r.domain_bound == doctest::Approx(std::log(1.5) / 2.0));
    CHECK_THROWS_AS(r.checked(), Error);
    CHECK_FALSE(esep_qt_pgf(p, 1.6, 1.0).in_domain);
    CHECK_THROWS_AS(esep_qt_pgf(p, 0.5, -1.0), Error);
  }

  TEST_CASE("mgf converges to the steady law") {
    const auto p = esep(10, 2, 3, 3, 3);
    for (double th : {-0.3, 0.1}) {
      const double z = std::exp(2.0 * th);
      const double steady = std::exp(th * 10.0) * std::pow((1.0 - 2.0 / 3.0) / (1.0 - 2.0 / 3.0 * z), 5.0);
      CHECK(esep_transient_mgf(p, th, 60.0).checked() == doctest::Approx(steady).epsilon(1e-10));
    }
  }

  TEST_CASE("steady negbin law") {
    const auto p = esep(10, 2, 3);
    const auto table = esep_steady_negbin(p, 500);
    CHECK(table.probs[0] == doctest::Approx(std::pow(1.0 / 3.0, 5.0)).epsilon(1e-13));
    const auto ref = testutil::negbin_by_recurrence(5.0, 2.0 / 3.0, 500);
    double mean = 0.0, second = 0.0;
    for (std::size_t k = 0; k < ref.size(); ++k) {
      CHECK(table.probs[k] == doctest::Approx(ref[k]).epsilon(1e-11));
      mean += k * table.probs[k];
      second += double(k) * k * table.probs[k];
    }
    CHECK(mean == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(second - mean * mean == doctest::Approx(30.0).epsilon(1e-10));
    const auto m = esep_steady_moments(p);
    CHECK(m.mean == doctest::Approx(10.0));
    CHECK(m.variance == doctest::Approx(30.0));
    const auto k40 = esep_steady_negbin(p, 40);
    CHECK(k40.probs.size() == 41);
    CHECK(k40.mass() + k40.truncation_mass == doctest::Approx(1.0).epsilon(1e-14));
    const auto small_alpha = esep_steady_moments(esep(10, 1e-6, 3));
    CHECK(small_alpha.mean == doctest::Approx(10.0 / 3.0).epsilon(1e-5));
    CHECK_THROWS_AS(esep_steady_negbin(esep(1, 2, 1)), Error);
  }

  TEST_CASE("counting pgf closed forms agree") {
    const auto p = esep(10, 2, 3, 2, 5);
    for (double t : {0.1, 1.0, 5.0})
      for (double z : {0.0, 0.3, 0.9, 1.02}) {
        const auto a = esep_counting_pgf(p, z, t), b = esep_counting_pgf_raw(p, z, t);
        REQUIRE(a.in_domain);
        REQUIRE(b.in_domain);
        CHECK(a.value == doctest::Approx(b.value).epsilon(1e-9));
        CHECK(joint_qd_pgf(p, z, z, t).checked() == doctest::Approx(a.value).epsilon(1e-10));
      }
    const auto pz = esep(10, 2, 3, 2, 2);
    for (double z1 : {0.4, 0.8})
      for (double z2 : {0.5, 0.9}) {
        const auto h = joint_qd_pgf_hyperbolic(pz, z1, z2, 1.0);
        if (h.in_domain) CHECK(h.value == doctest::Approx(joint_qd_pgf(pz, z1, z2, 1.0).checked()).epsilon(1e-10));
      }
  }

  TEST_CASE("counting pgf is nonincreasing in t") {
    const auto p = esep(10, 2, 3);
    double prev = 1.0;
    for (double t = 0.1; t < 5.0; t += 0.1) {
      const double v = esep_counting_pgf(p, 0.7, t).checked();
      CHECK(v <= prev + 1e-15);
      prev = v;
    }
  }

  TEST_CASE("transforms agree with simulation") {
    const auto p = esep(10, 2, 3, 2, 2);
    const auto s = simulate_end(p, 1.0, 100000, 77);
    auto near = [](const testutil::Stats& st, double exact) { CHECK(std::abs(st.mean - exact) < 4.0 * st.se); };
    near(mc(s, [](auto q, auto) { return std::pow(0.6, double(q)); }), esep_qt_pgf(p, 0.6, 1.0).checked());
    near(mc(s, [](auto, auto n) { return std::pow(0.95, double(n)); }), esep_counting_pgf(p, 0.95, 1.0).checked());
    near(mc(s, [](auto q, auto n) { return std::pow(0.7, double(q)) * std::pow(0.9, double(n - q)); }),
         joint_qd_pgf(p, 0.7, 0.9, 1.0).checked());
    near(mc(s, [](auto, auto n) { return double(n); }), esep_mean_nt(p, 1.0));
    for (std::int64_t n = 2; n <= 20; n += 3) {
      const double exact = counting_pmf_matrix(p, n, 1.0);
      near(mc(s, [n](auto, auto m) { return m == n ? 1.0 : 0.0; }), exact);
    }
  }

  TEST_CASE("matrix pmf") {
    const auto p = esep(10, 2, 3);
    for (double t : {0.1, 0.7}) CHECK(counting_pmf_matrix(p, 0, t) == doctest::Approx(std::exp(-10.0 * t)).epsilon(1e-12));
    double total = 0.0;
    for (std::int64_t n = 0; n <= 30; ++n) total += counting_pmf_matrix(p, n, 0.2);
    CHECK(total > 1.0 - 1e-6);
    CHECK(total <= 1.0 + 1e-12);
    CHECK_THROWS_AS(counting_pmf_matrix(p, 200, 1.0, {100, std::nullopt}), Error);
    CHECK(counting_pmf_dimension(3, 0) == 10);

    const auto q = esep(2, 2, 3, 1, 1);
    const auto contour = counting_pmf_transform(q, 12, 0.8);
    for (std::int64_t n = 0; n <= 12; ++n) {
      const double m = counting_pmf_matrix(q, n, 0.8);
      CHECK(std::abs(m - contour[static_cast<std::size_t>(n)]) < 1e-10);
      CHECK(std::abs(m - counting_pmf_matrix(q, n, 0.8, {5000, 200.0})) < 1e-10);
    }
    CHECK(counting_pmf_matrix(q, 0, 0.8) == 0.0);
  }

  TEST_CASE("pgf taylor coefficients reproduce the matrix pmf") {
    const auto p = esep(10, 2, 3);
    const double t = 0.3, r = 0.3;
    const int deg = 24;
    Eigen::MatrixXd v(deg + 1, deg + 1);
    Eigen::VectorXd f(deg + 1);
    for (int i = 0; i <= deg; ++i) {
      const double u = std::cos(M_PI * (i + 0.5) / (deg + 1));
      for (int k = 0; k <= deg; ++k) v(i, k) = std::pow(u, k);
      f(i) = esep_counting_pgf(p, r * u, t).checked();
    }
    const Eigen::VectorXd c = v.colPivHouseholderQr().solve(f);
    for (int n = 0; n <= 5; ++n) CHECK(std::abs(c(n) / std::pow(r, n) - counting_pmf_matrix(p, n, t)) < 1e-6);
  }

  TEST_CASE("matrix pmf without excitation is poisson") {
    const auto p = esep(4, 0, 3);
    for (std::int64_t n = 0; n < 10; ++n)
      CHECK(counting_pmf_matrix(p, n, 0.5) ==
            doctest::Approx(std::exp(n * std::log(2.0) - 2.0 - std::lgamma(n + 1.0))).epsilon(1e-10));
  }

  TEST_CASE("mean count matches an ode oracle") {
    for (const auto& p : {esep(10, 2, 3, 4, 4), esep(1, 2, 1, 3, 3), esep(5, 2, 2, 1, 1)}) {
      const double a = p.jump, b = p.expire_rate, eta = p.baseline;
      // d E[eta]/dt = b*eta* - (b-a) E[eta], d E[N]/dt = E[eta]
      auto f = [&](double, const std::vector<double>& y) {
        return std::vector<double>{b * eta - (b - a) * y[0], y[0]};
      };
      const auto y = testutil::rk4(f, {*p.intensity0, double(p.n0)}, 2.0, 4000);
      CHECK(std::abs(esep_mean_nt(p, 2.0) - y[1]) < 1e-8);
    }
    CHECK(esep_mean_nt(esep(10, 2, 3), 0.0) == 0.0);
    const auto st = esep(10, 2, 3, 10, 10);
    CHECK(esep_mean_nt(st, 3.0) - 10.0 == doctest::Approx(90.0).epsilon(1e-12));
  }

  TEST_CASE("moment odes") {
    const auto e = esep(10, 2, 3);
    const auto h = testutil::hawkes(10, 2, 3);
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) grid.push_back(i);
    const auto m = moment_odes(e, h, 2, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(std::abs(m.esep_intensity[0][i] - m.hawkes_intensity[0][i]) < 1e-8);
      CHECK(m.esep_intensity[1][i] >= m.hawkes_intensity[1][i] - 1e-8);
      CHECK(std::abs(m.esep_count_mean[i] - m.hawkes_count_mean[i]) < 1e-8);
      CHECK(m.esep_count_second[i] >= m.hawkes_count_second[i] - 1e-8);
    }
    const auto& me = m.esep_intensity;
    const auto& mh = m.hawkes_intensity;
    CHECK(me[0].back() == doctest::Approx(30.0).epsilon(1e-8));
    CHECK(me[1].back() - 900.0 == doctest::Approx(120.0).epsilon(1e-6));
    CHECK(mh[1].back() - 900.0 == doctest::Approx(60.0).epsilon(1e-6));
    CHECK(m.esep_count_mean[10] == doctest::Approx(esep_mean_nt(e, 10.0)).epsilon(1e-9));

    const auto flat = moment_odes(esep(4, 0, 3), testutil::hawkes(4, 0, 3), 3, {0.0, 1.0, 2.0});
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(flat.esep_intensity[2][i] == doctest::Approx(64.0));
      CHECK(flat.hawkes_intensity[1][i] == doctest::Approx(16.0));
    }
    CHECK_THROWS_AS(moment_odes(e, testutil::hawkes(10, 2, 4), 2, grid), Error);
  }

  TEST_CASE("two-gesep steady mgf") {
    const auto p = esep(10, 2, 3);
    CHECK(gesep2_steady_mgf(p, 0.0).checked() == doctest::Approx(1.0).epsilon(1e-12));
    const double d = central_difference([&](double th) { return gesep2_steady_mgf(p, th).checked(); }, 0.0, 1e-5);
    CHECK(d == doctest::Approx(20.0).epsilon(1e-7));
    CHECK_FALSE(gesep2_steady_mgf(p, 1.0).in_domain);

    ModelParams g = p;
    g.intensity0.reset();
    g.scale = 2;
    g.batch_law = FixedBatch{2};
    g.duration_law = ExponentialLaw{3.0};
    g = validate_params(g, ModelTag::NGesep);
    NGesepStepper st(g, {12, 0}, nullptr, {UINT64_MAX});
    st.advance_to(50.0);
    std::vector<double> x;
    for (int i = 1; i <= 100000; ++i) {
      st.advance_to(50.0 + i);
      x.push_back(std::exp(0.1 * double(st.q())));
    }
    const double se = batch_means_standard_error(x, 50);
    CHECK(std::abs(testutil::stats(x).mean - gesep2_steady_mgf(p, 0.1).checked()) < 4.0 * se);
  }
}
