#include <doctest.h>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <random>

#include "eseplab/analytics.hpp"
#include "eseplab/error.hpp"
#include "eseplab/numerics.hpp"
#include "eseplab/rng.hpp"
#include "test_util.hpp"

using namespace eseplab;

namespace {

SparseSubGenerator random_subgenerator(std::size_t d, std::uint64_t seed, Eigen::MatrixXd& dense) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  dense = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  std::vector<GeneratorEntry> entries;
  for (std::size_t i = 0; i < d; ++i) {
    double out = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      if (i == j || u(gen) < 1.0) continue;
      const double r = u(gen);
      entries.push_back({i, j, r});
      dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = r;
      out += r;
    }
    const double kill = u(gen) * 0.5;
    entries.push_back({i, i, -(out + kill)});
    dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = -(out + kill);
  }
  return SparseSubGenerator(d, entries);
}

}  // namespace

TEST_SUITE("numerics") {
  TEST_CASE("expm_action on a 1x1 generator") {
    SparseSubGenerator z(1, {{0, 0, -4.0}});
    CHECK(expm_action(z, 0.3, {1.0})[0] == doctest::Approx(std::exp(-1.2)).epsilon(1e-12));
    CHECK(expm_action(z, 0.0, {0.7})[0] == 0.7);
  }

  TEST_CASE("expm_action agrees with a dense matrix exponential") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      Eigen::MatrixXd dense;
      const auto z = random_subgenerator(12, seed, dense);
      std::vector<double> v0(12, 0.0);
      v0[0] = 0.6;
      v0[5] = 0.4;
      Eigen::RowVectorXd ev = Eigen::Map<Eigen::RowVectorXd>(v0.data(), 12);
      for (double t : {0.1, 1.0, 3.0}) {
        const Eigen::RowVectorXd ref = ev * (dense * t).exp();
        const auto got = expm_action(z, t, v0);
        const auto got2 = expm_action(z, t, v0, 2.0 * z.max_abs_diagonal());
        for (int i = 0; i < 12; ++i) {
          CHECK(std::abs(got[static_cast<std::size_t>(i)] - ref(i)) < 1e-9);
          CHECK(std::abs(got[static_cast<std::size_t>(i)] - got2[static_cast<std::size_t>(i)]) < 1e-10);
        }
      }
    }
  }

  TEST_CASE("expm_action errors") {
    SparseSubGenerator z(1, {{0, 0, -1.0}});
    CHECK_THROWS_AS(expm_action(z, -1.0, {1.0}), Error);
    CHECK_THROWS_AS(SparseSubGenerator(2, {{0, 1, -1.0}}), Error);
    CHECK_THROWS_AS(SparseSubGenerator(2, {{0, 1, 2.0}, {0, 0, -1.0}}), Error);
  }

  TEST_CASE("poisson window covers the mass") {
    for (double m : {0.1, 5.0, 300.0}) {
      const auto w = poisson_window(m, 1e-12);
      double s = 0.0;
      for (double x : w.weights) s += x;
      CHECK(s > 1.0 - 1e-11);
      CHECK(s <= 1.0 + 1e-12);
    }
  }

  TEST_CASE("rk4 decay and convergence order") {
    const VectorField f = [](double, const std::vector<double>& y, std::vector<double>& d) { d = {-y[0]}; };
    const auto y = rk4_integrate(f, {1.0}, {0.0, 1.0}, 1e-3);
    CHECK(std::abs(y.back()[0] - std::exp(-1.0)) < 1e-8);
    const double e1 = std::abs(rk4_integrate(f, {1.0}, {0.0, 1.0}, 0.1).back()[0] - std::exp(-1.0));
    const double e2 = std::abs(rk4_integrate(f, {1.0}, {0.0, 1.0}, 0.05).back()[0] - std::exp(-1.0));
    CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.1));
    const VectorField zero = [](double, const std::vector<double>& y, std::vector<double>& d) {
      d.assign(y.size(), 0.0);
    };
    const auto c = rk4_integrate(zero, {2.0, 3.0}, {0.0, 0.5, 9.0}, 0.1);
    CHECK(c.back() == std::vector<double>{2.0, 3.0});
    CHECK_THROWS_AS(rk4_integrate(f, {1.0}, {0.0, 1.0}, 0.0), Error);
  }

  TEST_CASE("ks and tv distances") {
    std::vector<double> a{0.1, 0.5, 0.9};
    CHECK(ks_statistic(a, a) == 0.0);
    CHECK(ks_statistic({0.0, 1.0}, {2.0, 3.0}) == 1.0);
    CHECK(ks_statistic({0.5}, [](double x) { return std::clamp(x, 0.0, 1.0); }) == doctest::Approx(0.5));
    Histogram h{{0, 0.5}, {1, 0.5}};
    CHECK(tv_distance(h, h) == 0.0);
    CHECK(tv_distance(h, Histogram{{3, 1.0}}) == doctest::Approx(1.0));
    CHECK(tv_distance(histogram_of(std::vector<std::int64_t>{0, 0, 1, 1}), h) == doctest::Approx(0.0));
    CHECK_THROWS_AS(ks_statistic(std::vector<double>{}, a), Error);
  }

  TEST_CASE("negbin sampling through the gamma-poisson mixture") {
    const auto p = testutil::esep(10, 2, 3);
    const auto pmf = esep_steady_negbin(p).probs;
    std::mt19937_64 gen(42);
    std::negative_binomial_distribution<int> nb(5, 1.0 / 3.0);
    std::vector<std::int64_t> draws;
    for (int i = 0; i < 1000000; ++i) draws.push_back(nb(gen));
    CHECK(tv_distance(histogram_of(draws), histogram_of(pmf)) < 0.005);
  }

  TEST_CASE("chi-square tail agrees with boost") {
    for (int dof : {1, 4, 17})
      for (double x : {0.5, 3.84, 20.0}) {
        boost::math::chi_squared d(dof);
        CHECK(chi_square_upper_tail(x, dof) == doctest::Approx(boost::math::cdf(complement(d, x))).epsilon(1e-10));
      }
    Histogram exact{{0, 250.0}, {1, 500.0}, {2, 250.0}};
    const auto r = chi_square(exact, {0.25, 0.5, 0.25});
    CHECK(r.statistic == doctest::Approx(0.0));
    CHECK(r.pvalue == doctest::Approx(1.0));
  }

  TEST_CASE("special functions") {
    for (double x : {0.3, 1.0, 2.5, 17.0, 400.0}) CHECK(log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-13));
    CHECK(log_factorial(10) == doctest::Approx(std::log(3628800.0)));
    CHECK(log_binomial(10, 3) == doctest::Approx(std::log(120.0)));
    CHECK(log_add(std::log(2.0), std::log(3.0)) == doctest::Approx(std::log(5.0)));
    CHECK(log_add(-1e300, 0.0) == doctest::Approx(0.0));
  }

  TEST_CASE("finite differences") {
    auto f = [](double x) { return std::sin(x); };
    CHECK(central_difference(f, 0.4, 1e-5) == doctest::Approx(std::cos(0.4)).epsilon(1e-9));
    CHECK(second_difference(f, 0.4, 1e-4) == doctest::Approx(-std::sin(0.4)).epsilon(1e-6));
  }

  TEST_CASE("batch means on iid data") {
    RandomStream r({4, 4});
    std::vector<double> x;
    for (int i = 0; i < 100000; ++i) x.push_back(r.standard_normal());
    const double se = batch_means_standard_error(x, 50);
    CHECK(se / (1.0 / std::sqrt(1e5)) == doctest::Approx(1.0).epsilon(0.3));
    const auto mv = mean_var(x);
    CHECK(mv.n == x.size());
    CHECK(mv.variance == doctest::Approx(1.0).epsilon(0.02));
  }
}
