#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace eseplab {

double log_gamma(double x);
double log_factorial(std::int64_t k);
double log_binomial(double n, double k);
// log(exp(a) + exp(b))
double log_add(double a, double b);

struct GeneratorEntry {
  std::size_t row = 0;
  std::size_t col = 0;
  double rate = 0.0;
};

class SparseSubGenerator {
 public:
  // Duplicate (row, col) pairs are summed. Throws DomainViolation unless
  // off-diagonals are >= 0 and row sums are <= 0.
  SparseSubGenerator(std::size_t dimension, std::vector<GeneratorEntry> entries);

  std::size_t dimension() const { return dimension_; }
  const std::vector<GeneratorEntry>& entries() const { return entries_; }
  double max_abs_diagonal() const { return max_abs_diagonal_; }
  // y = x^T Z (row vector times matrix)
  void left_multiply(const std::vector<double>& x, std::vector<double>& y) const;

 private:
  std::size_t dimension_;
  std::vector<GeneratorEntry> entries_;
  double max_abs_diagonal_ = 0.0;
};

// v0^T exp(Z t) by uniformization; rate defaults to max_abs_diagonal.
std::vector<double> expm_action(const SparseSubGenerator& z, double t, const std::vector<double>& v0,
                                std::optional<double> rate = std::nullopt, double tail = 1e-12);

// Poisson(mean) weights for k in [left, right] covering all but `tail` mass.
struct PoissonWindow {
  std::int64_t left = 0;
  std::vector<double> weights;
};
PoissonWindow poisson_window(double mean, double tail);

using VectorField = std::function<void(double t, const std::vector<double>& y, std::vector<double>& dydt)>;

// Classical RK4 on t_grid, substeps no longer than max_step.
std::vector<std::vector<double>> rk4_integrate(const VectorField& f, const std::vector<double>& y0,
                                               const std::vector<double>& t_grid, double max_step);

using Histogram = std::map<std::int64_t, double>;

Histogram histogram_of(const std::vector<std::int64_t>& values);
Histogram histogram_of(const std::vector<double>& pmf);

double ks_statistic(std::vector<double> a, std::vector<double> b);
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);
double tv_distance(const Histogram& a, const Histogram& b);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double pvalue = 1.0;
};
// Counts vs pmf on support 0..K (remaining mass pooled in an upper tail bin).
// Adjacent bins are merged until each expected count is >= min_expected.
ChiSquareResult chi_square(const Histogram& counts, const std::vector<double>& pmf, double min_expected = 5.0);
double chi_square_upper_tail(double statistic, int dof);

double central_difference(const std::function<double(double)>& f, double x, double h);
double second_difference(const std::function<double(double)>& f, double x, double h);

// Standard error of the mean from contiguous batch means.
double batch_means_standard_error(const std::vector<double>& values, std::size_t batches);

struct MeanVar {
  double mean = 0.0;
  double variance = 0.0;
  std::size_t n = 0;
};
MeanVar mean_var(const std::vector<double>& values);

}  // namespace eseplab
