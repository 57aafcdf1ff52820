#include "eseplab/numerics.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>

#include "eseplab/error.hpp"

namespace eseplab {

double log_gamma(double x) {
  if (!(x > 0.0)) throw Error(ErrorCode::DomainViolation, "log_gamma needs x > 0");
  return boost::math::lgamma(x);
}

double log_factorial(std::int64_t k) {
  if (k < 0) throw Error(ErrorCode::DomainViolation, "log_factorial needs k >= 0");
  if (k < 2) return 0.0;
  return log_gamma(static_cast<double>(k) + 1.0);
}

double log_binomial(double n, double k) {
  return log_gamma(n + 1.0) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0);
}

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::fabs(a - b)));
}

SparseSubGenerator::SparseSubGenerator(std::size_t dimension, std::vector<GeneratorEntry> entries)
    : dimension_(dimension) {
  std::sort(entries.begin(), entries.end(), [](const GeneratorEntry& x, const GeneratorEntry& y) {
    return x.row != y.row ? x.row < y.row : x.col < y.col;
  });
  for (const GeneratorEntry& e : entries) {
    if (e.row >= dimension || e.col >= dimension) throw Error(ErrorCode::DomainViolation, "entry out of range");
    if (!entries_.empty() && entries_.back().row == e.row && entries_.back().col == e.col) {
      entries_.back().rate += e.rate;
    } else {
      entries_.push_back(e);
    }
  }
  std::vector<double> row_sum(dimension, 0.0), row_scale(dimension, 0.0);
  for (const GeneratorEntry& e : entries_) {
    if (e.row != e.col && e.rate < 0.0) throw Error(ErrorCode::DomainViolation, "negative off-diagonal rate");
    if (e.row == e.col) max_abs_diagonal_ = std::max(max_abs_diagonal_, std::fabs(e.rate));
    row_sum[e.row] += e.rate;
    row_scale[e.row] += std::fabs(e.rate);
  }
  for (std::size_t i = 0; i < dimension; ++i) {
    if (row_sum[i] > 1e-12 * std::max(1.0, row_scale[i])) {
      throw Error(ErrorCode::DomainViolation, "row sum of a sub-generator must be <= 0");
    }
  }
}

void SparseSubGenerator::left_multiply(const std::vector<double>& x, std::vector<double>& y) const {
  y.assign(dimension_, 0.0);
  for (const GeneratorEntry& e : entries_) y[e.col] += x[e.row] * e.rate;
}

PoissonWindow poisson_window(double mean, double tail) {
  PoissonWindow w;
  if (mean <= 0.0) {
    w.weights = {1.0};
    return w;
  }
  const auto mode = static_cast<std::int64_t>(std::floor(mean));
  auto logw = [mean](std::int64_t k) {
    return static_cast<double>(k) * std::log(mean) - mean - log_factorial(k);
  };
  const double wmode = std::exp(logw(mode));
  std::vector<double> right{wmode};
  double cur = wmode;
  for (std::int64_t k = mode + 1;; ++k) {
    cur *= mean / static_cast<double>(k);
    right.push_back(cur);
    const double ratio = mean / static_cast<double>(k + 1);
    if (cur * ratio / (1.0 - ratio) < 0.5 * tail) break;
  }
  std::vector<double> left;
  cur = wmode;
  std::int64_t k = mode;
  while (k > 0) {
    cur *= static_cast<double>(k) / mean;
    --k;
    left.push_back(cur);
    const double ratio = static_cast<double>(k) / mean;
    if (k == 0 || cur * ratio / (1.0 - ratio) < 0.5 * tail) break;
  }
  w.left = k;
  w.weights.assign(left.rbegin(), left.rend());
  w.weights.insert(w.weights.end(), right.begin(), right.end());
  return w;
}

std::vector<double> expm_action(const SparseSubGenerator& z, double t, const std::vector<double>& v0,
                                std::optional<double> rate, double tail) {
  if (t < 0.0) throw Error(ErrorCode::NegativeTime, "expm_action needs t >= 0");
  if (v0.size() != z.dimension()) throw Error(ErrorCode::DomainViolation, "vector size mismatch");
  const double lambda = rate ? *rate : z.max_abs_diagonal();
  if (lambda < z.max_abs_diagonal()) throw Error(ErrorCode::DomainViolation, "uniformization rate below max |diagonal|");
  if (t == 0.0 || lambda == 0.0) return v0;

  const PoissonWindow w = poisson_window(lambda * t, tail);
  const std::size_t d = z.dimension();
  std::vector<double> term = v0, next(d), out(d, 0.0);
  const auto last = w.left + static_cast<std::int64_t>(w.weights.size()) - 1;
  for (std::int64_t k = 0; k <= last; ++k) {
    if (k >= w.left) {
      const double wk = w.weights[static_cast<std::size_t>(k - w.left)];
      for (std::size_t i = 0; i < d; ++i) out[i] += wk * term[i];
    }
    if (k == last) break;
    z.left_multiply(term, next);
    for (std::size_t i = 0; i < d; ++i) term[i] += next[i] / lambda;
  }
  for (double& x : out) {
    if (x < 0.0 && x > -1e-10) x = 0.0;
    if (x > 1.0 && x < 1.0 + 1e-10) x = 1.0;
  }
  return out;
}

std::vector<std::vector<double>> rk4_integrate(const VectorField& f, const std::vector<double>& y0,
                                               const std::vector<double>& t_grid, double max_step) {
  if (!(max_step > 0.0)) throw Error(ErrorCode::StepSizeUnderflow, "max_step must be > 0");
  std::vector<std::vector<double>> out;
  if (t_grid.empty()) return out;
  const std::size_t d = y0.size();
  std::vector<double> y = y0, k1(d), k2(d), k3(d), k4(d), tmp(d);
  out.push_back(y);
  for (std::size_t g = 1; g < t_grid.size(); ++g) {
    const double span = t_grid[g] - t_grid[g - 1];
    if (!(span > 0.0)) throw Error(ErrorCode::StepSizeUnderflow, "t_grid must be strictly increasing");
    const auto steps = static_cast<std::int64_t>(std::ceil(span / max_step - 1e-12));
    const double h = span / static_cast<double>(std::max<std::int64_t>(steps, 1));
    if (h < 1e-13 * std::max(1.0, std::fabs(t_grid[g]))) throw Error(ErrorCode::StepSizeUnderflow, "step too small");
    double t = t_grid[g - 1];
    for (std::int64_t s = 0; s < std::max<std::int64_t>(steps, 1); ++s) {
      f(t, y, k1);
      for (std::size_t i = 0; i < d; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
      f(t + 0.5 * h, tmp, k2);
      for (std::size_t i = 0; i < d; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
      f(t + 0.5 * h, tmp, k3);
      for (std::size_t i = 0; i < d; ++i) tmp[i] = y[i] + h * k3[i];
      f(t + h, tmp, k4);
      for (std::size_t i = 0; i < d; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      t = t_grid[g - 1] + static_cast<double>(s + 1) * h;
    }
    out.push_back(y);
  }
  return out;
}

Histogram histogram_of(const std::vector<std::int64_t>& values) {
  Histogram h;
  for (std::int64_t v : values) h[v] += 1.0;
  return h;
}

Histogram histogram_of(const std::vector<double>& pmf) {
  Histogram h;
  for (std::size_t k = 0; k < pmf.size(); ++k) h[static_cast<std::int64_t>(k)] = pmf[k];
  return h;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptySample, "ks_statistic needs nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() || j < b.size()) {
    double x;
    if (j >= b.size() || (i < a.size() && a[i] <= b[j])) {
      x = a[i];
    } else {
      x = b[j];
    }
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw Error(ErrorCode::EmptySample, "ks_statistic needs a nonempty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < sample.size()) {
    const double x = sample[i];
    const double below = static_cast<double>(i) / n;
    while (i < sample.size() && sample[i] == x) ++i;
    const double upto = static_cast<double>(i) / n;
    const double f = cdf(x);
    d = std::max({d, std::fabs(upto - f), std::fabs(f - below)});
  }
  return d;
}

double tv_distance(const Histogram& a, const Histogram& b) {
  double ta = 0.0, tb = 0.0;
  for (const auto& [k, v] : a) ta += v;
  for (const auto& [k, v] : b) tb += v;
  if (ta <= 0.0 || tb <= 0.0) throw Error(ErrorCode::EmptySample, "tv_distance needs nonempty histograms");
  double s = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      s += ia->second / ta;
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      s += ib->second / tb;
      ++ib;
    } else {
      s += std::fabs(ia->second / ta - ib->second / tb);
      ++ia;
      ++ib;
    }
  }
  return 0.5 * s;
}

double chi_square_upper_tail(double statistic, int dof) {
  if (dof <= 0) return 1.0;
  if (!std::isfinite(statistic)) return 0.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

ChiSquareResult chi_square(const Histogram& counts, const std::vector<double>& pmf, double min_expected) {
  double n = 0.0;
  for (const auto& [k, v] : counts) n += v;
  if (n <= 0.0 || pmf.empty()) throw Error(ErrorCode::EmptySample, "chi_square needs counts and a pmf");
  const auto big_k = static_cast<std::int64_t>(pmf.size()) - 1;
  double mass = 0.0;
  for (double p : pmf) mass += p;
  const double tail_mass = std::max(0.0, 1.0 - mass);
  double tail_obs = 0.0, outside = 0.0;
  for (const auto& [k, v] : counts) {
    if (k < 0) outside += v;
    if (k > big_k) tail_obs += v;
  }
  ChiSquareResult r;
  if (outside > 0.0 || (tail_obs > 0.0 && tail_mass == 0.0)) {
    r.statistic = std::numeric_limits<double>::infinity();
    r.pvalue = 0.0;
    return r;
  }
  std::vector<std::pair<double, double>> raw;  // (observed, expected)
  for (std::int64_t k = 0; k <= big_k; ++k) {
    const auto it = counts.find(k);
    raw.emplace_back(it == counts.end() ? 0.0 : it->second, n * pmf[static_cast<std::size_t>(k)]);
  }
  if (tail_mass > 0.0) raw.emplace_back(tail_obs, n * tail_mass);
  std::vector<std::pair<double, double>> bins;
  std::pair<double, double> acc{0.0, 0.0};
  for (const auto& b : raw) {
    acc.first += b.first;
    acc.second += b.second;
    if (acc.second >= min_expected) {
      bins.push_back(acc);
      acc = {0.0, 0.0};
    }
  }
  if (acc.second > 0.0 || acc.first > 0.0) {
    if (bins.empty()) {
      bins.push_back(acc);
    } else {
      bins.back().first += acc.first;
      bins.back().second += acc.second;
    }
  }
  for (const auto& [o, e] : bins) {
    if (e <= 0.0) {
      if (o > 0.0) r.statistic = std::numeric_limits<double>::infinity();
      continue;
    }
    r.statistic += (o - e) * (o - e) / e;
  }
  r.dof = static_cast<int>(bins.size()) - 1;
  r.pvalue = chi_square_upper_tail(r.statistic, r.dof);
  return r;
}

double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

double second_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

MeanVar mean_var(const std::vector<double>& values) {
  MeanVar r;
  double m2 = 0.0;
  for (double v : values) {
    ++r.n;
    const double d = v - r.mean;
    r.mean += d / static_cast<double>(r.n);
    m2 += d * (v - r.mean);
  }
  r.variance = r.n > 1 ? m2 / static_cast<double>(r.n - 1) : 0.0;
  return r;
}

double batch_means_standard_error(const std::vector<double>& values, std::size_t batches) {
  if (batches < 2 || values.size() < batches) throw Error(ErrorCode::EmptySample, "not enough values for batch means");
  const std::size_t m = values.size() / batches;
  std::vector<double> means;
  for (std::size_t b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::size_t i = b * m; i < (b + 1) * m; ++i) s += values[i];
    means.push_back(s / static_cast<double>(m));
  }
  return std::sqrt(mean_var(means).variance / static_cast<double>(batches));
}

}  // namespace eseplab
