#include "fsdr/spline.hpp"

#include <algorithm>
#include <cmath>

namespace fsdr::spline {

namespace {

struct Segment {
  std::size_t j;  // left knot
  double u;       // local coordinate in [0, 1]
};

Segment locate(double x, std::size_t n_knots) noexcept {
  const auto intervals = static_cast<double>(n_knots - 1);
  const double t = x * intervals;
  auto j = static_cast<std::size_t>(t);
  if (j >= n_knots - 1) j = n_knots - 2;
  return {j, t - static_cast<double>(j)};
}

}  // namespace

CubicSpline fit_natural_cubic(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw InvalidInput("cubic spline needs at least 2 knots");
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidInput("cubic spline knot value is not finite");
  }

  CubicSpline s;
  s.values_.assign(values.begin(), values.end());
  s.moments_.assign(n, 0.0);
  if (n == 2) return s;

  // Uniform spacing h: M[j-1] + 4 M[j] + M[j+1] = 6 (y[j+1] - 2 y[j] + y[j-1]) / h^2,
  // with M[0] = M[n-1] = 0.
  const double h = 1.0 / static_cast<double>(n - 1);
  const double scale = 6.0 / (h * h);
  const std::size_t m = n - 2;
  std::vector<double> c_prime(m);
  std::vector<double> d_prime(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t j = k + 1;
    const double rhs = scale * (values[j + 1] - 2.0 * values[j] + values[j - 1]);
    if (k == 0) {
      c_prime[k] = 1.0 / 4.0;
      d_prime[k] = rhs / 4.0;
    } else {
      const double denom = 4.0 - c_prime[k - 1];
      c_prime[k] = 1.0 / denom;
      d_prime[k] = (rhs - d_prime[k - 1]) / denom;
    }
  }
  s.moments_[m] = d_prime[m - 1];
  for (std::size_t k = m - 1; k-- > 0;) {
    s.moments_[k + 1] = d_prime[k] - c_prime[k] * s.moments_[k + 2];
  }
  return s;
}

double CubicSpline::eval(double x) const noexcept {
  x = std::clamp(x, 0.0, 1.0);
  const auto [j, u] = locate(x, values_.size());
  const double h = 1.0 / static_cast<double>(values_.size() - 1);
  const double a = 1.0 - u;
  return a * values_[j] + u * values_[j + 1] +
         (h * h / 6.0) * ((a * a * a - a) * moments_[j] + (u * u * u - u) * moments_[j + 1]);
}

double CubicSpline::eval_deriv(double x) const noexcept {
  if (x < 0.0 || x > 1.0) return 0.0;
  const auto [j, u] = locate(x, values_.size());
  const double intervals = static_cast<double>(values_.size() - 1);
  const double h = 1.0 / intervals;
  const double a = 1.0 - u;
  const double du = values_[j + 1] - values_[j] +
                    (h * h / 6.0) * ((1.0 - 3.0 * a * a) * moments_[j] + (3.0 * u * u - 1.0) * moments_[j + 1]);
  return du * intervals;
}

double CubicSpline::eval_second_deriv(double x) const noexcept {
  if (x < 0.0 || x > 1.0) return 0.0;
  const auto [j, u] = locate(x, values_.size());
  return (1.0 - u) * moments_[j] + u * moments_[j + 1];
}

void CubicSpline::eval_with_deriv(double x, double& value, double& deriv) const noexcept {
  const bool outside = x < 0.0 || x > 1.0;
  x = std::clamp(x, 0.0, 1.0);
  const auto [j, u] = locate(x, values_.size());
  const double intervals = static_cast<double>(values_.size() - 1);
  const double h2_6 = 1.0 / (6.0 * intervals * intervals);
  const double a = 1.0 - u;
  const double y0 = values_[j];
  const double y1 = values_[j + 1];
  const double m0 = moments_[j];
  const double m1 = moments_[j + 1];
  value = a * y0 + u * y1 + h2_6 * ((a * a * a - a) * m0 + (u * u * u - u) * m1);
  deriv = outside ? 0.0
                  : (y1 - y0 + h2_6 * ((1.0 - 3.0 * a * a) * m0 + (3.0 * u * u - 1.0) * m1)) *
                        intervals;
}

ContinuousDataset::ContinuousDataset(std::vector<CubicSpline> splines)
    : splines_(std::move(splines)) {
  if (splines_.empty()) throw InvalidInput("continuous dataset needs at least one sample");
  n_features_ = static_cast<Index>(splines_.front().size());
  for (const auto& s : splines_) {
    if (static_cast<Index>(s.size()) != n_features_) {
      throw InvalidInput("all splines must share the same knots");
    }
  }
}

ContinuousDataset relax_dataset(const data::Dataset& dataset) {
  const Matrix& x = dataset.features();
  std::vector<CubicSpline> splines;
  splines.reserve(static_cast<std::size_t>(x.rows()));
  for (Index i = 0; i < x.rows(); ++i) {
    // Row-major storage: each sample is contiguous.
    splines.push_back(fit_natural_cubic(std::span<const double>(x.row(i).data(),
                                                                static_cast<std::size_t>(x.cols()))));
  }
  return ContinuousDataset(std::move(splines));
}

}  // namespace fsdr::spline
