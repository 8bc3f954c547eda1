#pragma once

// Reference implementations used only by the tests. Each one is written
// from the textbook definition, without sharing code with the library.

#include <fsdr/common.hpp>
#include <fsdr/neuralnet.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <utility>
#include <vector>

namespace oracle {

/// Natural cubic spline as 4 (D - 1) polynomial coefficients found by one
/// dense solve: interpolation at both ends of every segment, C1 and C2 at
/// interior knots, zero curvature at the two ends.
class DenseSpline {
 public:
  explicit DenseSpline(const std::vector<double>& y) : n_(static_cast<int>(y.size()) - 1) {
    const int m = 4 * n_;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    int row = 0;
    auto knot = [&](int j) { return static_cast<double>(j) / n_; };
    for (int s = 0; s < n_; ++s) {
      for (int end = 0; end < 2; ++end) {
        const double x = knot(s + end);
        for (int p = 0; p < 4; ++p) a(row, 4 * s + p) = std::pow(x, p);
        b(row++) = y[static_cast<std::size_t>(s + end)];
      }
    }
    for (int s = 0; s + 1 < n_; ++s) {
      const double x = knot(s + 1);
      for (int p = 1; p < 4; ++p) {
        a(row, 4 * s + p) = p * std::pow(x, p - 1);
        a(row, 4 * (s + 1) + p) = -p * std::pow(x, p - 1);
      }
      ++row;
      for (int p = 2; p < 4; ++p) {
        a(row, 4 * s + p) = p * (p - 1) * std::pow(x, p - 2);
        a(row, 4 * (s + 1) + p) = -p * (p - 1) * std::pow(x, p - 2);
      }
      ++row;
    }
    a(row, 2) = 2.0;  // curvature at x = 0
    ++row;
    a(row, 4 * (n_ - 1) + 2) = 2.0;
    a(row, 4 * (n_ - 1) + 3) = 6.0;
    ++row;
    coef_ = a.fullPivLu().solve(b);
  }

  double operator()(double x) const {
    const int s = segment(x);
    double v = 0.0;
    for (int p = 0; p < 4; ++p) v += coef_(4 * s + p) * std::pow(x, p);
    return v;
  }

  double deriv(double x) const {
    const int s = segment(x);
    double v = 0.0;
    for (int p = 1; p < 4; ++p) v += p * coef_(4 * s + p) * std::pow(x, p - 1);
    return v;
  }

 private:
  int segment(double x) const {
    int s = static_cast<int>(std::floor(x * n_));
    if (s < 0) s = 0;
    if (s >= n_) s = n_ - 1;
    return s;
  }
  int n_;
  Eigen::VectorXd coef_;
};

/// Loop-based forward pass reading the same flat parameter layout through
/// the public accessors.
inline std::vector<double> naive_forward(const fsdr::nn::MlpModel& model,
                                         const std::vector<std::vector<double>>& inputs) {
  const auto& dims = model.layer_dims();
  std::vector<double> out;
  for (const auto& row : inputs) {
    std::vector<double> a = row;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
      const auto w = model.params.weights(l);
      const auto bias = model.params.bias(l);
      std::vector<double> z(static_cast<std::size_t>(dims[l + 1]), 0.0);
      for (int o = 0; o < dims[l + 1]; ++o) {
        double acc = bias(o);
        for (int i = 0; i < dims[l]; ++i) acc += a[static_cast<std::size_t>(i)] * w(i, o);
        z[static_cast<std::size_t>(o)] = (l + 2 < dims.size()) ? std::tanh(acc) : acc;
      }
      a = std::move(z);
    }
    out.push_back(a[0]);
  }
  return out;
}

/// I(A; B) in nats from an explicitly counted contingency table.
inline double contingency_mi(const std::vector<int>& a, const std::vector<int>& b) {
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> pa;
  std::map<int, double> pb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1.0;
    pa[a[i]] += 1.0;
    pb[b[i]] += 1.0;
  }
  const double n = static_cast<double>(a.size());
  double mi = 0.0;
  for (const auto& [key, c] : joint) {
    const double pxy = c / n;
    mi += pxy * std::log(pxy / ((pa[key.first] / n) * (pb[key.second] / n)));
  }
  return mi;
}

/// Ordinary least squares with intercept via the normal equations.
inline std::pair<Eigen::VectorXd, double> ols(const fsdr::Matrix& x, const fsdr::Vector& y) {
  Eigen::MatrixXd design(x.rows(), x.cols() + 1);
  design.leftCols(x.cols()) = x;
  design.col(x.cols()).setOnes();
  const Eigen::VectorXd beta = (design.transpose() * design).ldlt().solve(design.transpose() * y);
  return {beta.head(x.cols()), beta(x.cols())};
}

/// Central finite difference of f at x.
inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// |a - b| / max(floor, |a|, |b|).
inline double rel_error(double a, double b, double floor = 1.0) {
  return std::abs(a - b) / std::max(floor, std::max(std::abs(a), std::abs(b)));
}

}  // namespace oracle
