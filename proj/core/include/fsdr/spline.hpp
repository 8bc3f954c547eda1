#pragma once

#include "fsdr/common.hpp"
#include "fsdr/dataset.hpp"

#include <concepts>
#include <span>
#include <vector>

namespace fsdr::spline {

/// A function of the relaxed band coordinate x in [0, 1] with an exact
/// first derivative. Outside [0, 1] the function is held constant.
template <typename T>
concept Interpolant = requires(const T& f, double x) {
  { f.eval(x) } -> std::convertible_to<double>;
  { f.eval_deriv(x) } -> std::convertible_to<double>;
};

/// Natural cubic spline through (j / (D - 1), values[j]), j = 0..D-1.
///
/// The second-derivative moments are solved once at construction (Thomas
/// algorithm on the uniform-spacing tridiagonal system); evaluation locates
/// the segment in O(1) because the knots are uniform.
class CubicSpline {
 public:
  CubicSpline() = default;

  std::size_t size() const noexcept { return values_.size(); }
  double knot_position(std::size_t j) const noexcept {
    return static_cast<double>(j) / static_cast<double>(values_.size() - 1);
  }
  const std::vector<double>& knot_values() const noexcept { return values_; }
  const std::vector<double>& second_derivatives() const noexcept { return moments_; }

  double eval(double x) const noexcept;
  double eval_deriv(double x) const noexcept;
  double eval_second_deriv(double x) const noexcept;

  /// Value and derivative in one segment lookup.
  void eval_with_deriv(double x, double& value, double& deriv) const noexcept;

  friend CubicSpline fit_natural_cubic(std::span<const double> values);

 private:
  std::vector<double> values_;
  std::vector<double> moments_;
};

static_assert(Interpolant<CubicSpline>);

/// D < 2 and non-finite values throw InvalidInput. D = 2 gives the linear
/// interpolant (both moments are boundary moments, hence zero).
CubicSpline fit_natural_cubic(std::span<const double> values);

inline double eval(const CubicSpline& s, double x) noexcept { return s.eval(x); }
inline double eval_deriv(const CubicSpline& s, double x) noexcept { return s.eval_deriv(x); }

/// One spline per sample, all sharing the knots j / (D - 1).
class ContinuousDataset {
 public:
  explicit ContinuousDataset(std::vector<CubicSpline> splines);

  Index n_samples() const noexcept { return static_cast<Index>(splines_.size()); }
  Index n_features() const noexcept { return n_features_; }
  const CubicSpline& operator[](Index i) const { return splines_[static_cast<std::size_t>(i)]; }
  const std::vector<CubicSpline>& splines() const noexcept { return splines_; }

 private:
  std::vector<CubicSpline> splines_;
  Index n_features_ = 0;
};

ContinuousDataset relax_dataset(const data::Dataset& dataset);

}  // namespace fsdr::spline
