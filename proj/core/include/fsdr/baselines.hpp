#pragma once

#include "fsdr/common.hpp"
#include "fsdr/dataset.hpp"
#include "fsdr/neuralnet.hpp"
#include "fsdr/relaxation.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fsdr::baselines {

// ---------------------------------------------------------------------------
// Mutual information filter

struct MiOptions {
  int bins = 16;
};

/// Equal-frequency bin labels in [0, bins). Rank r of n maps to
/// floor(r * bins / n); tied values share the bin of their first rank, so the
/// labels depend only on the ordering of the values.
std::vector<int> equal_frequency_bins(std::span<const double> values, int bins);

/// Plug-in mutual information (nats) of two label sequences.
double discrete_mutual_information(std::span<const int> a, std::span<const int> b, int bins_a,
                                   int bins_b);

/// I(x_j; y) for every feature; constant features score 0.
std::vector<double> mutual_information_scores(const data::Dataset& dataset, int bins);

SelectionResult mi_select(const data::Dataset& dataset, int t, const MiOptions& options = {});

// ---------------------------------------------------------------------------
// Sequential forward selection

enum class SfsInner { ridge, mlp };

struct SfsOptions {
  SfsInner inner = SfsInner::ridge;
  double ridge_lambda = 1e-3;
  double validation_fraction = 0.2;
  std::uint64_t seed = 0;
  nn::RegressorConfig mlp;  // used when inner == mlp
};

/// Fixed inner split used by sfs_select: (train rows, validation rows).
std::pair<std::vector<Index>, std::vector<Index>> inner_split(Index n_samples, double validation_fraction,
                                                              std::uint64_t seed);

/// Validation R^2 of ridge regression (intercept unpenalized) on the
/// columns `features` (1-based).
double ridge_validation_r2(const data::Dataset& dataset, std::span<const int> features,
                           std::span<const Index> train_rows, std::span<const Index> validation_rows,
                           double lambda);

SelectionResult sfs_select(const data::Dataset& dataset, int t, const SfsOptions& options = {});

// ---------------------------------------------------------------------------
// LASSO

struct LassoOptions {
  int n_lambda = 50;
  double lambda_min_ratio = 1e-3;
  int max_sweeps = 10000;
  double tolerance = 1e-9;  // max |coefficient change| per sweep, in column-sd units
  /// When false an exhausted sweep budget returns the last iterate with
  /// converged = false instead of throwing.
  bool require_convergence = true;
  std::vector<double> lambda_path;  // explicit descending path; empty = default
};

struct LassoFit {
  Vector coefficients;
  double intercept = 0.0;
  double lambda = 0.0;
  int sweeps = 0;
  bool converged = true;
  std::vector<double> objective_trace;  // objective after each full sweep
};

/// Minimizes (1 / 2N) ||y - b - X beta||^2 + lambda ||beta||_1 by cyclic
/// coordinate descent with soft-thresholding. The intercept is removed by
/// centering. `warm_start` seeds beta. Throws TrainingError when the sweep
/// budget runs out, unless `require_convergence` is off.
LassoFit lasso_coordinate_descent(const Matrix& x, const Vector& y, double lambda,
                                  const LassoOptions& options = {},
                                  const Vector* warm_start = nullptr);

double lasso_objective(const Matrix& x, const Vector& y, const Vector& beta, double intercept,
                       double lambda);

/// max_j |x_j^T (y - mean y)| / N on centered columns.
double lambda_max(const Matrix& x, const Vector& y);

/// n log-spaced values from lambda_max down to lambda_max * min_ratio.
std::vector<double> default_lambda_path(const Matrix& x, const Vector& y, int n, double min_ratio);

SelectionResult lasso_select(const data::Dataset& dataset, int t, const LassoOptions& options = {});

// ---------------------------------------------------------------------------
// Common selector interface

enum class Method { mi, sfs, lasso, fsdr };

std::string_view to_string(Method m) noexcept;
Method parse_method(std::string_view name);

struct SelectorSpec {
  Method method = Method::fsdr;
  int t = 5;
  MiOptions mi;
  SfsOptions sfs;
  LassoOptions lasso;
  FsdrConfig fsdr;
};

/// Runs the selector on a standardized dataset; wall time covers the
/// selector only. The seed overrides the seeds inside the options.
SelectionResult run_selector(const data::Dataset& dataset, const SelectorSpec& spec,
                             std::uint64_t seed);

}  // namespace fsdr::baselines
