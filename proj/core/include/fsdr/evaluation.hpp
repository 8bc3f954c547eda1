#pragma once

#include "fsdr/baselines.hpp"
#include "fsdr/common.hpp"
#include "fsdr/dataset.hpp"
#include "fsdr/neuralnet.hpp"
#include "fsdr/relaxation.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fsdr::eval {

struct Metrics {
  double r2 = 0.0;
  double rmse = 0.0;
};

/// Budget of the regressor that scores a feature set. Hidden dims stay
/// {15, 10} for every protocol run.
inline nn::RegressorConfig default_evaluator() { return {}; }

/// Fits a min-max / z-score transform on `train`, applies it to both splits,
/// trains a fresh [t', 15, 10, 1] regressor on the chosen columns and
/// scores the test split. RMSE is in standardized response units.
Metrics evaluate_selection(const data::Dataset& train, const data::Dataset& test,
                           std::span<const int> indices, std::uint64_t seed,
                           const nn::RegressorConfig& config = default_evaluator());

struct BenchmarkRow {
  std::string dataset;
  std::string selector;
  int t = 0;
  int t_prime = 0;
  double time_s = 0.0;
  double r2 = 0.0;
  double rmse = 0.0;
  FeatureSet indices;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;
  std::optional<std::string> error;  // set for failed combinations
};

struct BenchmarkReport {
  std::vector<BenchmarkRow> rows;
  std::string config_hash;
  std::string timestamp;
};

struct BenchmarkOptions {
  double test_fraction = 0.1;
  nn::RegressorConfig evaluator;
  /// Called after each finished row.
  std::function<void(const BenchmarkRow&)> on_row;
};

inline const std::vector<int> default_target_sizes = {2, 5, 10, 15, 20};

/// For every (dataset, selector, t, seed): split 90/10 under the seed,
/// standardize on the train part, time the selector alone, then evaluate the
/// selected set. A failing combination becomes an error row.
BenchmarkReport run_benchmark(const std::vector<data::Dataset>& datasets,
                              const std::vector<baselines::SelectorSpec>& selectors,
                              const std::vector<int>& target_sizes,
                              const std::vector<std::uint64_t>& seeds,
                              const BenchmarkOptions& options = {});

struct InitFinalComparison {
  FeatureSet initial;
  FeatureSet final_set;
  Metrics init;
  Metrics final_metrics;
  SelectionResult selection;
};

InitFinalComparison compare_init_final(const data::Dataset& dataset, int t, const FsdrConfig& config,
                                       std::uint64_t seed, double test_fraction = 0.1,
                                       const nn::RegressorConfig& evaluator = default_evaluator());

struct PairSweepOptions {
  int epochs = 50;
  int batch_size = 64;
  double learning_rate = 1e-3;
  double test_fraction = 0.1;
  Index max_features = 128;
};

/// r2(i, j) for 1 <= i < j <= D, stored 0-based; cells with i >= j are NaN.
struct PairGrid {
  Matrix r2;
  double smoothness = 0.0;  // mean |r2(i, j+1) - r2(i, j)| over defined neighbours
  Index n_pairs = 0;
};

PairGrid pair_sweep(const data::Dataset& dataset, std::uint64_t seed, const PairSweepOptions& options = {});

/// Mean absolute difference between horizontally adjacent defined cells.
double grid_smoothness(const Matrix& grid);

}  // namespace fsdr::eval
