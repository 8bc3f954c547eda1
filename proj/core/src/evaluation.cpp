#include "fsdr/evaluation.hpp"
#include "fsdr/metrics.hpp"

#include <cmath>
#include <limits>

namespace fsdr::eval {

namespace {

void check_indices(std::span<const int> indices, Index n_features) {
  if (indices.empty()) throw InvalidInput("cannot evaluate an empty feature set");
  for (int j : indices) {
    if (j < 1 || j > n_features) {
      throw InvalidInput("feature index " + std::to_string(j) + " outside 1.." +
                         std::to_string(n_features));
    }
  }
}

std::pair<data::Dataset, data::Dataset> standardized_split(const data::Dataset& dataset,
                                                           double test_fraction, std::uint64_t seed) {
  auto [train, test] = data::train_test_split(dataset, test_fraction, seed);
  auto [train_std, standardizer] = data::standardize(train);
  return {std::move(train_std), standardizer.apply(test)};
}

Metrics score(const data::Dataset& train, const data::Dataset& test, std::span<const int> indices,
              std::uint64_t seed, const nn::RegressorConfig& config) {
  const auto model =
      nn::fit_regressor(train.columns(indices), train.response(), config, seed);
  const Vector pred = nn::predict(model, test.columns(indices));
  return {r_squared(pred, test.response()), rmse(pred, test.response())};
}

}  // namespace

Metrics evaluate_selection(const data::Dataset& train, const data::Dataset& test,
                           std::span<const int> indices, std::uint64_t seed,
                           const nn::RegressorConfig& config) {
  if (train.n_features() != test.n_features()) {
    throw InvalidInput("train and test splits have different feature counts");
  }
  check_indices(indices, train.n_features());
  auto [train_std, standardizer] = data::standardize(train);
  return score(train_std, standardizer.apply(test), indices, seed, config);
}

BenchmarkReport run_benchmark(const std::vector<data::Dataset>& datasets,
                              const std::vector<baselines::SelectorSpec>& selectors,
                              const std::vector<int>& target_sizes,
                              const std::vector<std::uint64_t>& seeds,
                              const BenchmarkOptions& options) {
  if (datasets.empty()) throw InvalidInput("benchmark needs at least one dataset");
  if (selectors.empty()) throw InvalidInput("benchmark needs at least one selector");
  if (target_sizes.empty()) throw InvalidInput("benchmark needs at least one target size");
  if (seeds.empty()) throw InvalidInput("benchmark needs at least one seed");

  BenchmarkReport report;
  for (const auto& dataset : datasets) {
    for (const auto& selector : selectors) {
      for (int t : target_sizes) {
        for (std::uint64_t seed : seeds) {
          BenchmarkRow row;
          row.dataset = dataset.name();
          row.selector = std::string(baselines::to_string(selector.method));
          row.t = t;
          row.seed = seed;
          try {
            const auto [train, test] = standardized_split(dataset, options.test_fraction, seed);
            baselines::SelectorSpec spec = selector;
            spec.t = t;
            const auto selection = baselines::run_selector(train, spec, seed);
            row.t_prime = selection.t_prime();
            row.time_s = selection.wall_time_seconds;
            row.indices = selection.selected;
            row.warnings = selection.warnings;
            if (selection.selected.empty()) {
              throw TrainingError("selector returned no features");
            }
            const auto metrics = score(train, test, selection.selected, seed, options.evaluator);
            row.r2 = metrics.r2;
            row.rmse = metrics.rmse;
          } catch (const std::exception& e) {
            row.error = e.what();
            row.r2 = std::numeric_limits<double>::quiet_NaN();
            row.rmse = std::numeric_limits<double>::quiet_NaN();
          }
          if (options.on_row) options.on_row(row);
          report.rows.push_back(std::move(row));
        }
      }
    }
  }
  return report;
}

InitFinalComparison compare_init_final(const data::Dataset& dataset, int t, const FsdrConfig& config,
                                       std::uint64_t seed, double test_fraction,
                                       const nn::RegressorConfig& evaluator) {
  const auto [train, test] = standardized_split(dataset, test_fraction, seed);
  FsdrConfig cfg = config;
  cfg.seed = seed;
  auto trained = fsdr::train(train, t, cfg);
  InitFinalComparison out;
  out.initial = trained.result.initial.value_or(FeatureSet{});
  out.final_set = trained.result.selected;
  out.init = score(train, test, out.initial, seed, evaluator);
  out.final_metrics = score(train, test, out.final_set, seed, evaluator);
  out.selection = std::move(trained.result);
  return out;
}

double grid_smoothness(const Matrix& grid) {
  double total = 0.0;
  Index count = 0;
  for (Index i = 0; i < grid.rows(); ++i) {
    for (Index j = 0; j + 1 < grid.cols(); ++j) {
      const double a = grid(i, j);
      const double b = grid(i, j + 1);
      if (std::isnan(a) || std::isnan(b)) continue;
      total += std::abs(b - a);
      ++count;
    }
  }
  return count > 0 ? total / static_cast<double>(count) : 0.0;
}

PairGrid pair_sweep(const data::Dataset& dataset, std::uint64_t seed, const PairSweepOptions& options) {
  const Index d = dataset.n_features();
  if (d > options.max_features) {
    throw InvalidInput("pair sweep needs D <= " + std::to_string(options.max_features) + " but the data has " +
                       std::to_string(d) + " features; downsample it first (e.g. dwt levels)");
  }
  const auto [train, test] = standardized_split(dataset, options.test_fraction, seed);
  nn::RegressorConfig budget;
  budget.epochs = options.epochs;
  budget.batch_size = options.batch_size;
  budget.learning_rate = options.learning_rate;

  PairGrid grid;
  grid.r2 = Matrix::Constant(d, d, std::numeric_limits<double>::quiet_NaN());
  for (int i = 1; i <= d; ++i) {
    for (int j = i + 1; j <= d; ++j) {
      const int pair[2] = {i, j};
      grid.r2(i - 1, j - 1) = score(train, test, pair, seed, budget).r2;
      ++grid.n_pairs;
    }
  }
  grid.smoothness = grid_smoothness(grid.r2);
  return grid;
}

}  // namespace fsdr::eval
