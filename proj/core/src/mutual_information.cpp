#include "fsdr/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace fsdr::baselines {

std::vector<int> equal_frequency_bins(std::span<const double> values, int bins) {
  if (bins < 2) throw InvalidInput("mutual information needs at least 2 bins");
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<int> labels(n, 0);
  int current = 0;
  for (std::size_t r = 0; r < n; ++r) {
    if (r == 0 || values[order[r]] != values[order[r - 1]]) {
      current = static_cast<int>((r * static_cast<std::size_t>(bins)) / n);
    }
    labels[order[r]] = current;
  }
  return labels;
}

double discrete_mutual_information(std::span<const int> a, std::span<const int> b, int bins_a,
                                   int bins_b) {
  if (a.size() != b.size()) throw InvalidInput("label sequences differ in length");
  if (a.empty()) return 0.0;
  std::vector<double> joint(static_cast<std::size_t>(bins_a * bins_b), 0.0);
  std::vector<double> ma(static_cast<std::size_t>(bins_a), 0.0);
  std::vector<double> mb(static_cast<std::size_t>(bins_b), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[static_cast<std::size_t>(a[i] * bins_b + b[i])] += 1.0;
    ma[static_cast<std::size_t>(a[i])] += 1.0;
    mb[static_cast<std::size_t>(b[i])] += 1.0;
  }
  const auto n = static_cast<double>(a.size());
  double mi = 0.0;
  for (int i = 0; i < bins_a; ++i) {
    for (int j = 0; j < bins_b; ++j) {
      const double c = joint[static_cast<std::size_t>(i * bins_b + j)];
      if (c == 0.0) continue;
      mi += (c / n) * std::log(c * n / (ma[static_cast<std::size_t>(i)] * mb[static_cast<std::size_t>(j)]));
    }
  }
  return std::max(mi, 0.0);
}

std::vector<double> mutual_information_scores(const data::Dataset& dataset, int bins) {
  const Matrix& x = dataset.features();
  const Vector& y = dataset.response();
  const auto y_bins = equal_frequency_bins(std::span<const double>(y.data(), static_cast<std::size_t>(y.size())), bins);
  std::vector<double> scores(static_cast<std::size_t>(x.cols()), 0.0);
  std::vector<double> column(static_cast<std::size_t>(x.rows()));
  for (Index j = 0; j < x.cols(); ++j) {
    for (Index i = 0; i < x.rows(); ++i) column[static_cast<std::size_t>(i)] = x(i, j);
    const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
    if (*lo == *hi) continue;
    const auto labels = equal_frequency_bins(column, bins);
    scores[static_cast<std::size_t>(j)] = discrete_mutual_information(labels, y_bins, bins, bins);
  }
  return scores;
}

SelectionResult mi_select(const data::Dataset& dataset, int t, const MiOptions& options) {
  if (t < 1 || t > dataset.n_features()) {
    throw InvalidInput("target size " + std::to_string(t) + " outside 1.." +
                       std::to_string(dataset.n_features()));
  }
  const auto started = std::chrono::steady_clock::now();
  const auto scores = mutual_information_scores(dataset, options.bins);
  std::vector<int> ranking(scores.size());
  std::iota(ranking.begin(), ranking.end(), 0);
  std::stable_sort(ranking.begin(), ranking.end(), [&](int a, int b) {
    return scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(b)];
  });

  SelectionResult result;
  result.method = "mi";
  result.t = t;
  for (int k = 0; k < t; ++k) result.selected.push_back(ranking[static_cast<std::size_t>(k)] + 1);
  std::sort(result.selected.begin(), result.selected.end());
  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace fsdr::baselines
