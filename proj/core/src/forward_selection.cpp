#include "fsdr/baselines.hpp"
#include "fsdr/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace fsdr::baselines {

namespace {

Vector take(const Vector& v, std::span<const Index> rows) {
  Vector out(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out(static_cast<Index>(i)) = v(rows[i]);
  return out;
}

Eigen::MatrixXd take_rows(const Matrix& x, std::span<const Index> rows) {
  Eigen::MatrixXd out(static_cast<Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = x.row(rows[i]);
  return out;
}

double validation_r2(const Vector& pred, const Vector& target) {
  const double ss_tot = (target.array() - target.mean()).square().sum();
  if (!(ss_tot > 0.0)) return -std::numeric_limits<double>::infinity();
  return 1.0 - (target - pred).squaredNorm() / ss_tot;
}

/// Incremental ridge scorer over a fixed train/validation split.
class RidgeScorer {
 public:
  RidgeScorer(const data::Dataset& dataset, std::span<const Index> train_rows,
              std::span<const Index> validation_rows, double lambda)
      : lambda_(lambda) {
    Eigen::MatrixXd xt = take_rows(dataset.features(), train_rows);
    Eigen::MatrixXd xv = take_rows(dataset.features(), validation_rows);
    const Vector yt = take(dataset.response(), train_rows);
    yv_ = take(dataset.response(), validation_rows);
    const RowVector mean = xt.colwise().mean();
    xt.rowwise() -= mean;
    xv.rowwise() -= mean;
    y_mean_ = yt.mean();
    const Vector ytc = yt.array() - y_mean_;
    xt_ = std::move(xt);
    xv_ = std::move(xv);
    diag_ = xt_.colwise().squaredNorm().transpose();
    xty_ = xt_.transpose() * ytc;
  }

  Index n_features() const noexcept { return xt_.cols(); }
  bool degenerate(Index j) const noexcept { return !(diag_(j) > 0.0); }

  void add(Index j) {
    selected_.push_back(j);
    // Append row x_j^T X of the cross-product matrix.
    cross_.conservativeResize(static_cast<Index>(selected_.size()), xt_.cols());
    cross_.row(cross_.rows() - 1) = xt_.col(j).transpose() * xt_;
  }

  double score(Index j) const {
    const auto k = static_cast<Index>(selected_.size());
    Eigen::MatrixXd a(k + 1, k + 1);
    Vector rhs(k + 1);
    for (Index p = 0; p < k; ++p) {
      for (Index q = 0; q < k; ++q) a(p, q) = cross_(p, selected_[static_cast<std::size_t>(q)]);
      a(p, p) += lambda_;
      a(p, k) = a(k, p) = cross_(p, j);
      rhs(p) = xty_(selected_[static_cast<std::size_t>(p)]);
    }
    a(k, k) = diag_(j) + lambda_;
    rhs(k) = xty_(j);
    const Vector beta = a.ldlt().solve(rhs);
    Vector pred = Vector::Constant(xv_.rows(), y_mean_) + beta(k) * xv_.col(j);
    for (Index p = 0; p < k; ++p) pred += beta(p) * xv_.col(selected_[static_cast<std::size_t>(p)]);
    return validation_r2(pred, yv_);
  }

 private:
  double lambda_;
  Eigen::MatrixXd xt_;
  Eigen::MatrixXd xv_;
  Vector yv_;
  double y_mean_ = 0.0;
  Vector diag_;
  Vector xty_;
  std::vector<Index> selected_;
  Eigen::MatrixXd cross_;
};

double mlp_validation_r2(const data::Dataset& dataset, std::span<const int> features,
                         std::span<const Index> train_rows, std::span<const Index> validation_rows,
                         const nn::RegressorConfig& config, std::uint64_t seed) {
  const Matrix x = dataset.columns(features);
  const Matrix xt = take_rows(x, train_rows);
  const Matrix xv = take_rows(x, validation_rows);
  const auto model = nn::fit_regressor(xt, take(dataset.response(), train_rows), config, seed);
  return validation_r2(nn::predict(model, xv), take(dataset.response(), validation_rows));
}

}  // namespace

std::pair<std::vector<Index>, std::vector<Index>> inner_split(Index n_samples, double validation_fraction,
                                                              std::uint64_t seed) {
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw InvalidInput("validation fraction must lie in (0, 1)");
  }
  const auto n_val = static_cast<Index>(std::llround(static_cast<double>(n_samples) * validation_fraction));
  if (n_val < 2 || n_samples - n_val < 2) {
    throw InvalidInput("inner split of " + std::to_string(n_samples) + " samples is too small");
  }
  std::vector<Index> order(static_cast<std::size_t>(n_samples));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Index> validation(order.begin(), order.begin() + n_val);
  std::vector<Index> train(order.begin() + n_val, order.end());
  std::sort(validation.begin(), validation.end());
  std::sort(train.begin(), train.end());
  return {std::move(train), std::move(validation)};
}

double ridge_validation_r2(const data::Dataset& dataset, std::span<const int> features,
                           std::span<const Index> train_rows, std::span<const Index> validation_rows,
                           double lambda) {
  const Matrix x = dataset.columns(features);
  Eigen::MatrixXd xt = take_rows(x, train_rows);
  Eigen::MatrixXd xv = take_rows(x, validation_rows);
  const Vector yt = take(dataset.response(), train_rows);
  const RowVector mean = xt.colwise().mean();
  xt.rowwise() -= mean;
  xv.rowwise() -= mean;
  const double y_mean = yt.mean();
  Eigen::MatrixXd gram = xt.transpose() * xt;
  gram.diagonal().array() += lambda;
  const Vector beta = gram.ldlt().solve(xt.transpose() * (yt.array() - y_mean).matrix());
  const Vector pred = (xv * beta).array() + y_mean;
  return validation_r2(pred, take(dataset.response(), validation_rows));
}

SelectionResult sfs_select(const data::Dataset& dataset, int t, const SfsOptions& options) {
  const Index d = dataset.n_features();
  if (t < 1 || t > d) {
    throw InvalidInput("target size " + std::to_string(t) + " outside 1.." + std::to_string(d));
  }
  const auto started = std::chrono::steady_clock::now();
  const auto [train_rows, validation_rows] =
      inner_split(dataset.n_samples(), options.validation_fraction, options.seed);

  SelectionResult result;
  result.method = "sfs";
  result.t = t;
  result.order.emplace();

  std::vector<char> used(static_cast<std::size_t>(d), 0);
  std::optional<RidgeScorer> ridge;
  if (options.inner == SfsInner::ridge) {
    ridge.emplace(dataset, train_rows, validation_rows, options.ridge_lambda);
    for (Index j = 0; j < d; ++j) {
      if (ridge->degenerate(j)) {
        used[static_cast<std::size_t>(j)] = 1;
        result.warnings.push_back("sfs: skipped constant feature " + std::to_string(j + 1));
      }
    }
  }

  for (int step = 0; step < t; ++step) {
    Index best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (Index j = 0; j < d; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      double score = 0.0;
      if (ridge) {
        score = ridge->score(j);
      } else {
        std::vector<int> features(result.order->begin(), result.order->end());
        features.push_back(static_cast<int>(j + 1));
        try {
          score = mlp_validation_r2(dataset, features, train_rows, validation_rows, options.mlp,
                                    options.seed);
        } catch (const TrainingError& e) {
          used[static_cast<std::size_t>(j)] = 1;
          result.warnings.push_back("sfs: skipped feature " + std::to_string(j + 1) + ": " + e.what());
          continue;
        }
      }
      if (!std::isfinite(score)) continue;
      if (best < 0 || score > best_score) {
        best = j;
        best_score = score;
      }
    }
    if (best < 0) {
      result.warnings.push_back("sfs: no usable candidate left after " + std::to_string(step) +
                                " picks");
      break;
    }
    used[static_cast<std::size_t>(best)] = 1;
    result.order->push_back(static_cast<int>(best + 1));
    if (ridge) ridge->add(best);
  }

  result.selected = *result.order;
  std::sort(result.selected.begin(), result.selected.end());
  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace fsdr::baselines
