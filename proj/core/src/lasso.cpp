#include "fsdr/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

namespace fsdr::baselines {

namespace {

double soft_threshold(double z, double gamma) noexcept {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

}  // namespace

double lasso_objective(const Matrix& x, const Vector& y, const Vector& beta, double intercept,
                       double lambda) {
  const Vector r = y - x * beta - Vector::Constant(y.size(), intercept);
  return r.squaredNorm() / (2.0 * static_cast<double>(y.size())) + lambda * beta.lpNorm<1>();
}

double lambda_max(const Matrix& x, const Vector& y) {
  const Eigen::MatrixXd xc = x.rowwise() - x.colwise().mean();
  const Vector yc = y.array() - y.mean();
  return (xc.transpose() * yc).cwiseAbs().maxCoeff() / static_cast<double>(y.size());
}

std::vector<double> default_lambda_path(const Matrix& x, const Vector& y, int n, double min_ratio) {
  if (n < 1) throw InvalidInput("lambda path needs at least one value");
  if (!(min_ratio > 0.0 && min_ratio <= 1.0)) throw InvalidInput("lambda min ratio must lie in (0, 1]");
  const double top = lambda_max(x, y);
  std::vector<double> path(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double frac = n == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(n - 1);
    path[static_cast<std::size_t>(k)] = top * std::pow(min_ratio, frac);
  }
  return path;
}

LassoFit lasso_coordinate_descent(const Matrix& x, const Vector& y, double lambda,
                                  const LassoOptions& options, const Vector* warm_start) {
  if (x.rows() != y.size() || x.rows() < 1) throw InvalidInput("lasso: design/response mismatch");
  if (!(lambda >= 0.0)) throw InvalidInput("lasso: lambda must be non-negative");
  const Index n = x.rows();
  const Index d = x.cols();
  const auto nd = static_cast<double>(n);

  // Column-major copy: coordinate descent walks columns.
  const RowVector x_mean = x.colwise().mean();
  const Eigen::MatrixXd xc = x.rowwise() - x_mean;
  const double y_mean = y.mean();
  const Vector z = xc.colwise().squaredNorm().transpose() / nd;

  LassoFit fit;
  fit.lambda = lambda;
  fit.coefficients = warm_start ? *warm_start : Vector::Zero(d);
  if (fit.coefficients.size() != d) throw InvalidInput("lasso: warm start has wrong length");
  Vector& beta = fit.coefficients;
  Vector r = (y.array() - y_mean).matrix() - xc * beta;

  auto objective = [&] { return r.squaredNorm() / (2.0 * nd) + lambda * beta.lpNorm<1>(); };

  auto sweep = [&](const std::vector<Index>& coords) {
    double max_change = 0.0;
    for (Index j : coords) {
      if (z(j) <= 0.0) {
        beta(j) = 0.0;
        continue;
      }
      const double old = beta(j);
      const double rho = xc.col(j).dot(r) / nd + z(j) * old;
      const double updated = soft_threshold(rho, lambda) / z(j);
      if (updated != old) {
        r.noalias() -= (updated - old) * xc.col(j);
        beta(j) = updated;
        max_change = std::max(max_change, std::abs(updated - old) * std::sqrt(z(j)));
      }
    }
    fit.objective_trace.push_back(objective());
    ++fit.sweeps;
    return max_change;
  };

  std::vector<Index> all(static_cast<std::size_t>(d));
  std::iota(all.begin(), all.end(), Index{0});
  double change = 0.0;
  while (fit.sweeps < options.max_sweeps) {
    change = sweep(all);
    if (change < options.tolerance) break;
    // Converge on the active set, then re-check every coordinate.
    std::vector<Index> active;
    for (Index j = 0; j < d; ++j) {
      if (beta(j) != 0.0) active.push_back(j);
    }
    while (fit.sweeps < options.max_sweeps) {
      change = sweep(active);
      if (change < options.tolerance) break;
    }
  }
  if (change >= options.tolerance) {
    fit.converged = false;
  }
  if (!fit.converged && options.require_convergence) {
    std::ostringstream os;
    os << "lasso: no convergence at lambda=" << lambda << " after " << fit.sweeps
       << " sweeps (last max change " << change << ")";
    throw TrainingError(os.str());
  }
  fit.intercept = y_mean - x_mean.dot(beta);
  return fit;
}

SelectionResult lasso_select(const data::Dataset& dataset, int t, const LassoOptions& options) {
  if (t < 1 || t > dataset.n_features()) {
    throw InvalidInput("target size " + std::to_string(t) + " outside 1.." +
                       std::to_string(dataset.n_features()));
  }
  const auto started = std::chrono::steady_clock::now();

  // z-score the columns so |coefficient| is comparable across bands.
  Matrix x = dataset.features();
  const RowVector mean = x.colwise().mean();
  x.rowwise() -= mean;
  for (Index j = 0; j < x.cols(); ++j) {
    const double sd = std::sqrt(x.col(j).squaredNorm() / static_cast<double>(x.rows()));
    if (sd > 0.0) x.col(j) /= sd;
  }
  const Vector& y = dataset.response();

  std::vector<double> path = options.lambda_path;
  if (path.empty()) {
    path = default_lambda_path(x, y, options.n_lambda, options.lambda_min_ratio);
  } else {
    for (std::size_t k = 0; k < path.size(); ++k) {
      if (!(path[k] > 0.0) || (k > 0 && path[k] > path[k - 1])) {
        throw InvalidInput("lambda path must be positive and descending");
      }
    }
  }

  SelectionResult result;
  result.method = "lasso";
  result.t = t;

  // Strongly correlated neighbouring bands make coordinate descent crawl;
  // the support is what matters here, so an unconverged fit is kept and
  // reported instead of aborting the selection.
  LassoOptions inner = options;
  inner.require_convergence = false;
  Vector beta = Vector::Zero(x.cols());
  Index nonzero = 0;
  for (double lambda : path) {
    auto fit = lasso_coordinate_descent(x, y, lambda, inner, &beta);
    if (!fit.converged) {
      std::ostringstream os;
      os << "lasso: coordinate descent hit the " << options.max_sweeps << "-sweep budget at lambda=" << lambda
         << "; using the last iterate";
      result.warnings.push_back(os.str());
    }
    beta = std::move(fit.coefficients);
    nonzero = (beta.array() != 0.0).count();
    if (nonzero >= t) break;
  }

  std::vector<int> ranking;
  for (Index j = 0; j < beta.size(); ++j) {
    if (beta(j) != 0.0) ranking.push_back(static_cast<int>(j));
  }
  std::stable_sort(ranking.begin(), ranking.end(),
                   [&](int a, int b) { return std::abs(beta(a)) > std::abs(beta(b)); });
  if (static_cast<int>(ranking.size()) > t) ranking.resize(static_cast<std::size_t>(t));
  for (int j : ranking) result.selected.push_back(j + 1);
  std::sort(result.selected.begin(), result.selected.end());
  if (result.t_prime() < t) {
    result.warnings.push_back("lasso: only " + std::to_string(result.t_prime()) +
                              " non-zero coefficients at the smallest lambda, fewer than t = " +
                              std::to_string(t));
  }
  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace fsdr::baselines
