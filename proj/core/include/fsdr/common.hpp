#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsdr {

using Index = Eigen::Index;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// 1-based feature indices, sorted ascending unless noted otherwise.
using FeatureSet = std::vector<int>;

/// Bad arguments, malformed input files, violated preconditions.
/// The CLI maps this to exit code 2.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Runtime failure while fitting a model (non-finite loss, non-convergence).
/// The CLI maps this to exit code 1.
class TrainingError : public std::runtime_error {
 public:
  explicit TrainingError(const std::string& what, std::vector<double> last_state = {})
      : std::runtime_error(what), last_state_(std::move(last_state)) {}

  /// Last finite state of the optimized quantity, when one is meaningful
  /// (the index coordinates for relaxation training).
  const std::vector<double>& last_state() const noexcept { return last_state_; }

 private:
  std::vector<double> last_state_;
};

}  // namespace fsdr
