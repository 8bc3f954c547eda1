#pragma once

#include "fsdr/common.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fsdr::nn {

enum class Activation { tanh };

/// Flat storage for the weights and biases of a fully connected stack with
/// layer sizes dims[0] -> dims[1] -> ... -> dims.back(). Layer l holds a
/// dims[l] x dims[l+1] weight matrix (row-major) followed by its bias row.
class Parameters {
 public:
  using MatrixMap = Eigen::Map<Matrix>;
  using ConstMatrixMap = Eigen::Map<const Matrix>;
  using RowMap = Eigen::Map<RowVector>;
  using ConstRowMap = Eigen::Map<const RowVector>;

  Parameters() = default;
  explicit Parameters(std::vector<int> layer_dims);  // zero-initialized

  const std::vector<int>& layer_dims() const noexcept { return dims_; }
  std::size_t n_layers() const noexcept { return dims_.size() - 1; }
  std::size_t size() const noexcept { return values_.size(); }

  MatrixMap weights(std::size_t layer);
  ConstMatrixMap weights(std::size_t layer) const;
  RowMap bias(std::size_t layer);
  ConstRowMap bias(std::size_t layer) const;

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  bool all_finite() const noexcept;
  void set_zero() noexcept;

 private:
  std::vector<int> dims_;
  std::vector<double> values_;
  std::vector<std::size_t> weight_offsets_;
  std::vector<std::size_t> bias_offsets_;
};

/// Regressor with tanh hidden layers and a linear scalar output head.
struct MlpModel {
  Parameters params;
  Activation activation = Activation::tanh;

  const std::vector<int>& layer_dims() const noexcept { return params.layer_dims(); }
  int input_dim() const noexcept { return params.layer_dims().front(); }
};

/// Xavier-uniform weights, zero biases. Needs >= 2 positive dims, last = 1.
MlpModel init_model(std::span<const int> layer_dims, std::uint64_t seed);

struct ForwardCache {
  Matrix input;
  std::vector<Matrix> pre_activations;  // one per layer
  std::vector<Matrix> activations;      // one per hidden layer
};

struct ForwardResult {
  Vector predictions;
  ForwardCache cache;
};

ForwardResult forward(const MlpModel& model, const Matrix& inputs);

/// Forward pass without keeping the cache.
Vector predict(const MlpModel& model, const Matrix& inputs);

struct LossResult {
  double loss = 0.0;
  Vector grad;  // dLoss / dprediction
};

/// loss = mean((pred - target)^2), grad = 2 (pred - target) / B.
LossResult mse_loss(const Vector& predictions, const Vector& targets);

struct Gradients {
  Parameters params;  // same layout as the model
  Matrix inputs;      // dLoss / dinput, B x input_dim
};

Gradients backward(const MlpModel& model, const ForwardCache& cache, const Vector& loss_grad);

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class AdamState {
 public:
  AdamState(std::size_t n_params, AdamConfig config = {});

  const AdamConfig& config() const noexcept { return config_; }
  void set_learning_rate(double lr) noexcept { config_.learning_rate = lr; }
  std::int64_t step() const noexcept { return step_; }
  const std::vector<double>& first_moment() const noexcept { return m_; }
  const std::vector<double>& second_moment() const noexcept { return v_; }

  friend bool adam_step(std::span<double>, std::span<const double>, AdamState&);

 private:
  AdamConfig config_;
  std::int64_t step_ = 0;
  std::vector<double> m_;
  std::vector<double> v_;
};

/// One bias-corrected Adam update. Returns false and leaves parameters and
/// state untouched when any gradient entry is non-finite. Shape mismatch
/// throws InvalidInput.
bool adam_step(std::span<double> params, std::span<const double> grads, AdamState& state);

/// Checkpoint schema: {"layer_dims": [...], "activation": "tanh", "parameters": [...]}.
nlohmann::json to_json(const MlpModel& model);
MlpModel model_from_json(const nlohmann::json& j);

/// Minibatch Adam training of a fresh regressor on (x, y).
struct RegressorConfig {
  std::vector<int> hidden = {15, 10};
  int epochs = 300;
  int batch_size = 64;
  double learning_rate = 1e-3;
};

MlpModel fit_regressor(const Matrix& x, const Vector& y, const RegressorConfig& config,
                       std::uint64_t seed);

}  // namespace fsdr::nn
