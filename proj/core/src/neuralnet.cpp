#include "fsdr/neuralnet.hpp"

#include <cmath>
#include <random>

namespace fsdr::nn {

Parameters::Parameters(std::vector<int> layer_dims) : dims_(std::move(layer_dims)) {
  if (dims_.size() < 2) throw InvalidInput("a network needs at least 2 layer dims");
  for (int d : dims_) {
    if (d < 1) throw InvalidInput("layer dims must be positive");
  }
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
    weight_offsets_.push_back(offset);
    offset += static_cast<std::size_t>(dims_[l]) * static_cast<std::size_t>(dims_[l + 1]);
    bias_offsets_.push_back(offset);
    offset += static_cast<std::size_t>(dims_[l + 1]);
  }
  values_.assign(offset, 0.0);
}

Parameters::MatrixMap Parameters::weights(std::size_t layer) {
  return {values_.data() + weight_offsets_[layer], dims_[layer], dims_[layer + 1]};
}

Parameters::ConstMatrixMap Parameters::weights(std::size_t layer) const {
  return {values_.data() + weight_offsets_[layer], dims_[layer], dims_[layer + 1]};
}

Parameters::RowMap Parameters::bias(std::size_t layer) {
  return {values_.data() + bias_offsets_[layer], dims_[layer + 1]};
}

Parameters::ConstRowMap Parameters::bias(std::size_t layer) const {
  return {values_.data() + bias_offsets_[layer], dims_[layer + 1]};
}

bool Parameters::all_finite() const noexcept {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void Parameters::set_zero() noexcept { std::fill(values_.begin(), values_.end(), 0.0); }

MlpModel init_model(std::span<const int> layer_dims, std::uint64_t seed) {
  if (layer_dims.size() < 2) throw InvalidInput("a network needs at least 2 layer dims");
  if (layer_dims.back() != 1) throw InvalidInput("the output layer must have exactly 1 unit");
  MlpModel model{Parameters(std::vector<int>(layer_dims.begin(), layer_dims.end()))};
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l < model.params.n_layers(); ++l) {
    auto w = model.params.weights(l);
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Index i = 0; i < w.rows(); ++i) {
      for (Index j = 0; j < w.cols(); ++j) w(i, j) = dist(rng);
    }
  }
  return model;
}

ForwardResult forward(const MlpModel& model, const Matrix& inputs) {
  if (inputs.cols() != model.input_dim()) {
    throw InvalidInput("input width " + std::to_string(inputs.cols()) + " does not match model input " +
                       std::to_string(model.input_dim()));
  }
  const auto& p = model.params;
  const std::size_t n_layers = p.n_layers();
  ForwardResult result;
  auto& cache = result.cache;
  cache.input = inputs;
  cache.pre_activations.reserve(n_layers);
  cache.activations.reserve(n_layers - 1);
  const Matrix* current = &cache.input;
  for (std::size_t l = 0; l < n_layers; ++l) {
    Matrix z = (*current) * p.weights(l);
    z.rowwise() += p.bias(l);
    cache.pre_activations.push_back(std::move(z));
    if (l + 1 < n_layers) {
      cache.activations.push_back(cache.pre_activations.back().array().tanh().matrix());
      current = &cache.activations.back();
    }
  }
  result.predictions = cache.pre_activations.back().col(0);
  return result;
}

Vector predict(const MlpModel& model, const Matrix& inputs) {
  if (inputs.cols() != model.input_dim()) throw InvalidInput("input width does not match model");
  const auto& p = model.params;
  Matrix current = inputs;
  for (std::size_t l = 0; l < p.n_layers(); ++l) {
    Matrix z = current * p.weights(l);
    z.rowwise() += p.bias(l);
    current = (l + 1 < p.n_layers()) ? Matrix(z.array().tanh().matrix()) : std::move(z);
  }
  return current.col(0);
}

LossResult mse_loss(const Vector& predictions, const Vector& targets) {
  if (predictions.size() != targets.size()) throw InvalidInput("prediction/target length mismatch");
  if (predictions.size() == 0) throw InvalidInput("empty batch");
  const Vector diff = predictions - targets;
  const auto b = static_cast<double>(diff.size());
  return {diff.squaredNorm() / b, (2.0 / b) * diff};
}

Gradients backward(const MlpModel& model, const ForwardCache& cache, const Vector& loss_grad) {
  const auto& p = model.params;
  const std::size_t n_layers = p.n_layers();
  if (cache.pre_activations.size() != n_layers || cache.activations.size() + 1 != n_layers ||
      cache.input.cols() != model.input_dim()) {
    throw InvalidInput("forward cache does not match the model");
  }
  if (loss_grad.size() != cache.input.rows()) throw InvalidInput("loss gradient length mismatch");

  Gradients g{Parameters(p.layer_dims()), Matrix()};
  Matrix delta = loss_grad;  // B x 1
  for (std::size_t l = n_layers; l-- > 0;) {
    const Matrix& a_prev = (l == 0) ? cache.input : cache.activations[l - 1];
    g.params.weights(l).noalias() = a_prev.transpose() * delta;
    g.params.bias(l) = delta.colwise().sum();
    Matrix upstream = delta * p.weights(l).transpose();
    if (l == 0) {
      g.inputs = std::move(upstream);
    } else {
      const Matrix& act = cache.activations[l - 1];
      delta = upstream.array() * (1.0 - act.array().square());
    }
  }
  return g;
}

AdamState::AdamState(std::size_t n_params, AdamConfig config)
    : config_(config), m_(n_params, 0.0), v_(n_params, 0.0) {}

bool adam_step(std::span<double> params, std::span<const double> grads, AdamState& state) {
  if (params.size() != grads.size() || params.size() != state.m_.size()) {
    throw InvalidInput("adam: parameter/gradient/state size mismatch");
  }
  for (double g : grads) {
    if (!std::isfinite(g)) return false;
  }
  const auto& c = state.config_;
  ++state.step_;
  const double t = static_cast<double>(state.step_);
  const double correction1 = 1.0 - std::pow(c.beta1, t);
  const double correction2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m_[i] = c.beta1 * state.m_[i] + (1.0 - c.beta1) * grads[i];
    state.v_[i] = c.beta2 * state.v_[i] + (1.0 - c.beta2) * grads[i] * grads[i];
    const double m_hat = state.m_[i] / correction1;
    const double v_hat = state.v_[i] / correction2;
    params[i] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
  }
  return true;
}

nlohmann::json to_json(const MlpModel& model) {
  const auto values = model.params.values();
  return nlohmann::json{{"layer_dims", model.layer_dims()},
                        {"activation", "tanh"},
                        {"parameters", std::vector<double>(values.begin(), values.end())}};
}

MlpModel model_from_json(const nlohmann::json& j) {
  try {
    const auto dims = j.at("layer_dims").get<std::vector<int>>();
    if (j.value("activation", std::string("tanh")) != "tanh") {
      throw InvalidInput("unsupported activation in checkpoint");
    }
    const auto values = j.at("parameters").get<std::vector<double>>();
    MlpModel model{Parameters(dims)};
    if (values.size() != model.params.size()) {
      throw InvalidInput("checkpoint holds " + std::to_string(values.size()) +
                         " parameters, layer dims need " + std::to_string(model.params.size()));
    }
    std::copy(values.begin(), values.end(), model.params.values().begin());
    if (!model.params.all_finite()) throw InvalidInput("checkpoint contains non-finite parameters");
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed model checkpoint: ") + e.what());
  }
}

}  // namespace fsdr::nn
