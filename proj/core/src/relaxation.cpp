#include "fsdr/relaxation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace fsdr {

double sigmoid(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double logit(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidInput("logit argument must lie in (0, 1)");
  return std::log(p / (1.0 - p));
}

IndexParams init_indices(int t, int n_features) {
  if (n_features < 2) throw InvalidInput("need at least 2 features");
  if (t < 1) throw InvalidInput("target size must be >= 1, got " + std::to_string(t));
  if (t > n_features) {
    throw InvalidInput("target size " + std::to_string(t) + " exceeds feature count " +
                       std::to_string(n_features));
  }
  IndexParams p;
  p.n_features = n_features;
  p.raw.reserve(static_cast<std::size_t>(t));
  for (int k = 1; k <= t; ++k) {
    // Normalized position (position_k - 1) / (D - 1) = k / (t + 1).
    p.raw.push_back(logit(static_cast<double>(k) / static_cast<double>(t + 1)));
  }
  return p;
}

std::vector<double> map_to_s(const IndexParams& params) {
  std::vector<double> s(params.raw.size());
  std::transform(params.raw.begin(), params.raw.end(), s.begin(), sigmoid);
  return s;
}

FeatureSet extract_final(std::span<const double> s, int n_features) {
  FeatureSet out;
  out.reserve(s.size());
  for (double v : s) {
    const auto idx = std::lround(1.0 + v * static_cast<double>(n_features - 1));
    out.push_back(static_cast<int>(std::clamp<long>(idx, 1, n_features)));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

FeatureSet extract_final(const IndexParams& params) {
  return extract_final(map_to_s(params), params.n_features);
}

GatherResult gather(const spline::ContinuousDataset& continuous, std::span<const double> s,
                    std::span<const Index> batch) {
  if (batch.empty()) throw InvalidInput("empty batch");
  const auto b = static_cast<Index>(batch.size());
  const auto t = static_cast<Index>(s.size());
  GatherResult g{Matrix(b, t), Matrix(b, t)};
  for (Index i = 0; i < b; ++i) {
    const Index row = batch[static_cast<std::size_t>(i)];
    if (row < 0 || row >= continuous.n_samples()) throw InvalidInput("batch index out of range");
    const auto& spline = continuous[row];
    for (Index k = 0; k < t; ++k) {
      spline.eval_with_deriv(s[static_cast<std::size_t>(k)], g.inputs(i, k), g.derivs(i, k));
    }
  }
  return g;
}

void validate(const FsdrConfig& config, Index n_samples) {
  if (config.epochs < 0) throw InvalidInput("epochs must be >= 0");
  if (config.batch_size < 1) throw InvalidInput("batch size must be positive");
  if (config.batch_size > n_samples) {
    throw InvalidInput("batch size " + std::to_string(config.batch_size) + " exceeds " +
                       std::to_string(n_samples) + " samples");
  }
  if (!(config.network_lr > 0.0)) throw InvalidInput("network learning rate must be positive");
  if (!(config.index_lr >= 0.0)) throw InvalidInput("index learning rate must be non-negative");
  if (config.index_warmup_epochs < 0) throw InvalidInput("index warm-up epochs must be >= 0");
  for (int h : config.hidden) {
    if (h < 1) throw InvalidInput("hidden layer sizes must be positive");
  }
}

namespace {

Vector batch_targets(const Vector& response, std::span<const Index> batch) {
  Vector y(static_cast<Index>(batch.size()));
  for (std::size_t i = 0; i < batch.size(); ++i) y(static_cast<Index>(i)) = response(batch[i]);
  return y;
}

std::string describe_s(const std::vector<double>& s) {
  std::ostringstream os;
  os << '[';
  for (std::size_t k = 0; k < s.size(); ++k) os << (k ? ", " : "") << s[k];
  os << ']';
  return os.str();
}

}  // namespace

double pipeline_loss(const spline::ContinuousDataset& continuous, const Vector& response,
                     const nn::MlpModel& model, const IndexParams& indices,
                     std::span<const Index> batch) {
  const auto s = map_to_s(indices);
  const auto g = gather(continuous, s, batch);
  return nn::mse_loss(nn::predict(model, g.inputs), batch_targets(response, batch)).loss;
}

PipelineGradient pipeline_gradient(const spline::ContinuousDataset& continuous,
                                   const Vector& response, const nn::MlpModel& model,
                                   const IndexParams& indices, std::span<const Index> batch) {
  const auto s = map_to_s(indices);
  const auto g = gather(continuous, s, batch);
  auto fwd = nn::forward(model, g.inputs);
  const auto loss = nn::mse_loss(fwd.predictions, batch_targets(response, batch));
  PipelineGradient out{loss.loss, nn::backward(model, fwd.cache, loss.grad), {}};

  // dL/ds_k = sum_i dL/dinput[i][k] * dspline_i/ds (s_k); ds/draw = s (1 - s).
  const Vector ds = (out.network.inputs.array() * g.derivs.array()).colwise().sum().transpose();
  out.raw.resize(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    out.raw[k] = ds(static_cast<Index>(k)) * s[k] * (1.0 - s[k]);
  }
  return out;
}

TrainOutput train(const data::Dataset& dataset, int t, const FsdrConfig& config) {
  validate(config, dataset.n_samples());
  const auto d = static_cast<int>(dataset.n_features());
  IndexParams indices = init_indices(t, d);

  const auto started = std::chrono::steady_clock::now();
  const auto continuous = spline::relax_dataset(dataset);
  const Vector& y = dataset.response();

  std::vector<int> dims{t};
  dims.insert(dims.end(), config.hidden.begin(), config.hidden.end());
  dims.push_back(1);
  std::mt19937_64 rng(config.seed);
  nn::MlpModel model = nn::init_model(dims, rng());

  SelectionResult result;
  result.method = "fsdr";
  result.t = t;
  result.initial = extract_final(indices);
  result.loss_trace.emplace();
  result.s_trace.emplace();

  const Index n = dataset.n_samples();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  result.initial_loss = pipeline_loss(continuous, y, model, indices, order);

  nn::AdamState network_adam(model.params.size(), nn::AdamConfig{.learning_rate = config.network_lr});
  nn::AdamState index_adam(indices.t(), nn::AdamConfig{.learning_rate = config.index_lr});

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    for (Index start = 0; start < n; start += config.batch_size) {
      const Index b = std::min<Index>(config.batch_size, n - start);
      const std::span<const Index> batch(order.data() + start, static_cast<std::size_t>(b));
      const auto grad = pipeline_gradient(continuous, y, model, indices, batch);
      if (!std::isfinite(grad.loss)) {
        throw TrainingError("fsdr: non-finite loss at epoch " + std::to_string(epoch) +
                                "; last finite s = " + describe_s(map_to_s(indices)),
                            map_to_s(indices));
      }
      loss_sum += grad.loss * static_cast<double>(b);
      const bool net_ok = nn::adam_step(model.params.values(), grad.network.params.values(), network_adam);
      // Indices stay frozen while the freshly initialized network settles.
      const bool idx_ok = epoch < config.index_warmup_epochs ||
                          nn::adam_step(indices.raw, grad.raw, index_adam);
      if (!net_ok || !idx_ok) {
        result.warnings.push_back("non-finite gradient at epoch " + std::to_string(epoch) +
                                  "; update skipped");
      }
    }
    if (!model.params.all_finite()) {
      throw TrainingError("fsdr: network parameters became non-finite at epoch " +
                              std::to_string(epoch),
                          map_to_s(indices));
    }
    result.loss_trace->push_back(loss_sum / static_cast<double>(n));
    result.s_trace->push_back(map_to_s(indices));
    if (config.on_epoch) config.on_epoch(epoch, result.loss_trace->back());
  }

  result.selected = extract_final(indices);
  if (result.t_prime() < t) {
    result.warnings.push_back("index collapse: " + std::to_string(t) + " coordinates rounded to " +
                              std::to_string(result.t_prime()) + " distinct bands");
  }
  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return {std::move(result), std::move(model), std::move(indices)};
}

}  // namespace fsdr
