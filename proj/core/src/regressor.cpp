#include "fsdr/neuralnet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace fsdr::nn {

MlpModel fit_regressor(const Matrix& x, const Vector& y, const RegressorConfig& config,
                       std::uint64_t seed) {
  if (x.rows() != y.size()) throw InvalidInput("regressor: row count and target length differ");
  if (x.rows() < 1 || x.cols() < 1) throw InvalidInput("regressor: empty design matrix");
  if (config.epochs < 0) throw InvalidInput("regressor: epochs must be >= 0");
  if (config.batch_size < 1) throw InvalidInput("regressor: batch size must be positive");

  std::vector<int> dims{static_cast<int>(x.cols())};
  dims.insert(dims.end(), config.hidden.begin(), config.hidden.end());
  dims.push_back(1);

  std::mt19937_64 rng(seed);
  MlpModel model = init_model(dims, rng());
  AdamState adam(model.params.size(), AdamConfig{.learning_rate = config.learning_rate});

  const Index n = x.rows();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  Matrix batch_x;
  Vector batch_y;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (Index start = 0; start < n; start += config.batch_size) {
      const Index b = std::min<Index>(config.batch_size, n - start);
      batch_x.resize(b, x.cols());
      batch_y.resize(b);
      for (Index i = 0; i < b; ++i) {
        const Index r = order[static_cast<std::size_t>(start + i)];
        batch_x.row(i) = x.row(r);
        batch_y(i) = y(r);
      }
      auto fwd = forward(model, batch_x);
      const auto loss = mse_loss(fwd.predictions, batch_y);
      if (!std::isfinite(loss.loss)) {
        throw TrainingError("regressor: non-finite loss at epoch " + std::to_string(epoch));
      }
      const auto grads = backward(model, fwd.cache, loss.grad);
      adam_step(model.params.values(), grads.params.values(), adam);
    }
  }
  if (!model.params.all_finite()) throw TrainingError("regressor: non-finite parameters");
  return model;
}

}  // namespace fsdr::nn
