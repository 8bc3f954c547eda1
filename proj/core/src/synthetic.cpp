#include "fsdr/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace fsdr::data {

void validate(const SyntheticSpec& spec) {
  if (spec.n_samples < 1) throw InvalidInput("n_samples must be positive");
  if (spec.n_features < 2) throw InvalidInput("n_features must be at least 2");
  if (spec.planted_bands.empty()) throw InvalidInput("at least one planted band is required");
  std::set<int> seen;
  for (int b : spec.planted_bands) {
    if (b < 1 || b > spec.n_features) {
      throw InvalidInput("planted band " + std::to_string(b) + " outside 1.." +
                         std::to_string(spec.n_features));
    }
    if (!seen.insert(b).second) {
      throw InvalidInput("planted band " + std::to_string(b) + " listed twice");
    }
  }
  if (!(spec.smoothness > 0.0) || !std::isfinite(spec.smoothness)) {
    throw InvalidInput("smoothness must be a positive real");
  }
  if (!(spec.noise_std >= 0.0) || !std::isfinite(spec.noise_std)) {
    throw InvalidInput("noise_std must be non-negative");
  }
  const auto k = spec.planted_bands.size();
  if (!spec.linear_weights.empty() && spec.linear_weights.size() != k) {
    throw InvalidInput("linear_weights must have one entry per planted band");
  }
  if (!spec.quadratic_weights.empty() && spec.quadratic_weights.size() != k) {
    throw InvalidInput("quadratic_weights must have one entry per planted band");
  }
}

std::pair<std::vector<double>, std::vector<double>> default_response_weights(std::size_t k) {
  std::vector<double> linear(k, 0.0);
  std::vector<double> quadratic(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    if (i % 2 == 0) {
      linear[i] = 1.0;
    } else {
      quadratic[i] = 0.7;
    }
  }
  return {linear, quadratic};
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  validate(spec);
  const Index n = spec.n_samples;
  const Index d = spec.n_features;
  const double sigma = spec.smoothness;
  const auto pad = static_cast<Index>(std::ceil(4.0 * sigma));

  // Unit sum of squares keeps every smoothed band at unit variance.
  Vector kernel(2 * pad + 1);
  for (Index m = -pad; m <= pad; ++m) {
    kernel(m + pad) = std::exp(-0.5 * static_cast<double>(m * m) / (sigma * sigma));
  }
  kernel /= kernel.norm();

  auto [linear, quadratic] = default_response_weights(spec.planted_bands.size());
  if (!spec.linear_weights.empty()) linear = spec.linear_weights;
  if (!spec.quadratic_weights.empty()) quadratic = spec.quadratic_weights;

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Matrix x(n, d);
  Vector latent(d + 2 * pad);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < latent.size(); ++j) latent(j) = normal(rng);
    for (Index j = 0; j < d; ++j) x(i, j) = latent.segment(j, kernel.size()).dot(kernel);
  }

  Vector y = Vector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    double v = 0.0;
    for (std::size_t k = 0; k < spec.planted_bands.size(); ++k) {
      const double xb = x(i, spec.planted_bands[k] - 1);
      v += linear[k] * xb + quadratic[k] * xb * xb;
    }
    y(i) = v;
  }
  if (spec.noise_std > 0.0) {
    for (Index i = 0; i < n; ++i) y(i) += spec.noise_std * normal(rng);
  }

  Dataset dataset(std::move(x), std::move(y), "synthetic", {}, "soc");
  return {std::move(dataset), spec.planted_bands, std::move(linear), std::move(quadratic),
          spec.seed};
}

nlohmann::json ground_truth_json(const SyntheticData& data) {
  return nlohmann::json{{"planted_bands", data.planted_bands},
                        {"seed", data.seed},
                        {"linear_weights", data.linear_weights},
                        {"quadratic_weights", data.quadratic_weights}};
}

}  // namespace fsdr::data
