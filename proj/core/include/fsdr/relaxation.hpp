#pragma once

#include "fsdr/common.hpp"
#include "fsdr/dataset.hpp"
#include "fsdr/neuralnet.hpp"
#include "fsdr/spline.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fsdr {

/// The t learnable index coordinates. raw is unconstrained; the spline
/// coordinate is s = sigmoid(raw) in (0, 1), and the band position is
/// 1 + s (D - 1).
struct IndexParams {
  std::vector<double> raw;
  int n_features = 0;

  std::size_t t() const noexcept { return raw.size(); }
};

double sigmoid(double x) noexcept;
double logit(double p);

/// position_k = 1 + k (D - 1) / (t + 1), k = 1..t; raw_k = logit((position_k - 1) / (D - 1)).
IndexParams init_indices(int t, int n_features);

std::vector<double> map_to_s(const IndexParams& params);

/// round(1 + s_k (D - 1)), sorted and deduplicated.
FeatureSet extract_final(std::span<const double> s, int n_features);
FeatureSet extract_final(const IndexParams& params);

struct GatherResult {
  Matrix inputs;  // B x t, spline value at s_k for each batch sample
  Matrix derivs;  // B x t, d value / d s_k
};

GatherResult gather(const spline::ContinuousDataset& continuous, std::span<const double> s,
                    std::span<const Index> batch);

struct FsdrConfig {
  int epochs = 400;
  int batch_size = 64;
  double network_lr = 3e-3;
  double index_lr = 1e-2;
  /// Epochs at the start during which only the network is updated.
  int index_warmup_epochs = 50;
  std::uint64_t seed = 0;
  std::vector<int> hidden = {15, 10};
  /// Called after every epoch with (epoch, mean training loss).
  std::function<void(int, double)> on_epoch;
};

void validate(const FsdrConfig& config, Index n_samples);

/// Output of any selector. Fields a method does not produce stay empty
/// (serialized as null).
struct SelectionResult {
  std::string method;
  int t = 0;
  FeatureSet selected;                       // sorted, distinct, 1..D
  std::optional<FeatureSet> initial;         // relaxation only
  std::optional<std::vector<int>> order;     // SFS pick order
  std::optional<std::vector<double>> loss_trace;
  std::optional<std::vector<std::vector<double>>> s_trace;
  std::optional<double> initial_loss;
  double wall_time_seconds = 0.0;
  std::vector<std::string> warnings;

  int t_prime() const noexcept { return static_cast<int>(selected.size()); }
};

/// Loss of the whole relaxation pipeline on one batch and its gradient with
/// respect to the network parameters and the raw index coordinates.
struct PipelineGradient {
  double loss = 0.0;
  nn::Gradients network;
  std::vector<double> raw;
};

double pipeline_loss(const spline::ContinuousDataset& continuous, const Vector& response,
                     const nn::MlpModel& model, const IndexParams& indices,
                     std::span<const Index> batch);

PipelineGradient pipeline_gradient(const spline::ContinuousDataset& continuous,
                                   const Vector& response, const nn::MlpModel& model,
                                   const IndexParams& indices, std::span<const Index> batch);

struct TrainOutput {
  SelectionResult result;
  nn::MlpModel model;
  IndexParams indices;
};

/// Joint Adam training of the [t, hidden..., 1] regressor and the index
/// coordinates on a standardized dataset. Wall time covers spline
/// construction and the training loop.
TrainOutput train(const data::Dataset& dataset, int t, const FsdrConfig& config);

}  // namespace fsdr
