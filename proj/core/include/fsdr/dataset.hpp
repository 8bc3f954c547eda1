#pragma once

#include "fsdr/common.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fsdr::data {

/// N x D regression dataset whose feature axis is ordered (spectral bands).
///
/// Immutable after construction. The constructor enforces the invariants:
/// row count equals response length, D >= 2, N >= 1, all values finite.
class Dataset {
 public:
  Dataset(Matrix features, Vector response, std::string name = "dataset",
          std::vector<std::string> feature_names = {}, std::string response_name = "response");

  Index n_samples() const noexcept { return features_.rows(); }
  Index n_features() const noexcept { return features_.cols(); }

  const Matrix& features() const noexcept { return features_; }
  const Vector& response() const noexcept { return response_; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  const std::string& response_name() const noexcept { return response_name_; }

  /// 1..D; positions are always renumbered after a transform.
  std::vector<int> feature_positions() const;

  /// Subset of rows in the given order.
  Dataset rows(std::span<const Index> row_indices) const;

  /// Subset of feature columns by 1-based position. Needs at least one column,
  /// so the result bypasses the D >= 2 rule used for spectra.
  Matrix columns(std::span<const int> positions) const;

  Dataset with_features(Matrix features) const;
  Dataset with_response(Vector response) const;
  Dataset renamed(std::string name) const;

 private:
  Matrix features_;
  Vector response_;
  std::string name_;
  std::vector<std::string> feature_names_;
  std::string response_name_;
};

/// Reads a comma-separated file with a mandatory header row. Every column
/// except `response_column` becomes a feature, in file order.
Dataset load_csv(const std::filesystem::path& path, std::string_view response_column);
Dataset parse_csv(std::istream& in, std::string_view response_column, std::string name,
                  const std::string& source_label = "<stream>");

/// Writes features followed by the response column. Values are printed with
/// 17 significant digits, so a reload reproduces the doubles exactly.
void write_csv(const Dataset& dataset, std::ostream& out);
void write_csv(const Dataset& dataset, const std::filesystem::path& path);

/// R = 10^(-A) elementwise.
Dataset absorbance_to_reflectance(const Dataset& dataset);

/// Length after `levels` rounds of ceil-halving.
Index downsampled_length(Index n_features, int levels);

/// Mean-preserving Haar approximation applied `levels` times along the
/// feature axis. Odd-length stages replicate the final value before pairing.
Dataset dwt_downsample(const Dataset& dataset, int levels);

/// Uniform sample of n rows without replacement.
Dataset truncate_samples(const Dataset& dataset, Index n, std::uint64_t seed);

/// Returns (train, test). The test partition holds round(N * test_fraction)
/// rows; both partitions keep the original relative row order.
std::pair<Dataset, Dataset> train_test_split(const Dataset& dataset, double test_fraction,
                                             std::uint64_t seed);

/// Parameters of the min-max (features) / z-score (response) transform,
/// estimated on one dataset and reusable on another.
struct Standardizer {
  Vector feature_min;
  Vector feature_scale;  // max - min, or 1 for constant bands
  double response_mean = 0.0;
  double response_std = 1.0;  // population standard deviation

  Dataset apply(const Dataset& dataset) const;
  Dataset inverse(const Dataset& dataset) const;
  double inverse_response(double value) const noexcept {
    return value * response_std + response_mean;
  }
};

/// Fits a Standardizer on `dataset` and applies it.
std::pair<Dataset, Standardizer> standardize(const Dataset& dataset);

/// Planted-band synthetic generator configuration.
struct SyntheticSpec {
  Index n_samples = 1000;
  Index n_features = 512;
  std::vector<int> planted_bands;  // 1-based, distinct
  double smoothness = 8.0;         // Gaussian kernel sigma, in bands
  double noise_std = 0.05;
  std::uint64_t seed = 0;
  /// Per planted band; empty selects the default weights.
  std::vector<double> linear_weights;
  std::vector<double> quadratic_weights;
};

/// Throws InvalidInput naming the first violated constraint.
void validate(const SyntheticSpec& spec);

/// Default response weights for k planted bands: even positions in the
/// planted list act linearly (w = 1), odd positions act quadratically
/// (v = 0.7), so a purely linear selector cannot see every band.
std::pair<std::vector<double>, std::vector<double>> default_response_weights(std::size_t k);

struct SyntheticData {
  Dataset dataset;
  std::vector<int> planted_bands;
  std::vector<double> linear_weights;
  std::vector<double> quadratic_weights;
  std::uint64_t seed = 0;
};

/// Features are unit-variance Gaussian noise smoothed along the band axis;
/// y = sum_k w_k x[b_k] + sum_k v_k x[b_k]^2 + noise_std * N(0, 1).
SyntheticData generate_synthetic(const SyntheticSpec& spec);

/// {"planted_bands": [...], "seed": ..., "linear_weights": [...], "quadratic_weights": [...]}
nlohmann::json ground_truth_json(const SyntheticData& data);

}  // namespace fsdr::data
