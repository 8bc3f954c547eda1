#include "fsdr/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace fsdr::data {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string_view unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

std::string location(const std::string& source, std::size_t line_no, std::size_t row,
                     std::string_view column) {
  std::ostringstream os;
  os << source << ": line " << line_no << " (row " << row << "), column '" << column << "'";
  return os.str();
}

std::vector<std::string> default_names(Index d) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(d));
  for (Index j = 1; j <= d; ++j) names.push_back("b" + std::to_string(j));
  return names;
}

}  // namespace

Dataset::Dataset(Matrix features, Vector response, std::string name,
                 std::vector<std::string> feature_names, std::string response_name)
    : features_(std::move(features)),
      response_(std::move(response)),
      name_(std::move(name)),
      feature_names_(std::move(feature_names)),
      response_name_(std::move(response_name)) {
  if (features_.rows() != response_.size()) {
    throw InvalidInput("dataset '" + name_ + "': " + std::to_string(features_.rows()) +
                       " feature rows but " + std::to_string(response_.size()) +
                       " response values");
  }
  if (features_.rows() < 1) throw InvalidInput("dataset '" + name_ + "': no samples");
  if (features_.cols() < 2) {
    throw InvalidInput("dataset '" + name_ + "': need at least 2 features, got " +
                       std::to_string(features_.cols()));
  }
  if (!features_.allFinite()) throw InvalidInput("dataset '" + name_ + "': non-finite feature value");
  if (!response_.allFinite()) throw InvalidInput("dataset '" + name_ + "': non-finite response value");
  if (feature_names_.empty()) {
    feature_names_ = default_names(features_.cols());
  } else if (static_cast<Index>(feature_names_.size()) != features_.cols()) {
    throw InvalidInput("dataset '" + name_ + "': feature name count does not match columns");
  }
}

std::vector<int> Dataset::feature_positions() const {
  std::vector<int> positions(static_cast<std::size_t>(n_features()));
  std::iota(positions.begin(), positions.end(), 1);
  return positions;
}

Dataset Dataset::rows(std::span<const Index> row_indices) const {
  Matrix x(static_cast<Index>(row_indices.size()), n_features());
  Vector y(static_cast<Index>(row_indices.size()));
  for (std::size_t i = 0; i < row_indices.size(); ++i) {
    const Index r = row_indices[i];
    if (r < 0 || r >= n_samples()) throw InvalidInput("row index out of range");
    x.row(static_cast<Index>(i)) = features_.row(r);
    y(static_cast<Index>(i)) = response_(r);
  }
  return {std::move(x), std::move(y), name_, feature_names_, response_name_};
}

Matrix Dataset::columns(std::span<const int> positions) const {
  if (positions.empty()) throw InvalidInput("empty feature selection");
  Matrix x(n_samples(), static_cast<Index>(positions.size()));
  for (std::size_t k = 0; k < positions.size(); ++k) {
    const int p = positions[k];
    if (p < 1 || p > n_features()) {
      throw InvalidInput("feature index " + std::to_string(p) + " outside 1.." +
                         std::to_string(n_features()));
    }
    x.col(static_cast<Index>(k)) = features_.col(p - 1);
  }
  return x;
}

Dataset Dataset::with_features(Matrix features) const {
  const bool same_width = features.cols() == n_features();
  return {std::move(features), response_, name_,
          same_width ? feature_names_ : std::vector<std::string>{}, response_name_};
}

Dataset Dataset::with_response(Vector response) const {
  return {features_, std::move(response), name_, feature_names_, response_name_};
}

Dataset Dataset::renamed(std::string name) const {
  return {features_, response_, std::move(name), feature_names_, response_name_};
}

Dataset parse_csv(std::istream& in, std::string_view response_column, std::string name,
                  const std::string& source_label) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    for (auto cell : split_commas(line)) header.emplace_back(unquote(cell));
    break;
  }
  if (header.empty()) throw InvalidInput(source_label + ": no samples (empty file)");

  const auto response_it = std::find(header.begin(), header.end(), response_column);
  if (response_it == header.end()) {
    throw InvalidInput(source_label + ": missing response column '" + std::string(response_column) +
                       "'");
  }
  const auto response_col = static_cast<std::size_t>(response_it - header.begin());

  std::vector<std::string> feature_names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != response_col) feature_names.push_back(header[c]);
  }

  std::vector<double> values;
  std::vector<double> response;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_commas(line);
    const std::size_t row = response.size() + 1;
    if (cells.size() != header.size()) {
      throw InvalidInput(source_label + ": line " + std::to_string(line_no) + " (row " +
                         std::to_string(row) + ") has " +
                         std::to_string(cells.size()) + " cells, header has " +
                         std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto cell = unquote(cells[c]);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || ptr != cell.data() + cell.size() || cell.empty()) {
        throw InvalidInput(location(source_label, line_no, row, header[c]) + ": non-numeric value '" +
                           std::string(cell) + "'");
      }
      if (!std::isfinite(v)) {
        throw InvalidInput(location(source_label, line_no, row, header[c]) + ": non-finite value '" +
                           std::string(cell) + "'");
      }
      if (c == response_col) {
        response.push_back(v);
      } else {
        values.push_back(v);
      }
    }
  }
  if (response.empty()) throw InvalidInput(source_label + ": no samples");

  const auto n = static_cast<Index>(response.size());
  const auto d = static_cast<Index>(feature_names.size());
  Matrix x = Eigen::Map<const Matrix>(values.data(), n, d);
  Vector y = Eigen::Map<const Vector>(response.data(), n);
  return {std::move(x), std::move(y), std::move(name), std::move(feature_names),
          std::string(response_column)};
}

Dataset load_csv(const std::filesystem::path& path, std::string_view response_column) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open data file '" + path.string() + "'");
  return parse_csv(in, response_column, path.stem().string(), path.string());
}

void write_csv(const Dataset& dataset, std::ostream& out) {
  const auto& names = dataset.feature_names();
  for (const auto& n : names) out << n << ',';
  out << dataset.response_name() << '\n';
  out << std::setprecision(17);
  const Matrix& x = dataset.features();
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) out << x(i, j) << ',';
    out << dataset.response()(i) << '\n';
  }
}

void write_csv(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
  write_csv(dataset, out);
  if (!out) throw InvalidInput("write failed for '" + path.string() + "'");
}

Dataset absorbance_to_reflectance(const Dataset& dataset) {
  Matrix r = dataset.features().unaryExpr([](double a) { return std::pow(10.0, -a); });
  return dataset.with_features(std::move(r));
}

Index downsampled_length(Index n_features, int levels) {
  Index d = n_features;
  for (int l = 0; l < levels; ++l) d = (d + 1) / 2;
  return d;
}

Dataset dwt_downsample(const Dataset& dataset, int levels) {
  if (levels < 1) throw InvalidInput("dwt levels must be >= 1");
  const Index target = downsampled_length(dataset.n_features(), levels);
  if (target < 2) {
    throw InvalidInput("resulting dimension too small: " + std::to_string(dataset.n_features()) +
                       " features with " + std::to_string(levels) + " levels leaves " +
                       std::to_string(target));
  }
  Matrix current = dataset.features();
  for (int l = 0; l < levels; ++l) {
    const Index d = current.cols();
    const Index half = (d + 1) / 2;
    Matrix next(current.rows(), half);
    for (Index j = 0; j < half; ++j) {
      const Index a = 2 * j;
      const Index b = std::min(a + 1, d - 1);
      next.col(j) = 0.5 * (current.col(a) + current.col(b));
    }
    current = std::move(next);
  }
  return dataset.with_features(std::move(current));
}

Dataset truncate_samples(const Dataset& dataset, Index n, std::uint64_t seed) {
  if (n < 1 || n > dataset.n_samples()) {
    throw InvalidInput("cannot sample " + std::to_string(n) + " rows from " +
                       std::to_string(dataset.n_samples()));
  }
  std::vector<Index> order(static_cast<std::size_t>(dataset.n_samples()));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(static_cast<std::size_t>(n));
  std::sort(order.begin(), order.end());
  return dataset.rows(order);
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& dataset, double test_fraction,
                                             std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw InvalidInput("test fraction must lie in (0, 1)");
  }
  const Index n = dataset.n_samples();
  const auto n_test = static_cast<Index>(std::llround(static_cast<double>(n) * test_fraction));
  if (n_test < 1 || n_test >= n) {
    throw InvalidInput("split of " + std::to_string(n) + " samples leaves an empty partition");
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Index> test(order.begin(), order.begin() + n_test);
  std::vector<Index> train(order.begin() + n_test, order.end());
  std::sort(test.begin(), test.end());
  std::sort(train.begin(), train.end());
  return {dataset.rows(train).renamed(dataset.name()), dataset.rows(test).renamed(dataset.name())};
}

Dataset Standardizer::apply(const Dataset& dataset) const {
  if (dataset.n_features() != feature_min.size()) {
    throw InvalidInput("standardizer fitted on a different feature count");
  }
  Matrix x = (dataset.features().rowwise() - feature_min.transpose()).array().rowwise() /
             feature_scale.transpose().array();
  Vector y = (dataset.response().array() - response_mean) / response_std;
  return {std::move(x), std::move(y), dataset.name(), dataset.feature_names(),
          dataset.response_name()};
}

Dataset Standardizer::inverse(const Dataset& dataset) const {
  if (dataset.n_features() != feature_min.size()) {
    throw InvalidInput("standardizer fitted on a different feature count");
  }
  Matrix x = (dataset.features().array().rowwise() * feature_scale.transpose().array()).matrix();
  x.rowwise() += feature_min.transpose();
  Vector y = dataset.response().array() * response_std + response_mean;
  return {std::move(x), std::move(y), dataset.name(), dataset.feature_names(),
          dataset.response_name()};
}

std::pair<Dataset, Standardizer> standardize(const Dataset& dataset) {
  if (dataset.n_samples() < 2) throw InvalidInput("standardize needs at least 2 samples");
  Standardizer s;
  const Matrix& x = dataset.features();
  s.feature_min = x.colwise().minCoeff().transpose();
  s.feature_scale = x.colwise().maxCoeff().transpose() - s.feature_min;
  for (Index j = 0; j < s.feature_scale.size(); ++j) {
    if (s.feature_scale(j) == 0.0) s.feature_scale(j) = 1.0;
  }
  const Vector& y = dataset.response();
  s.response_mean = y.mean();
  s.response_std = std::sqrt((y.array() - s.response_mean).square().mean());
  if (!(s.response_std > 0.0)) throw InvalidInput("zero-variance response cannot be standardized");
  return {s.apply(dataset), s};
}

}  // namespace fsdr::data
