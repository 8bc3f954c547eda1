#include "fsdr/report.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <ostream>

namespace fsdr::eval {

std::string config_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int k = 15; k >= 0; --k) {
    out[static_cast<std::size_t>(k)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string join_indices(const FeatureSet& indices) {
  std::string out;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (k) out += ';';
    out += std::to_string(indices[k]);
  }
  return out;
}

namespace {

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

nlohmann::json number_or_null(double value) {
  return std::isfinite(value) ? nlohmann::json(value) : nlohmann::json(nullptr);
}

}  // namespace

void write_report_csv(const BenchmarkReport& report, std::ostream& out) {
  out << report_csv_header << '\n';
  for (const auto& row : report.rows) {
    out << csv_field(row.dataset) << ',' << row.selector << ',' << row.t << ',' << row.t_prime << ','
        << format_number(row.time_s) << ',' << format_number(row.r2) << ',' << format_number(row.rmse)
        << ',' << join_indices(row.indices) << ',' << row.seed << '\n';
  }
}

nlohmann::json report_to_json(const BenchmarkReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"dataset", row.dataset},
                    {"selector", row.selector},
                    {"t", row.t},
                    {"t_prime", row.t_prime},
                    {"time_s", row.time_s},
                    {"r2", number_or_null(row.r2)},
                    {"rmse", number_or_null(row.rmse)},
                    {"indices", row.indices},
                    {"seed", row.seed},
                    {"warnings", row.warnings},
                    {"error", row.error ? nlohmann::json(*row.error) : nlohmann::json(nullptr)}});
  }
  return {{"metadata", {{"config_hash", report.config_hash}, {"timestamp", report.timestamp}}},
          {"rows", std::move(rows)}};
}

void write_grid_csv(const PairGrid& grid, std::ostream& out) {
  const Index d = grid.r2.cols();
  out << "band";
  for (Index j = 1; j <= d; ++j) out << ',' << j;
  out << '\n';
  for (Index i = 0; i < grid.r2.rows(); ++i) {
    out << i + 1;
    for (Index j = 0; j < d; ++j) {
      out << ',';
      if (j > i) out << format_number(grid.r2(i, j));
    }
    out << '\n';
  }
}

}  // namespace fsdr::eval
