#pragma once

#include "fsdr/evaluation.hpp"
#include "fsdr/relaxation.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <string>
#include <string_view>

namespace fsdr {

/// {"method", "t", "selected", "t_prime", "initial", "order", "wall_time_s",
///  "loss_trace", "initial_loss", "warnings"}; missing fields are null.
/// The per-epoch s trace is only written when `include_s_trace` is set.
nlohmann::json to_json(const SelectionResult& result, bool include_s_trace = false);

}  // namespace fsdr

namespace fsdr::eval {

inline constexpr std::string_view report_csv_header =
    "dataset,selector,t,t_prime,time_s,r2,rmse,indices,seed";

/// 64-bit FNV-1a of `text`, as 16 lowercase hex digits.
std::string config_hash(std::string_view text);

/// Current UTC time as ISO 8601.
std::string utc_timestamp();

/// Shortest round-trip decimal form; NaN becomes an empty string.
std::string format_number(double value);

/// Indices joined with ';'.
std::string join_indices(const FeatureSet& indices);

/// One line per row in the column order of report_csv_header. Error rows
/// leave r2 and rmse empty.
void write_report_csv(const BenchmarkReport& report, std::ostream& out);

/// {"metadata": {"config_hash", "timestamp"}, "rows": [...]}.
nlohmann::json report_to_json(const BenchmarkReport& report);

/// Header "band,1,...,D"; row i starts with i and leaves cells j <= i empty.
void write_grid_csv(const PairGrid& grid, std::ostream& out);

}  // namespace fsdr::eval
