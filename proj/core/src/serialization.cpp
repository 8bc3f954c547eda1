#include "fsdr/report.hpp"

namespace fsdr {

namespace {

template <class T>
nlohmann::json optional_json(const std::optional<T>& value) {
  return value ? nlohmann::json(*value) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json to_json(const SelectionResult& result, bool include_s_trace) {
  nlohmann::json j;
  j["method"] = result.method;
  j["t"] = result.t;
  j["selected"] = result.selected;
  j["t_prime"] = result.t_prime();
  j["initial"] = optional_json(result.initial);
  j["order"] = optional_json(result.order);
  j["wall_time_s"] = result.wall_time_seconds;
  j["loss_trace"] = optional_json(result.loss_trace);
  j["initial_loss"] = optional_json(result.initial_loss);
  if (include_s_trace) j["s_trace"] = optional_json(result.s_trace);
  j["warnings"] = result.warnings;
  return j;
}

}  // namespace fsdr
