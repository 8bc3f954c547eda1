#include "fsdr/baselines.hpp"

#include <string>

namespace fsdr::baselines {

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::mi: return "mi";
    case Method::sfs: return "sfs";
    case Method::lasso: return "lasso";
    case Method::fsdr: return "fsdr";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "mi") return Method::mi;
  if (name == "sfs") return Method::sfs;
  if (name == "lasso") return Method::lasso;
  if (name == "fsdr") return Method::fsdr;
  throw InvalidInput("unknown method '" + std::string(name) + "' (expected fsdr, mi, sfs or lasso)");
}

SelectionResult run_selector(const data::Dataset& dataset, const SelectorSpec& spec,
                             std::uint64_t seed) {
  switch (spec.method) {
    case Method::mi:
      return mi_select(dataset, spec.t, spec.mi);
    case Method::sfs: {
      SfsOptions options = spec.sfs;
      options.seed = seed;
      return sfs_select(dataset, spec.t, options);
    }
    case Method::lasso:
      return lasso_select(dataset, spec.t, spec.lasso);
    case Method::fsdr: {
      FsdrConfig config = spec.fsdr;
      config.seed = seed;
      return train(dataset, spec.t, config).result;
    }
  }
  throw InvalidInput("unknown method");
}

}  // namespace fsdr::baselines
