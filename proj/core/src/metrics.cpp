#include "fsdr/metrics.hpp"

#include <cmath>

namespace fsdr::eval {

double r_squared(const Vector& predictions, const Vector& targets) {
  if (predictions.size() != targets.size()) throw InvalidInput("r2: length mismatch");
  if (targets.size() == 0) throw InvalidInput("r2: empty input");
  const double ss_tot = (targets.array() - targets.mean()).square().sum();
  if (!(ss_tot > 0.0)) throw InvalidInput("r2: targets are constant");
  const double ss_res = (targets - predictions).squaredNorm();
  return 1.0 - ss_res / ss_tot;
}

double rmse(const Vector& predictions, const Vector& targets) {
  if (predictions.size() != targets.size()) throw InvalidInput("rmse: length mismatch");
  if (targets.size() == 0) throw InvalidInput("rmse: empty input");
  return std::sqrt((predictions - targets).squaredNorm() / static_cast<double>(targets.size()));
}

}  // namespace fsdr::eval
