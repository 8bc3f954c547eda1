#pragma once

#include "fsdr/common.hpp"

namespace fsdr::eval {

/// 1 - SS_res / SS_tot. Throws InvalidInput for constant or empty targets.
double r_squared(const Vector& predictions, const Vector& targets);

/// sqrt(mean((pred - target)^2)).
double rmse(const Vector& predictions, const Vector& targets);

}  // namespace fsdr::eval
