#pragma once

#include <utility>
#include <vector>

namespace aqedc {

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int points = 0;
};

// Ordinary least squares of log(value) against log(n). Values must be positive
// and at least 3 points are required.
FitResult fit_exponent(const std::vector<std::pair<double, double>>& points);

// Plain least squares y against x (used for log-linear decays).
FitResult fit_linear(const std::vector<std::pair<double, double>>& points);

}  // namespace aqedc
