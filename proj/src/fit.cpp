#include "aqedc/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace aqedc {

FitResult fit_linear(const std::vector<std::pair<double, double>>& points) {
  const int n = static_cast<int>(points.size());
  if (n < 3) throw std::invalid_argument("fit: need at least 3 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (auto [x, y] : points) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit: degenerate abscissae");
  FitResult r;
  r.points = n;
  r.slope = (n * sxy - sx * sy) / denom;
  r.intercept = (sy - r.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / n;
  for (auto [x, y] : points) {
    const double pred = r.intercept + r.slope * x;
    ss_res += (y - pred) * (y - pred);
    ss_tot += (y - ybar) * (y - ybar);
  }
  r.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return r;
}

FitResult fit_exponent(const std::vector<std::pair<double, double>>& points) {
  std::vector<std::pair<double, double>> logged;
  logged.reserve(points.size());
  for (auto [n, v] : points) {
    if (v <= 0.0 || n <= 0.0) throw std::invalid_argument("fit_exponent: nonpositive input");
    logged.emplace_back(std::log(n), std::log(v));
  }
  return fit_linear(logged);
}

}  // namespace aqedc
