#pragma once

#include <cmath>
#include <vector>

#include "dnls/errors.hpp"

namespace dnls {

// least-squares power-law fit value ~ C t^slope on a time window
struct RateFit {
  double t_lo = 0.0;
  double t_hi = 0.0;
  double slope = 0.0;
  double intercept = 0.0;    // log C
  double max_residual = 0.0; // in log-log coordinates
  int points = 0;
};

inline RateFit fit_rate(const std::vector<double>& t, const std::vector<double>& value,
                        double t_lo, double t_hi) {
  if (!(t_lo < t_hi)) throw DomainError("fit window must satisfy t_lo < t_hi");
  if (t.size() != value.size()) throw DomainError("fit series length mismatch");
  std::vector<double> lx, ly;
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi) continue;
    if (!(value[i] > 0.0)) throw NonPositiveValue("fit_rate sample at t = " + std::to_string(t[i]));
    lx.push_back(std::log(t[i]));
    ly.push_back(std::log(value[i]));
  }
  const int n = static_cast<int>(lx.size());
  if (n < 6) throw TooFewPoints("fit_rate needs >= 6 points in window, got " + std::to_string(n));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  RateFit fit;
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  fit.points = n;
  const double det = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / n;
  for (int i = 0; i < n; ++i) {
    fit.max_residual =
        std::max(fit.max_residual, std::abs(ly[i] - fit.slope * lx[i] - fit.intercept));
  }
  return fit;
}

}  // namespace dnls
