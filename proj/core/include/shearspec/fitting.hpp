#pragma once

#include <span>

namespace shearspec {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
};

/// Ordinary least squares y ~ intercept + slope x. Needs two distinct x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Least squares log y ~ log c + p log x; returns p in slope, log c in intercept.
LineFit fit_power_law(std::span<const double> x, std::span<const double> y);

}  // namespace shearspec
