#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "shearspec/grid.hpp"

namespace shearspec::testing {

/// Random low-mode field. Periodic axes get Fourier modes; bounded axes get a
/// sine series, so the field vanishes on the walls of the bounding box.
inline ScalarField random_smooth_field(const GridDomain& domain, std::mt19937_64& rng,
                                       int modes = 4) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const int d = domain.dim();
  const int m1 = d == 2 ? modes : 1;
  std::vector<Complex> coef(static_cast<std::size_t>(modes * m1));
  for (int p = 0; p < modes; ++p) {
    for (int q = 0; q < m1; ++q) {
      coef[static_cast<std::size_t>(p * m1 + q)] =
          Complex(normal(rng), normal(rng)) / double((p + 1) * (q + 1));
    }
  }
  const auto basis = [&](int axis, int p, double y) -> Complex {
    const double s = (y - domain.origin(axis)) / domain.length(axis);
    if (domain.periodic()) {
      const int freq = (p % 2 == 0 ? 1 : -1) * (p / 2 + (p % 2));
      return std::polar(1.0, 2.0 * std::numbers::pi * freq * s);
    }
    return std::sin((p + 1) * std::numbers::pi * s);
  };
  ScalarField f = ScalarField::zeros(domain);
  for (Index j = 0; j < domain.size(); ++j) {
    const Point y = domain.node(j);
    Complex acc = 0.0;
    for (int p = 0; p < modes; ++p) {
      for (int q = 0; q < m1; ++q) {
        Complex term = coef[static_cast<std::size_t>(p * m1 + q)] * basis(0, p, y[0]);
        if (d == 2) term *= basis(1, q, y[1]);
        acc += term;
      }
    }
    f.values[j] = acc;
  }
  return f;
}

inline std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(a * std::pow(b / a, n == 1 ? 0.0 : i / (n - 1.0)));
  }
  return out;
}

}  // namespace shearspec::testing
