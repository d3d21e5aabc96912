#pragma once

#include <functional>

#include "shearspec/discretize.hpp"

namespace shearspec {

using Mask = Eigen::Array<bool, Eigen::Dynamic, 1>;

/// Levels refer to the raw (unshifted) profile, so lambda reads off v as written.
struct LevelSetQuery {
  VelocityProfile profile;
  double lambda = 0.0;
  double delta = 0.1;
  int m = 1;
  double delta_max = 0.25;
};

/// |E| with E = {|v - lambda| < delta^m}, or the measure of its delta-neighbourhood
/// when `thickened`. Midpoint counting in 1-D, grid counting plus an exact
/// distance transform in 2-D. resolution = 0 picks 65536 points (1-D) or 512^2.
double level_set_measure(const LevelSetQuery& q, bool thickened, int resolution = 0);

/// Nodes of `domain` in E = {|raw v - lambda| < delta^m}.
Mask level_set_mask(const GridDomain& domain, const VelocityProfile& profile, double lambda,
                    double delta, int m);

/// Squared Euclidean distance from every node to the nearest marked node
/// (infinity if none); wraps around periodic axes.
Eigen::VectorXd squared_distance_to_set(const GridDomain& domain, const Mask& set);

/// Nodes at distance < delta from the set.
Mask neighbourhood(const GridDomain& domain, const Mask& set, double delta);

Mask indicator_mask(const GridDomain& domain, const std::function<bool(const Point&)>& indicator);

struct ThinnessReport {
  double theta = 0.0;
  double kappa_target = 0.5;
  double c0 = 0.0;
  bool passed = true;
};

/// theta = sup_g int_S |g|^2 / (||g||^2 + c0 delta^2 ||grad g||^2) for the set S
/// (the delta-neighbourhood whose thinness is tested).
ThinnessReport h1_thin_constant(const Mask& set, double delta, double c0, const GridDomain& domain,
                                double kappa_target = 0.5);
ThinnessReport h1_thin_constant(const std::function<bool(const Point&)>& indicator, double delta,
                                double c0, const GridDomain& domain, double kappa_target = 0.5);

/// int_S |g|^2 by nodal quadrature.
double set_integral(const ScalarField& g, const Mask& set);

/// ||g|| ||grad g|| with face gradients.
double norm_gradient_product(const ScalarField& g);

/// 2 (r2 - r1) ||g|| ||grad g|| - int_{r1 <= |x| <= r2} |g|^2.
double annulus_inequality_residual(const ScalarField& g, double r1, double r2);

}  // namespace shearspec
