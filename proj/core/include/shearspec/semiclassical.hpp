#pragma once

#include <vector>

#include "shearspec/discretize.hpp"
#include "shearspec/linalg.hpp"

namespace shearspec {

struct GroundStateOptions {
  LanczosOptions lanczos{};
  double residual_target = 1e-8;
  int max_polish = 50;
};

struct GroundStateResult {
  double sigma = 0.0;
  double lambda_min = 0.0;
  double eigvec_norm_check = 0.0;  ///< ||A phi - lambda phi|| / ||phi||
  Eigen::VectorXd eigenvector;     ///< unit vector in the h^d-weighted norm
  double grad_norm2 = 0.0;         ///< ||grad phi||^2 for the unit eigenvector
  double weight_norm2 = 0.0;       ///< ||phi grad w||^2
  Index n = 0;
};

/// Ground state of A = sigma (-Delta_h) + diag(potential) by shifted inverse
/// Lanczos followed by inverse-iteration polishing.
GroundStateResult ground_state(const GridDomain& domain, const Eigen::VectorXd& potential,
                               double sigma, const GroundStateOptions& options = {});

/// Same with potential |grad w|^2 from a profile.
GroundStateResult ground_state(const GridDomain& domain, const VelocityProfile& w, double sigma,
                               const GroundStateOptions& options = {});

/// |grad w|^2 at the nodes.
Eigen::VectorXd gradient_potential(const GridDomain& domain, const VelocityProfile& w);

/// The matrix whose smallest eigenvalue ground_state() returns.
RealSparse schrodinger_matrix(const GridDomain& domain, const Eigen::VectorXd& potential,
                              double sigma);

/// Points per axis resolving the ground-state width sigma^{1/4}:
/// max(base, 64 L sigma^{-1/4}), capped at 4096.
int semiclassical_resolution(double sigma, double length, int base);

struct SemiclassicalFit {
  double exponent = 0.0;
  double c_sp_fit = 0.0;
  std::vector<double> sigmas;
  std::vector<GroundStateResult> states;
};

/// log-log slope of lambda_min(sigma) and max of sigma^{(m-1)/m} / lambda_min.
/// 1-D grids are refined per sigma by semiclassical_resolution().
SemiclassicalFit fit_semiclassical_exponent(const GridDomain& domain, const VelocityProfile& w,
                                            const std::vector<double>& sigma_grid,
                                            const GroundStateOptions& options = {});

/// Default sigma grid: 9 log-spaced values from 1e-5 to 1e-1.
std::vector<double> default_sigma_grid();

/// ||phi|| / (||grad phi||^{l/(l+1)} || |y|^l phi ||^{1/(l+1)}) for a grid field
/// vanishing outside the ball, with |y| measured from the origin.
double radial_inequality_ratio(const GridDomain& domain, const Eigen::VectorXd& phi, int ell);

}  // namespace shearspec
