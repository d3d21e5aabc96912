#pragma once

#include <array>
#include <optional>
#include <vector>

#include "shearspec/evolve.hpp"
#include "shearspec/resolvent.hpp"

namespace shearspec {

struct HypocoParams {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double beta0 = 0.0;  ///< regime threshold: enhanced iff nu <= beta0 |k|
  double beta1 = 0.0;  ///< Taylor seed, beta = beta1 / nu
  Regime regime = Regime::enhanced;
  int m = 2;
  double nu = 0.0;
  double k = 0.0;
};

/// alpha^2 = beta nu and gamma = 16 beta^{3/2} / nu^{1/2} with
///   beta = beta0 / |k|                       (enhanced, m = 2)
///   beta = beta0 nu^{1/3} / |k|^{4/3}         (enhanced, m = 1)
///   beta = beta1 / nu                         (Taylor)
/// `seed` is beta0; it doubles as beta1 unless one is given.
HypocoParams choose_parameters(double nu, double k, int m, double seed,
                               std::optional<double> beta1 = std::nullopt);

/// lambda_{nu,k} with the regime split at nu = beta0 |k|.
double hypoco_rate(double nu, double k, int m, double beta0);

struct EnergyState {
  double phi = 0.0;
  double comp_l2 = 0.0;      ///< ||g||^2 / 2
  double comp_grad = 0.0;    ///< alpha ||grad g||^2 / 2
  double comp_cross = 0.0;   ///< beta Re<i k g grad v, grad g>
  double comp_weight = 0.0;  ///< gamma k^2 ||g grad v||^2 / 2
  double lower = 0.0;        ///< (1/8)[4||g||^2 + 3 alpha ||grad g||^2 + 3 gamma k^2 ||g grad v||^2]
  double upper = 0.0;        ///< same with 5 alpha, 5 gamma
  HypocoParams params;

  bool sandwich_holds(double tol = 1e-12) const {
    const double scale = std::max(1.0, std::abs(upper));
    return lower <= phi + tol * scale && phi <= upper + tol * scale;
  }
};

/// Discrete quadratic forms entering Phi and the energy balances. Gradients
/// live on cell faces, where grad v is evaluated exactly and g is averaged.
class EnergyForms {
 public:
  EnergyForms(const GridDomain& domain, const VelocityProfile& profile);

  const GridDomain& domain() const { return domain_; }

  double l2(const ComplexVector& g) const;            ///< ||g||^2
  double grad2(const ComplexVector& g) const;         ///< ||grad g||^2
  double lap2(const ComplexVector& g) const;          ///< ||Delta g||^2
  double cross(const ComplexVector& g, double k) const;  ///< Re<i k g grad v, grad g>
  double weight2(const ComplexVector& g) const;       ///< ||g grad v||^2
  double weighted_grad2(const ComplexVector& g) const;  ///< || |grad v| grad g ||^2
  /// Re<i k grad v . grad g, Delta g>
  double advective_lap(const ComplexVector& g, double k) const;
  /// Re<i k g Delta v, Delta g>
  double curvature_lap(const ComplexVector& g, double k) const;
  /// Re<g D^2v grad v, grad g>
  double hessian_term(const ComplexVector& g) const;

  EnergyState state(const ComplexVector& g, const HypocoParams& params) const;

 private:
  GridDomain domain_;
  FaceOperators faces_;
  std::array<RealSparse, 2> node_grad_;
  RealSparse stiffness_;
  std::array<Eigen::VectorXd, 2> face_dv_;  ///< d_a v at faces of axis a
  std::array<Eigen::VectorXd, 2> face_grad_norm2_;  ///< |grad v|^2 at faces of axis a
  std::array<Eigen::VectorXd, 2> node_dv_;
  Eigen::VectorXd node_lap_v_;
  std::array<Eigen::VectorXd, 2> node_hess_dv_;  ///< (D^2 v grad v)_a
};

EnergyState energy_functional(const ScalarField& g, const HypocoParams& params,
                              const VelocityProfile& profile);

/// c_v = 5 sup |D^2 v| (operator norm), sampled on the grid.
double curvature_constant(const VelocityProfile& profile, const GridDomain& domain);

struct AuditReport {
  /// Max |lhs - rhs| of the L2, H1, cross-term and weighted balances.
  std::array<double, 4> residual{};
  /// Largest individual term of each balance, for relative statements.
  std::array<double, 4> scale{};
  int samples = 0;
};

/// Checks the four energy balances on snapshot triples with equal spacing,
/// using centred time differences. Dirichlet or periodic grids only.
AuditReport audit_energy_identities(const Trajectory& traj, const HypocoParams& params,
                                    const VelocityProfile& profile);

struct RefinementStudy {
  std::vector<AuditReport> levels;
  std::array<std::vector<double>, 4> ratios;  ///< successive residual ratios per balance
  std::array<double, 4> order{};              ///< log2 of the smallest ratio
};

struct RefinementOptions {
  int base_n = 32;        ///< points along the varying axis
  int transverse_n = 4;   ///< points along the other axis of 2-D grids
  double base_dt = 4e-4;
  int levels = 3;
  std::vector<double> centres{0.01, 0.02, 0.03, 0.04, 0.05};
};

/// Joint (dt, h) halving; smooth data compatible with the boundary condition.
RefinementStudy audit_refinement(const VelocityProfile& profile, Boundary bc, double nu, double k,
                                 const RefinementOptions& options = {});

/// Smooth initial data with all even derivatives vanishing on Dirichlet walls.
ScalarField audit_initial_condition(const GridDomain& domain);

struct PhiDecay {
  bool monotone = true;
  double rate_fit = 0.0;
  double l2_prefactor_fit = 0.0;
  double prefactor_shape = 0.0;  ///< (1 + |k| / nu)^{(m-1)/(m+2)}
  double max_increase = 0.0;     ///< largest relative step increase of Phi
};

/// Trajectory with Phi and its components recorded at every sample.
Trajectory phi_trajectory(const GridDomain& domain, const VelocityProfile& profile,
                          const HypocoParams& params, const ScalarField& g0, double t_end,
                          double dt, int stride = 1);

PhiDecay track_phi_decay(const Trajectory& traj, const HypocoParams& params,
                         const VelocityProfile& profile, double tolerance = 1e-10);

struct CalibrationOptions {
  double start = 0.5;
  double floor = 1e-4;
  std::vector<double> nus{1e-4, 1e-3, 1e-2};
  double k = 1.0;
  int n = 0;              ///< 0 uses 128 in 1-D and 128 x 4 on the torus
  double horizon = 3.0;   ///< t_end in units of 1 / lambda_{nu,k}
  double steps_per_unit = 40.0;
};

/// Halves beta0 from `start` until Phi is monotone along every trajectory.
double calibrate_beta0(const VelocityProfile& profile, Boundary bc,
                       const CalibrationOptions& options = {});

}  // namespace shearspec
