#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "shearspec/grid.hpp"

namespace shearspec {

namespace detail {
struct ProfileModel;
}

/// Analytic shear profile v with exact derivatives. Values returned by eval()
/// are shifted to zero mean over the natural domain; raw() undoes the shift.
///
/// Immutable and cheap to copy (the model is shared).
class VelocityProfile {
 public:
  const std::string& name() const;
  const std::string& family() const;
  int dim() const;
  /// Declared degeneracy index m of the decay-rate law.
  int m_index() const;
  const std::vector<Point>& critical_points() const;
  bool zero_mean() const;
  double shift() const;
  double sup_norm() const;
  /// True for the constant reference profile, which has no level-set structure.
  bool degenerate() const;
  /// Only tensor-grid profiles can be discretized for operators and evolution.
  bool evolvable() const;
  /// Regime seed of the hypocoercivity schedule, calibrated once per profile.
  std::optional<double> calibrated_beta0() const;

  double eval(const Point& y) const;
  double raw(const Point& y) const;
  Eigen::Vector2d grad(const Point& y) const;
  Eigen::Matrix2d hess(const Point& y) const;
  double laplacian(const Point& y) const { return hess(y).trace(); }
  /// order-th derivative of a 1-D profile (order 0 is eval).
  double derivative(int order, double y) const;

  double operator()(const Point& y) const { return eval(y); }

  /// Default grid for the profile: unit interval, unit torus, centered square
  /// (saddle) or the square enclosing the unit disk (radial profiles).
  GridDomain natural_domain(int n, std::optional<Boundary> bc = std::nullopt) const;
  Boundary default_boundary() const;

  /// Grid samples of eval() in flattened node order.
  Eigen::VectorXd sample(const GridDomain& domain) const;

 private:
  friend VelocityProfile make_profile(std::shared_ptr<const detail::ProfileModel>);
  explicit VelocityProfile(std::shared_ptr<const detail::ProfileModel> model);
  std::shared_ptr<const detail::ProfileModel> model_;
};

/// Catalog lookup. Families: couette, poiseuille, monomial_m (m), kolmogorov,
/// saddle, radial_m (m >= 2, geometry only), constant (c).
VelocityProfile get_profile(std::string_view name, std::span<const double> params = {});

/// Parses the CLI form `name[:param[,param...]]`, e.g. `monomial_m:4`.
VelocityProfile parse_profile(std::string_view spec);

std::vector<std::string> catalog_families();

}  // namespace shearspec
