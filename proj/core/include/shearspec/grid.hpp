#pragma once

#include <array>
#include <complex>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace shearspec {

using Point = std::array<double, 2>;
using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

enum class DomainKind { interval, torus1d, torus2d, rectangle };
enum class Boundary { neumann, dirichlet, periodic };

std::string_view to_string(Boundary bc);
std::string_view to_string(DomainKind kind);
Boundary parse_boundary(std::string_view text);

/// Cell-centered tensor grid on the cross-section. Node j of axis a sits at
/// origin[a] + (j + 1/2) h[a]; flattened index is i0 + n0 * i1.
class GridDomain {
 public:
  static GridDomain interval(int n, Boundary bc, double lo = 0.0, double hi = 1.0);
  static GridDomain torus1d(int n, double length = 1.0, double lo = 0.0);
  static GridDomain torus2d(int n0, int n1, double length0 = 1.0, double length1 = 1.0);
  static GridDomain rectangle(int n0, int n1, Boundary bc, Point lo, Point hi);

  DomainKind kind() const { return kind_; }
  Boundary bc() const { return bc_; }
  int dim() const { return dim_; }
  bool periodic() const { return bc_ == Boundary::periodic; }

  int n(int axis) const { return n_[static_cast<std::size_t>(axis)]; }
  double h(int axis) const { return h_[static_cast<std::size_t>(axis)]; }
  double length(int axis) const { return length_[static_cast<std::size_t>(axis)]; }
  double origin(int axis) const { return origin_[static_cast<std::size_t>(axis)]; }

  /// Total number of unknowns.
  Index size() const;
  /// Product of the spacings, i.e. the quadrature weight of each node.
  double cell_volume() const;

  Index index(int i0, int i1 = 0) const { return i0 + static_cast<Index>(n_[0]) * i1; }
  Point node(Index flat) const;
  double coordinate(int axis, int j) const {
    return origin(axis) + (j + 0.5) * h(axis);
  }

  /// Same kind, bc and extents with a different resolution.
  GridDomain refined(int n0, int n1 = 0) const;

  std::string describe() const;

  bool operator==(const GridDomain&) const = default;

 private:
  GridDomain() = default;

  DomainKind kind_ = DomainKind::interval;
  Boundary bc_ = Boundary::neumann;
  int dim_ = 1;
  std::array<int, 2> n_{1, 1};
  std::array<double, 2> h_{1.0, 1.0};
  std::array<double, 2> length_{1.0, 1.0};
  std::array<double, 2> origin_{0.0, 0.0};
};

/// Complex grid function with the h^d-weighted L2 structure.
struct ScalarField {
  ComplexVector values;
  GridDomain domain;

  static ScalarField zeros(const GridDomain& domain);
};

Complex inner(const GridDomain& domain, const ComplexVector& a, const ComplexVector& b);
double norm(const GridDomain& domain, const ComplexVector& a);
inline double norm(const ScalarField& f) { return norm(f.domain, f.values); }

}  // namespace shearspec
