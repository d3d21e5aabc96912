#include "shearspec/grid.hpp"

#include <sstream>

#include "shearspec/errors.hpp"

namespace shearspec {

std::string_view to_string(Boundary bc) {
  switch (bc) {
    case Boundary::neumann: return "neumann";
    case Boundary::dirichlet: return "dirichlet";
    case Boundary::periodic: return "periodic";
  }
  return "?";
}

std::string_view to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::interval: return "interval";
    case DomainKind::torus1d: return "torus1d";
    case DomainKind::torus2d: return "torus2d";
    case DomainKind::rectangle: return "rectangle";
  }
  return "?";
}

Boundary parse_boundary(std::string_view text) {
  if (text == "neumann") return Boundary::neumann;
  if (text == "dirichlet") return Boundary::dirichlet;
  if (text == "periodic") return Boundary::periodic;
  throw ValidationError("unknown boundary condition '" + std::string(text) +
                        "' (expected neumann, dirichlet or periodic)");
}

namespace {

void require_points(int n) {
  if (n < 2) throw ValidationError("grid needs at least 2 points per axis");
}

}  // namespace

GridDomain GridDomain::interval(int n, Boundary bc, double lo, double hi) {
  require_points(n);
  if (!(hi > lo)) throw ValidationError("interval needs hi > lo");
  if (bc == Boundary::periodic) return torus1d(n, hi - lo, lo);
  GridDomain d;
  d.kind_ = DomainKind::interval;
  d.bc_ = bc;
  d.dim_ = 1;
  d.n_ = {n, 1};
  d.length_ = {hi - lo, 1.0};
  d.origin_ = {lo, 0.0};
  d.h_ = {(hi - lo) / n, 1.0};
  return d;
}

GridDomain GridDomain::torus1d(int n, double length, double lo) {
  require_points(n);
  if (!(length > 0)) throw ValidationError("torus length must be positive");
  GridDomain d;
  d.kind_ = DomainKind::torus1d;
  d.bc_ = Boundary::periodic;
  d.dim_ = 1;
  d.n_ = {n, 1};
  d.length_ = {length, 1.0};
  d.origin_ = {lo, 0.0};
  d.h_ = {length / n, 1.0};
  return d;
}

GridDomain GridDomain::torus2d(int n0, int n1, double length0, double length1) {
  require_points(n0);
  require_points(n1);
  if (!(length0 > 0 && length1 > 0)) throw ValidationError("torus lengths must be positive");
  GridDomain d;
  d.kind_ = DomainKind::torus2d;
  d.bc_ = Boundary::periodic;
  d.dim_ = 2;
  d.n_ = {n0, n1};
  d.length_ = {length0, length1};
  d.origin_ = {0.0, 0.0};
  d.h_ = {length0 / n0, length1 / n1};
  return d;
}

GridDomain GridDomain::rectangle(int n0, int n1, Boundary bc, Point lo, Point hi) {
  require_points(n0);
  require_points(n1);
  if (!(hi[0] > lo[0] && hi[1] > lo[1])) throw ValidationError("rectangle needs hi > lo");
  if (bc == Boundary::periodic) {
    GridDomain d = torus2d(n0, n1, hi[0] - lo[0], hi[1] - lo[1]);
    d.origin_ = lo;
    return d;
  }
  GridDomain d;
  d.kind_ = DomainKind::rectangle;
  d.bc_ = bc;
  d.dim_ = 2;
  d.n_ = {n0, n1};
  d.length_ = {hi[0] - lo[0], hi[1] - lo[1]};
  d.origin_ = lo;
  d.h_ = {d.length_[0] / n0, d.length_[1] / n1};
  return d;
}

Index GridDomain::size() const {
  return static_cast<Index>(n_[0]) * (dim_ == 2 ? n_[1] : 1);
}

double GridDomain::cell_volume() const { return dim_ == 2 ? h_[0] * h_[1] : h_[0]; }

Point GridDomain::node(Index flat) const {
  const auto i0 = static_cast<int>(flat % n_[0]);
  const auto i1 = static_cast<int>(flat / n_[0]);
  return {coordinate(0, i0), dim_ == 2 ? coordinate(1, i1) : 0.0};
}

GridDomain GridDomain::refined(int n0, int n1) const {
  GridDomain d = *this;
  require_points(n0);
  d.n_[0] = n0;
  d.h_[0] = length_[0] / n0;
  if (dim_ == 2) {
    const int m = n1 > 0 ? n1 : n0;
    require_points(m);
    d.n_[1] = m;
    d.h_[1] = length_[1] / m;
  }
  return d;
}

std::string GridDomain::describe() const {
  std::ostringstream os;
  os << to_string(kind_) << '[' << n_[0];
  if (dim_ == 2) os << 'x' << n_[1];
  os << ',' << to_string(bc_) << ']';
  return os.str();
}

ScalarField ScalarField::zeros(const GridDomain& domain) {
  return ScalarField{ComplexVector::Zero(domain.size()), domain};
}

Complex inner(const GridDomain& domain, const ComplexVector& a, const ComplexVector& b) {
  // <a, b> = h^d sum a_j conj(b_j)
  return domain.cell_volume() * b.dot(a);
}

double norm(const GridDomain& domain, const ComplexVector& a) {
  return std::sqrt(domain.cell_volume()) * a.norm();
}

}  // namespace shearspec
