#include "shearspec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "shearspec/errors.hpp"
#include "shearspec/linalg.hpp"

namespace shearspec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lower envelope of parabolas (Felzenszwalb-Huttenlocher) on a line of
// equally spaced samples: out[p] = min_q f[q] + (h (p - q))^2.
void distance_1d(const std::vector<double>& f, double h, std::vector<double>& out) {
  const int n = static_cast<int>(f.size());
  out.assign(f.size(), kInf);
  std::vector<int> v(f.size());
  std::vector<double> z(f.size() + 1);
  int k = -1;
  auto pos = [h](int q) { return h * q; };
  for (int q = 0; q < n; ++q) {
    if (!std::isfinite(f[static_cast<std::size_t>(q)])) continue;
    const double fq = f[static_cast<std::size_t>(q)] + pos(q) * pos(q);
    double s = -kInf;
    while (k >= 0) {
      const int r = v[static_cast<std::size_t>(k)];
      const double fr = f[static_cast<std::size_t>(r)] + pos(r) * pos(r);
      s = (fq - fr) / (2.0 * (pos(q) - pos(r)));
      if (s <= z[static_cast<std::size_t>(k)]) {
        --k;
        continue;
      }
      break;
    }
    ++k;
    v[static_cast<std::size_t>(k)] = q;
    z[static_cast<std::size_t>(k)] = k == 0 ? -kInf : s;
    z[static_cast<std::size_t>(k) + 1] = kInf;
  }
  if (k < 0) return;
  int j = 0;
  for (int p = 0; p < n; ++p) {
    while (z[static_cast<std::size_t>(j) + 1] < pos(p)) ++j;
    const int q = v[static_cast<std::size_t>(j)];
    const double d = pos(p) - pos(q);
    out[static_cast<std::size_t>(p)] = d * d + f[static_cast<std::size_t>(q)];
  }
}

// One pass along `axis`; periodic axes are unrolled three times.
void pass(const GridDomain& d, int axis, Eigen::VectorXd& field) {
  const int n = d.n(axis);
  const int lines = d.dim() == 2 ? d.n(1 - axis) : 1;
  const int copies = d.periodic() ? 3 : 1;
  std::vector<double> line(static_cast<std::size_t>(n * copies));
  std::vector<double> out;
  auto flat = [&](int along, int l) { return axis == 0 ? d.index(along, l) : d.index(l, along); };
  for (int l = 0; l < lines; ++l) {
    for (int c = 0; c < copies; ++c) {
      for (int j = 0; j < n; ++j) line[static_cast<std::size_t>(c * n + j)] = field[flat(j, l)];
    }
    distance_1d(line, d.h(axis), out);
    const int offset = copies == 3 ? n : 0;
    for (int j = 0; j < n; ++j) field[flat(j, l)] = out[static_cast<std::size_t>(offset + j)];
  }
}

bool inside_omega(const VelocityProfile& profile, const Point& y) {
  // the radial profiles live on the unit disk inside their bounding square
  if (profile.family() == "radial_m") return y[0] * y[0] + y[1] * y[1] < 1.0;
  return true;
}

}  // namespace

Mask level_set_mask(const GridDomain& domain, const VelocityProfile& profile, double lambda,
                    double delta, int m) {
  if (m < 1) throw ValidationError("level set: m must be >= 1");
  if (!(delta > 0.0)) throw ValidationError("level set: delta must be positive");
  const double width = std::pow(delta, m);
  Mask mask(domain.size());
  for (Index j = 0; j < domain.size(); ++j) {
    mask[j] = std::abs(profile.raw(domain.node(j)) - lambda) < width;
  }
  return mask;
}

Eigen::VectorXd squared_distance_to_set(const GridDomain& domain, const Mask& set) {
  if (set.size() != domain.size()) throw ValidationError("distance: mask size mismatch");
  Eigen::VectorXd field(domain.size());
  for (Index j = 0; j < domain.size(); ++j) field[j] = set[j] ? 0.0 : kInf;
  for (int axis = 0; axis < domain.dim(); ++axis) pass(domain, axis, field);
  return field;
}

Mask neighbourhood(const GridDomain& domain, const Mask& set, double delta) {
  const Eigen::VectorXd d2 = squared_distance_to_set(domain, set);
  return d2.array() < delta * delta;
}

Mask indicator_mask(const GridDomain& domain, const std::function<bool(const Point&)>& indicator) {
  Mask mask(domain.size());
  for (Index j = 0; j < domain.size(); ++j) mask[j] = indicator(domain.node(j));
  return mask;
}

double level_set_measure(const LevelSetQuery& q, bool thickened, int resolution) {
  if (q.m < 1) throw ValidationError("level_set_measure: m must be >= 1");
  if (!(q.delta > 0.0)) throw ValidationError("level_set_measure: delta must be positive");
  if (q.delta > q.delta_max) {
    throw ValidationError("level_set_measure: delta exceeds delta_max");
  }
  const int dim = q.profile.dim();
  const int n = resolution > 0 ? resolution : (dim == 1 ? 65536 : 512);
  const GridDomain domain = q.profile.natural_domain(n);
  const double width = std::pow(q.delta, q.m);

  double vmin = kInf, vmax = -kInf;
  for (Index j = 0; j < domain.size(); ++j) {
    const Point y = domain.node(j);
    if (!inside_omega(q.profile, y)) continue;
    const double r = q.profile.raw(y);
    vmin = std::min(vmin, r);
    vmax = std::max(vmax, r);
  }
  if (q.lambda - width > vmax || q.lambda + width < vmin) return 0.0;

  Mask mask = level_set_mask(domain, q.profile, q.lambda, q.delta, q.m);
  for (Index j = 0; j < domain.size(); ++j) mask[j] = mask[j] && inside_omega(q.profile, domain.node(j));
  if (thickened) {
    mask = neighbourhood(domain, mask, q.delta);
    for (Index j = 0; j < domain.size(); ++j) mask[j] = mask[j] && inside_omega(q.profile, domain.node(j));
  }
  return static_cast<double>(mask.count()) * domain.cell_volume();
}

ThinnessReport h1_thin_constant(const Mask& set, double delta, double c0, const GridDomain& domain,
                                double kappa_target) {
  if (!(delta > 0.0)) throw ValidationError("h1_thin_constant: delta must be positive");
  if (!(c0 > 0.0)) throw ValidationError("h1_thin_constant: c0 must be positive");
  if (!(kappa_target > 0.0 && kappa_target < 1.0)) {
    throw ValidationError("h1_thin_constant: kappa_target must lie in (0, 1)");
  }
  if (set.size() != domain.size()) throw ValidationError("h1_thin_constant: mask size mismatch");
  ThinnessReport report;
  report.kappa_target = kappa_target;
  report.c0 = c0;
  if (!set.any()) {
    report.theta = 0.0;
    report.passed = true;
    return report;
  }
  // M_E g = theta (M + c0 delta^2 M K) g; the h^d weights cancel.
  RealSparse pencil = (c0 * delta * delta) * laplacian(domain);
  for (Index j = 0; j < domain.size(); ++j) pencil.coeffRef(j, j) += 1.0;
  pencil.makeCompressed();
  RealSparseLDLT ldlt(pencil);
  if (!ldlt.ok()) throw NumericalError("h1_thin_constant: factorization failed");
  const Eigen::VectorXd chi = set.cast<double>().matrix();
  auto op = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    y = chi.cwiseProduct(ldlt.solve(chi.cwiseProduct(x)));
  };
  LanczosOptions options;
  options.tolerance = 1e-10;
  options.max_restarts = 500;
  Eigen::VectorXd start = chi + 1e-3 * deterministic_start(domain.size(), 7).cwiseProduct(chi);
  const RitzPair<Eigen::VectorXd> pair = lanczos_largest(op, start, options);
  if (!pair.converged) {
    throw NumericalError("h1_thin_constant: eigen-iteration did not converge; refine the grid");
  }
  report.theta = std::clamp(pair.value, 0.0, 1.0);
  report.passed = report.theta <= kappa_target;
  return report;
}

ThinnessReport h1_thin_constant(const std::function<bool(const Point&)>& indicator, double delta,
                                double c0, const GridDomain& domain, double kappa_target) {
  return h1_thin_constant(indicator_mask(domain, indicator), delta, c0, domain, kappa_target);
}

double set_integral(const ScalarField& g, const Mask& set) {
  if (set.size() != g.values.size()) throw ValidationError("set_integral: mask size mismatch");
  double s = 0.0;
  for (Index j = 0; j < g.values.size(); ++j) {
    if (set[j]) s += std::norm(g.values[j]);
  }
  return s * g.domain.cell_volume();
}

double norm_gradient_product(const ScalarField& g) {
  return norm(g) * gradient_norm(face_operators(g.domain), g.values);
}

double annulus_inequality_residual(const ScalarField& g, double r1, double r2) {
  if (!(r1 >= 0.0) || !(r2 >= r1)) throw ValidationError("annulus: need r2 >= r1 >= 0");
  const GridDomain& d = g.domain;
  Mask shell(d.size());
  for (Index j = 0; j < d.size(); ++j) {
    const Point y = d.node(j);
    const double r = d.dim() == 2 ? std::hypot(y[0], y[1]) : std::abs(y[0]);
    shell[j] = r1 < r2 && r >= r1 && r <= r2;
  }
  return 2.0 * (r2 - r1) * norm_gradient_product(g) - set_integral(g, shell);
}

}  // namespace shearspec
