#include "shearspec/discretize.hpp"

#include "shearspec/errors.hpp"

namespace shearspec {

namespace {

using Triplet = Eigen::Triplet<double>;

struct AxisFaces {
  std::vector<Triplet> grad;
  std::vector<Triplet> avg;
  std::vector<double> weight;
  std::vector<Point> position;
  Index count = 0;
};

// Faces normal to `axis`, looping over every line of nodes along that axis.
AxisFaces build_axis(const GridDomain& d, int axis) {
  AxisFaces out;
  const int n = d.n(axis);
  const int other = 1 - axis;
  const int lines = d.dim() == 2 ? d.n(other) : 1;
  const double h = d.h(axis);
  const double transverse = d.dim() == 2 ? d.h(other) : 1.0;
  auto flat = [&](int along, int line) {
    return axis == 0 ? d.index(along, line) : d.index(line, along);
  };
  auto face_point = [&](double s, int line) -> Point {
    Point p{0.0, 0.0};
    p[static_cast<std::size_t>(axis)] = d.origin(axis) + s;
    if (d.dim() == 2) p[static_cast<std::size_t>(other)] = d.coordinate(other, line);
    return p;
  };
  auto add_interior = [&](int lo_node, int hi_node, double s, int line) {
    const Index f = out.count++;
    out.grad.emplace_back(f, flat(hi_node, line), 1.0 / h);
    out.grad.emplace_back(f, flat(lo_node, line), -1.0 / h);
    out.avg.emplace_back(f, flat(hi_node, line), 0.5);
    out.avg.emplace_back(f, flat(lo_node, line), 0.5);
    out.weight.push_back(h * transverse);
    out.position.push_back(face_point(s, line));
  };
  for (int line = 0; line < lines; ++line) {
    for (int j = 1; j < n; ++j) add_interior(j - 1, j, j * h, line);
    if (d.bc() == Boundary::periodic) {
      add_interior(n - 1, 0, n * h, line);
    } else if (d.bc() == Boundary::dirichlet) {
      // g vanishes on the wall: one-sided difference over h/2, face value 0.
      const Index f0 = out.count++;
      out.grad.emplace_back(f0, flat(0, line), 2.0 / h);
      out.weight.push_back(0.5 * h * transverse);
      out.position.push_back(face_point(0.0, line));
      const Index f1 = out.count++;
      out.grad.emplace_back(f1, flat(n - 1, line), -2.0 / h);
      out.weight.push_back(0.5 * h * transverse);
      out.position.push_back(face_point(n * h, line));
    }
  }
  return out;
}

}  // namespace

FaceOperators face_operators(const GridDomain& domain) {
  FaceOperators ops;
  ops.dim = domain.dim();
  for (int axis = 0; axis < domain.dim(); ++axis) {
    const auto a = static_cast<std::size_t>(axis);
    AxisFaces f = build_axis(domain, axis);
    ops.gradient[a].resize(f.count, domain.size());
    ops.gradient[a].setFromTriplets(f.grad.begin(), f.grad.end());
    ops.average[a].resize(f.count, domain.size());
    ops.average[a].setFromTriplets(f.avg.begin(), f.avg.end());
    ops.weight[a] = Eigen::Map<const Eigen::VectorXd>(f.weight.data(), f.count);
    ops.position[a] = std::move(f.position);
  }
  return ops;
}

std::array<RealSparse, 2> node_gradient(const GridDomain& domain) {
  std::array<RealSparse, 2> out;
  for (int axis = 0; axis < domain.dim(); ++axis) {
    const int n = domain.n(axis);
    const int lines = domain.dim() == 2 ? domain.n(1 - axis) : 1;
    const double c = 0.5 / domain.h(axis);
    auto flat = [&](int along, int line) {
      return axis == 0 ? domain.index(along, line) : domain.index(line, along);
    };
    std::vector<Triplet> t;
    for (int line = 0; line < lines; ++line) {
      for (int j = 0; j < n; ++j) {
        const Index row = flat(j, line);
        int hi = j + 1;
        int lo = j - 1;
        double sign_hi = 1.0;
        double sign_lo = 1.0;
        if (domain.periodic()) {
          hi %= n;
          lo = (lo + n) % n;
        } else {
          const double ghost = domain.bc() == Boundary::dirichlet ? -1.0 : 1.0;
          if (hi == n) {
            hi = n - 1;
            sign_hi = ghost;
          }
          if (lo < 0) {
            lo = 0;
            sign_lo = ghost;
          }
        }
        t.emplace_back(row, flat(hi, line), c * sign_hi);
        t.emplace_back(row, flat(lo, line), -c * sign_lo);
      }
    }
    auto& m = out[static_cast<std::size_t>(axis)];
    m.resize(domain.size(), domain.size());
    m.setFromTriplets(t.begin(), t.end());
    m.prune(0.0);
  }
  return out;
}

RealSparse laplacian(const GridDomain& domain) {
  const FaceOperators faces = face_operators(domain);
  RealSparse k(domain.size(), domain.size());
  const double inv_volume = 1.0 / domain.cell_volume();
  for (int axis = 0; axis < domain.dim(); ++axis) {
    const auto a = static_cast<std::size_t>(axis);
    const RealSparse weighted = faces.weight[a].asDiagonal() * faces.gradient[a];
    k += RealSparse(faces.gradient[a].transpose() * weighted);
  }
  k *= inv_volume;
  k.prune(0.0);
  k.makeCompressed();
  return k;
}

MassStiffness mass_stiffness(const GridDomain& domain) {
  return {Eigen::VectorXd::Constant(domain.size(), domain.cell_volume()), laplacian(domain)};
}

OperatorMatrix assemble(const GridDomain& domain, const VelocityProfile& profile, double nu,
                        double k, double lambda) {
  if (!(nu > 0.0)) throw ValidationError("assemble: nu must be positive");
  if (profile.dim() != domain.dim()) {
    throw ValidationError("assemble: profile '" + profile.name() + "' is " +
                          std::to_string(profile.dim()) + "-D but the grid is " +
                          std::to_string(domain.dim()) + "-D");
  }
  if (!profile.evolvable()) {
    throw ValidationError("assemble: profile '" + profile.name() + "' is geometry-only");
  }
  const RealSparse lap = laplacian(domain);
  ComplexSparse h = (nu * lap).cast<Complex>();
  const Eigen::VectorXd v = profile.sample(domain);
  for (Index j = 0; j < domain.size(); ++j) {
    h.coeffRef(j, j) += Complex(0.0, k * (v[j] - lambda));
  }
  h.makeCompressed();
  return OperatorMatrix{std::move(h), nu, k, lambda, domain, profile};
}

ScalarField apply(const OperatorMatrix& op, const ScalarField& g) {
  if (!(g.domain == op.domain)) throw ValidationError("apply: field and operator grids differ");
  return ScalarField{op.matrix * g.values, g.domain};
}

double gradient_norm(const FaceOperators& faces, const ComplexVector& g) {
  double sum = 0.0;
  for (int axis = 0; axis < faces.dim; ++axis) {
    const auto a = static_cast<std::size_t>(axis);
    const ComplexVector dg = faces.gradient[a] * g;
    sum += (faces.weight[a].array() * dg.array().abs2()).sum();
  }
  return std::sqrt(sum);
}

}  // namespace shearspec
