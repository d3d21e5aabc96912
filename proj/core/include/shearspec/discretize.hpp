#pragma once

#include <array>
#include <vector>

#include <Eigen/SparseCore>

#include "shearspec/grid.hpp"
#include "shearspec/profiles.hpp"

namespace shearspec {

using RealSparse = Eigen::SparseMatrix<double, Eigen::ColMajor>;
using ComplexSparse = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

/// Face-centred difference operators of a grid. Face f of axis a carries the
/// one-sided difference of its two neighbouring nodes; Neumann boundary faces
/// are dropped (zero flux), Dirichlet boundary faces sit h/2 from the first
/// node and see the odd reflection g_ghost = -g.
///
/// The stiffness satisfies K = h^{-d} sum_a G_a^T W_a G_a exactly, which is
/// what makes Re<Hg, g> = nu <Kg, g> hold to round-off.
struct FaceOperators {
  int dim = 1;
  std::array<RealSparse, 2> gradient;   ///< faces x nodes
  std::array<RealSparse, 2> average;    ///< faces x nodes, value of g on the face
  std::array<Eigen::VectorXd, 2> weight;  ///< quadrature weight of each face
  std::array<std::vector<Point>, 2> position;

  Index faces(int axis) const { return gradient[static_cast<std::size_t>(axis)].rows(); }
};

FaceOperators face_operators(const GridDomain& domain);

/// Centred node gradient (g[j+1] - g[j-1]) / 2h with the same ghost rules as
/// the faces: mirrored for Neumann, odd reflection for Dirichlet, wrapped for periodic.
std::array<RealSparse, 2> node_gradient(const GridDomain& domain);

/// -Delta_h as a node operator (not mass weighted).
RealSparse laplacian(const GridDomain& domain);

struct MassStiffness {
  Eigen::VectorXd mass;  ///< diagonal h^d weights
  RealSparse stiffness;  ///< -Delta_h, same operator as in assemble() without nu
};

MassStiffness mass_stiffness(const GridDomain& domain);

/// Assembled H_{nu,k,lambda} = -nu Delta_h + i k (v - lambda).
struct OperatorMatrix {
  ComplexSparse matrix;
  double nu = 0.0;
  double k = 0.0;
  double lambda = 0.0;
  GridDomain domain;
  VelocityProfile profile;
};

OperatorMatrix assemble(const GridDomain& domain, const VelocityProfile& profile, double nu,
                        double k, double lambda);

ScalarField apply(const OperatorMatrix& op, const ScalarField& g);

/// ||grad g|| from the face gradients (equals sqrt(<Kg, g>)).
double gradient_norm(const FaceOperators& faces, const ComplexVector& g);

}  // namespace shearspec
