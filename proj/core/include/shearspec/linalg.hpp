#pragma once

#include <cmath>
#include <memory>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "shearspec/discretize.hpp"
#include "shearspec/errors.hpp"

namespace shearspec {

/// Sparse LU of a complex matrix (UMFPACK). Solves with A and with A^H; the
/// adjoint solve relies on A being complex symmetric (A^T = A), which holds
/// for every operator assembled on a uniform grid.
class ComplexSparseLU {
 public:
  explicit ComplexSparseLU(const ComplexSparse& a);
  ~ComplexSparseLU();
  ComplexSparseLU(ComplexSparseLU&&) noexcept;
  ComplexSparseLU& operator=(ComplexSparseLU&&) noexcept;

  bool ok() const;
  ComplexVector solve(const ComplexVector& b) const;
  ComplexVector solve_adjoint(const ComplexVector& b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Sparse LDL^T of a real symmetric positive definite matrix.
class RealSparseLDLT {
 public:
  explicit RealSparseLDLT(const RealSparse& a);
  ~RealSparseLDLT();
  RealSparseLDLT(RealSparseLDLT&&) noexcept;
  RealSparseLDLT& operator=(RealSparseLDLT&&) noexcept;

  bool ok() const;
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct LanczosOptions {
  int krylov_dim = 24;
  int max_restarts = 200;
  double tolerance = 1e-12;  ///< relative residual of the Ritz pair
  unsigned seed = 12345;
};

template <class Vector>
struct RitzPair {
  double value = 0.0;
  Vector vector;
  int applications = 0;
  bool converged = false;
};

/// Start vector with entries drawn from a fixed-seed LCG so runs reproduce.
Eigen::VectorXd deterministic_start(Index n, unsigned seed);

/// Largest eigenvalue of a Hermitian positive semidefinite operator by
/// explicitly restarted Lanczos with full reorthogonalisation. `op(x, y)`
/// writes y = A x. Used on inverse operators, which turns it into an
/// accelerated inverse iteration.
template <class Vector, class Op>
RitzPair<Vector> lanczos_largest(Op&& op, Vector start, const LanczosOptions& opt = {}) {
  using Scalar = typename Vector::Scalar;
  const Index n = start.size();
  const int m = static_cast<int>(std::min<Index>(opt.krylov_dim, n));
  RitzPair<Vector> out;
  if (start.norm() == 0.0) start = deterministic_start(n, opt.seed).template cast<Scalar>();
  start.normalize();

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> basis(n, m);
  Vector w(n);
  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(m);
    basis.col(0) = start;
    int used = m;
    double last_beta = 0.0;
    for (int j = 0; j < m; ++j) {
      op(Vector(basis.col(j)), w);
      ++out.applications;
      alpha[j] = std::real(basis.col(j).dot(w));
      // full reorthogonalisation, twice for stability
      for (int pass = 0; pass < 2; ++pass) {
        const Vector c = basis.leftCols(j + 1).adjoint() * w;
        w -= basis.leftCols(j + 1) * c;
      }
      last_beta = w.norm();
      if (j + 1 == m) break;
      if (last_beta <= 1e-14 * std::abs(alpha[j])) {
        used = j + 1;
        last_beta = 0.0;
        break;
      }
      beta[j] = last_beta;
      basis.col(j + 1) = w / last_beta;
    }
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(used, used);
    for (int j = 0; j < used; ++j) {
      t(j, j) = alpha[j];
      if (j + 1 < used) t(j, j + 1) = t(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const double theta = es.eigenvalues()[used - 1];
    const Eigen::VectorXd s = es.eigenvectors().col(used - 1);
    Vector ritz = basis.leftCols(used) * s.template cast<Scalar>();
    ritz.normalize();
    out.value = theta;
    out.vector = ritz;
    const double residual = std::abs(last_beta * s[used - 1]);
    if (residual <= opt.tolerance * std::abs(theta) || used < m) {
      out.converged = true;
      return out;
    }
    start = ritz;
  }
  return out;
}

namespace dense {

/// All singular values (descending), LAPACK zgesdd.
Eigen::VectorXd singular_values(Eigen::MatrixXcd a);
/// All eigenvalues of a general complex matrix, LAPACK zgeev.
Eigen::VectorXcd eigenvalues(Eigen::MatrixXcd a);
/// Smallest eigenvalue of a real symmetric matrix, LAPACK dsyevr.
double smallest_symmetric_eigenvalue(Eigen::MatrixXd a);

}  // namespace dense

}  // namespace shearspec
