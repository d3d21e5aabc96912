#include "shearspec/linalg.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/UmfPackSupport>

#include <lapacke.h>

namespace shearspec {

struct ComplexSparseLU::Impl {
  Eigen::UmfPackLU<ComplexSparse> lu;
};

ComplexSparseLU::ComplexSparseLU(const ComplexSparse& a) : impl_(std::make_unique<Impl>()) {
  impl_->lu.compute(a);
}
ComplexSparseLU::~ComplexSparseLU() = default;
ComplexSparseLU::ComplexSparseLU(ComplexSparseLU&&) noexcept = default;
ComplexSparseLU& ComplexSparseLU::operator=(ComplexSparseLU&&) noexcept = default;

bool ComplexSparseLU::ok() const { return impl_->lu.info() == Eigen::Success; }

ComplexVector ComplexSparseLU::solve(const ComplexVector& b) const {
  ComplexVector x = impl_->lu.solve(b);
  if (impl_->lu.info() != Eigen::Success || !x.allFinite()) {
    throw NumericalError("sparse LU solve failed");
  }
  return x;
}

ComplexVector ComplexSparseLU::solve_adjoint(const ComplexVector& b) const {
  // A^H y = b  <=>  A conj(y) = conj(b) when A^T = A.
  return solve(b.conjugate()).conjugate();
}

struct RealSparseLDLT::Impl {
  Eigen::SimplicialLDLT<RealSparse> ldlt;
};

RealSparseLDLT::RealSparseLDLT(const RealSparse& a) : impl_(std::make_unique<Impl>()) {
  impl_->ldlt.compute(a);
}
RealSparseLDLT::~RealSparseLDLT() = default;
RealSparseLDLT::RealSparseLDLT(RealSparseLDLT&&) noexcept = default;
RealSparseLDLT& RealSparseLDLT::operator=(RealSparseLDLT&&) noexcept = default;

bool RealSparseLDLT::ok() const { return impl_->ldlt.info() == Eigen::Success; }

Eigen::VectorXd RealSparseLDLT::solve(const Eigen::VectorXd& b) const {
  Eigen::VectorXd x = impl_->ldlt.solve(b);
  if (impl_->ldlt.info() != Eigen::Success || !x.allFinite()) {
    throw NumericalError("sparse LDLT solve failed");
  }
  return x;
}

Eigen::VectorXd deterministic_start(Index n, unsigned seed) {
  Eigen::VectorXd v(n);
  std::uint64_t state = 0x9E3779B97F4A7C15ull ^ seed;
  for (Index i = 0; i < n; ++i) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    v[i] = static_cast<double>(state >> 11) / static_cast<double>(1ull << 53) - 0.5;
  }
  return v;
}

namespace dense {

Eigen::VectorXd singular_values(Eigen::MatrixXcd a) {
  const auto m = static_cast<lapack_int>(a.rows());
  const auto n = static_cast<lapack_int>(a.cols());
  Eigen::VectorXd s(std::min(m, n));
  const lapack_int info = LAPACKE_zgesdd(
      LAPACK_COL_MAJOR, 'N', m, n, reinterpret_cast<lapack_complex_double*>(a.data()), m,
      s.data(), nullptr, 1, nullptr, 1);
  if (info != 0) throw NumericalError("zgesdd failed, info = " + std::to_string(info));
  return s;
}

Eigen::VectorXcd eigenvalues(Eigen::MatrixXcd a) {
  const auto n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXcd w(n);
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', 'N', n, reinterpret_cast<lapack_complex_double*>(a.data()), n,
      reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1, nullptr, 1);
  if (info != 0) throw NumericalError("zgeev failed, info = " + std::to_string(info));
  return w;
}

double smallest_symmetric_eigenvalue(Eigen::MatrixXd a) {
  const auto n = static_cast<lapack_int>(a.rows());
  lapack_int found = 0;
  double w[1];
  std::vector<lapack_int> support(2);
  const lapack_int info =
      LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'N', 'I', 'L', n, a.data(), n, 0.0, 0.0, 1, 1, 0.0,
                     &found, w, nullptr, 1, support.data());
  if (info != 0 || found != 1) throw NumericalError("dsyevr failed, info = " + std::to_string(info));
  return w[0];
}

}  // namespace dense

}  // namespace shearspec
