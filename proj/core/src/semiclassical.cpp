#include "shearspec/semiclassical.hpp"

#include <algorithm>
#include <cmath>

#include "shearspec/errors.hpp"
#include "shearspec/fitting.hpp"

namespace shearspec {

Eigen::VectorXd gradient_potential(const GridDomain& domain, const VelocityProfile& w) {
  if (w.dim() != domain.dim()) throw ValidationError("ground_state: dimension mismatch");
  Eigen::VectorXd p(domain.size());
  for (Index j = 0; j < domain.size(); ++j) {
    p[j] = w.grad(domain.node(j)).head(domain.dim()).squaredNorm();
  }
  return p;
}

RealSparse schrodinger_matrix(const GridDomain& domain, const Eigen::VectorXd& potential,
                              double sigma) {
  RealSparse a = sigma * laplacian(domain);
  for (Index j = 0; j < domain.size(); ++j) a.coeffRef(j, j) += potential[j];
  a.makeCompressed();
  return a;
}

GroundStateResult ground_state(const GridDomain& domain, const Eigen::VectorXd& potential,
                               double sigma, const GroundStateOptions& options) {
  if (!(sigma > 0.0 && sigma <= 1.0)) throw ValidationError("ground_state: sigma must lie in (0, 1]");
  if (domain.bc() == Boundary::dirichlet) {
    throw ValidationError("ground_state: Neumann or periodic walls only");
  }
  if (potential.size() != domain.size()) throw ValidationError("ground_state: potential size mismatch");
  if ((potential.array() < 0.0).any()) throw ValidationError("ground_state: potential must be >= 0");

  const RealSparse a = schrodinger_matrix(domain, potential, sigma);
  // A positive shift makes the pencil definite even when A has a kernel.
  const double tau = 1e-6 * (1.0 + potential.maxCoeff());
  RealSparse shifted = a;
  for (Index j = 0; j < domain.size(); ++j) shifted.coeffRef(j, j) += tau;
  RealSparseLDLT ldlt(shifted);
  if (!ldlt.ok()) throw NumericalError("ground_state: factorization failed");

  auto inverse = [&ldlt](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = ldlt.solve(x); };
  Eigen::VectorXd start = Eigen::VectorXd::Ones(domain.size()) +
                          0.1 * deterministic_start(domain.size(), options.lanczos.seed);
  RitzPair<Eigen::VectorXd> pair = lanczos_largest(inverse, start, options.lanczos);
  Eigen::VectorXd x = pair.vector;

  GroundStateResult r;
  r.sigma = sigma;
  r.n = domain.size();
  auto measure = [&](const Eigen::VectorXd& u) {
    const Eigen::VectorXd au = a * u;
    r.lambda_min = u.dot(au) / u.squaredNorm();
    r.eigvec_norm_check = (au - r.lambda_min * u).norm() / u.norm();
  };
  measure(x);
  for (int it = 0; it < options.max_polish && r.eigvec_norm_check > options.residual_target; ++it) {
    x = ldlt.solve(x);
    x.normalize();
    measure(x);
  }
  if (r.eigvec_norm_check > options.residual_target) {
    throw NumericalError("ground_state: residual " + std::to_string(r.eigvec_norm_check) +
                         " above target after polishing");
  }
  x /= norm(domain, x.cast<Complex>());
  if (x.sum() < 0.0) x = -x;
  r.eigenvector = x;
  const FaceOperators faces = face_operators(domain);
  const double g = gradient_norm(faces, x.cast<Complex>());
  r.grad_norm2 = g * g;
  r.weight_norm2 = domain.cell_volume() * (potential.array() * x.array().square()).sum();
  return r;
}

GroundStateResult ground_state(const GridDomain& domain, const VelocityProfile& w, double sigma,
                               const GroundStateOptions& options) {
  return ground_state(domain, gradient_potential(domain, w), sigma, options);
}

int semiclassical_resolution(double sigma, double length, int base) {
  const double wanted = std::ceil(64.0 * length * std::pow(sigma, -0.25));
  return static_cast<int>(std::min(4096.0, std::max(static_cast<double>(base), wanted)));
}

std::vector<double> default_sigma_grid() {
  std::vector<double> s;
  for (int i = 0; i < 9; ++i) s.push_back(std::pow(10.0, -5.0 + 0.5 * i));
  return s;
}

SemiclassicalFit fit_semiclassical_exponent(const GridDomain& domain, const VelocityProfile& w,
                                            const std::vector<double>& sigma_grid,
                                            const GroundStateOptions& options) {
  if (sigma_grid.size() < 6) throw ValidationError("semiclassical fit: need at least 6 sigma values");
  const auto [lo, hi] = std::minmax_element(sigma_grid.begin(), sigma_grid.end());
  if (!(*lo > 0.0) || *hi / *lo < 100.0 * (1.0 - 1e-12)) {
    throw ValidationError("semiclassical fit: sigma grid must span at least two decades");
  }
  SemiclassicalFit fit;
  const int m = w.m_index();
  std::vector<double> lambdas;
  for (double sigma : sigma_grid) {
    GridDomain grid = domain;
    if (domain.dim() == 1) {
      grid = domain.refined(semiclassical_resolution(sigma, domain.length(0), domain.n(0)));
    }
    GroundStateResult state = ground_state(grid, w, sigma, options);
    if (state.lambda_min < 1e-14) {
      throw NumericalError("semiclassical fit: lambda_min below 1e-14 at sigma = " +
                           std::to_string(sigma) + "; w has no usable gradient");
    }
    lambdas.push_back(state.lambda_min);
    fit.c_sp_fit = std::max(fit.c_sp_fit, std::pow(sigma, (m - 1.0) / m) / state.lambda_min);
    fit.states.push_back(std::move(state));
  }
  fit.sigmas = sigma_grid;
  fit.exponent = fit_power_law(sigma_grid, lambdas).slope;
  return fit;
}

double radial_inequality_ratio(const GridDomain& domain, const Eigen::VectorXd& phi, int ell) {
  if (ell < 1) throw ValidationError("radial inequality: ell must be >= 1");
  const double vol = domain.cell_volume();
  double l2 = 0.0, moment = 0.0;
  for (Index j = 0; j < domain.size(); ++j) {
    const Point y = domain.node(j);
    const double r = std::hypot(y[0], domain.dim() == 2 ? y[1] : 0.0);
    l2 += phi[j] * phi[j];
    moment += std::pow(r, 2 * ell) * phi[j] * phi[j];
  }
  l2 = std::sqrt(vol * l2);
  moment = std::sqrt(vol * moment);
  const double grad = gradient_norm(face_operators(domain), phi.cast<Complex>());
  const double q = static_cast<double>(ell);
  return l2 / (std::pow(grad, q / (q + 1.0)) * std::pow(moment, 1.0 / (q + 1.0)));
}

}  // namespace shearspec
