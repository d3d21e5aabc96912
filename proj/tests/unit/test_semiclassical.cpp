#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "shearspec/errors.hpp"
#include "shearspec/semiclassical.hpp"

#include "../support/random_fields.hpp"

namespace ss = shearspec;

namespace {

double dense_lowest(const ss::GridDomain& d, const Eigen::VectorXd& potential, double sigma) {
  const Eigen::MatrixXd a = Eigen::MatrixXd(ss::schrodinger_matrix(d, potential, sigma));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

}  // namespace

TEST_CASE("zero gradient gives a zero ground-state energy") {
  const ss::GridDomain d = ss::GridDomain::interval(64, ss::Boundary::neumann);
  const ss::GroundStateResult r = ss::ground_state(d, ss::get_profile("constant"), 0.1);
  CHECK(std::abs(r.lambda_min) < 1e-10);
  CHECK(r.eigvec_norm_check <= 1e-8);
}

TEST_CASE("unit gradient gives lambda = 1 for every sigma") {
  const ss::GridDomain d = ss::GridDomain::interval(64, ss::Boundary::neumann);
  for (double sigma : {1e-4, 1e-2, 1.0}) {
    const ss::GroundStateResult r = ss::ground_state(d, ss::get_profile("couette"), sigma);
    CHECK(r.lambda_min == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(ss::norm(d, r.eigenvector.cast<ss::Complex>()) == doctest::Approx(1.0));
  }
}

TEST_CASE("harmonic oscillator ground state is sqrt(sigma)") {
  const ss::GridDomain d = ss::GridDomain::interval(1024, ss::Boundary::neumann, -4.0, 4.0);
  Eigen::VectorXd potential(d.size());
  for (ss::Index j = 0; j < d.size(); ++j) potential[j] = d.node(j)[0] * d.node(j)[0];
  for (double sigma : {1e-3, 1e-2, 1e-1}) {
    const ss::GroundStateResult r = ss::ground_state(d, potential, sigma);
    CHECK(r.lambda_min / std::sqrt(sigma) == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("ground state matches a dense eigensolver and its energy splits into components") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const ss::GridDomain d = ss::GridDomain::interval(96, ss::Boundary::neumann);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd potential(d.size());
    for (ss::Index j = 0; j < d.size(); ++j) potential[j] = 4.0 * unit(rng);
    const double sigma = std::pow(10.0, -3.0 * unit(rng));
    const ss::GroundStateResult r = ss::ground_state(d, potential, sigma);
    CHECK(r.lambda_min == doctest::Approx(dense_lowest(d, potential, sigma)).epsilon(1e-9));
    CHECK(sigma * r.grad_norm2 + r.weight_norm2 == doctest::Approx(r.lambda_min).epsilon(1e-8));
  }
}

TEST_CASE("lambda_min is a lower bound for Rayleigh quotients and grows with sigma") {
  std::mt19937_64 rng(11);
  const ss::VelocityProfile w = ss::get_profile("poiseuille");
  const ss::GridDomain d = ss::GridDomain::interval(128, ss::Boundary::neumann);
  const Eigen::VectorXd potential = ss::gradient_potential(d, w);
  double previous = 0.0;
  for (double sigma : ss::testing::logspace(1e-4, 1.0, 9)) {
    const ss::GroundStateResult r = ss::ground_state(d, potential, sigma);
    CHECK(r.lambda_min >= previous);
    previous = r.lambda_min;
    const ss::RealSparse a = ss::schrodinger_matrix(d, potential, sigma);
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::VectorXd x = ss::testing::random_smooth_field(d, rng, 8).values.real();
      CHECK(x.dot(a * x) / x.squaredNorm() >= r.lambda_min * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("fitted exponents follow (m - 1) / m") {
  const ss::GridDomain d = ss::GridDomain::interval(64, ss::Boundary::neumann);
  const ss::SemiclassicalFit quadratic =
      ss::fit_semiclassical_exponent(d, ss::get_profile("poiseuille"), ss::default_sigma_grid());
  CHECK(quadratic.exponent == doctest::Approx(0.5).epsilon(0.02));
  REQUIRE(quadratic.states.size() == 9);
  // sigma^{1/2} |phi|^2 <= c_sp (sigma |grad phi|^2 + |phi grad w|^2), with c_sp nearly uniform in sigma
  double smallest = 1e300;
  for (const ss::GroundStateResult& s : quadratic.states) {
    const double energy = s.sigma * s.grad_norm2 + s.weight_norm2;
    CHECK(std::sqrt(s.sigma) <= quadratic.c_sp_fit * energy * (1.0 + 1e-9));
    smallest = std::min(smallest, std::sqrt(s.sigma) / energy);
  }
  CHECK(quadratic.c_sp_fit / smallest <= 2.0);
  // c_sp = max sigma^{1/2} / lambda is stable under grid refinement
  const ss::SemiclassicalFit finer = ss::fit_semiclassical_exponent(
      ss::GridDomain::interval(256, ss::Boundary::neumann), ss::get_profile("poiseuille"), ss::default_sigma_grid());
  CHECK(finer.c_sp_fit == doctest::Approx(quadratic.c_sp_fit).epsilon(0.01));

  const ss::SemiclassicalFit linear =
      ss::fit_semiclassical_exponent(d, ss::get_profile("couette"), ss::default_sigma_grid());
  CHECK(std::abs(linear.exponent) < 1e-8);
}

TEST_CASE("resolution tracks the ground-state width") {
  CHECK(ss::semiclassical_resolution(1e-4, 1.0, 64) == 640);
  CHECK(ss::semiclassical_resolution(1.0, 1.0, 100) == 100);
  CHECK(ss::semiclassical_resolution(1e-12, 2.0, 64) == 4096);
  CHECK(ss::default_sigma_grid().front() == doctest::Approx(1e-5));
  CHECK(ss::default_sigma_grid().back() == doctest::Approx(1e-1));
}

TEST_CASE("radial inequality holds for fields supported in the unit ball") {
  std::mt19937_64 rng(5);
  const ss::GridDomain d = ss::GridDomain::rectangle(96, 96, ss::Boundary::neumann, {-1.0, -1.0}, {1.0, 1.0});
  for (int ell : {1, 2, 3}) {
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd phi = ss::testing::random_smooth_field(d, rng, 5).values.real();
      for (ss::Index j = 0; j < d.size(); ++j) {
        const double r2 = d.node(j)[0] * d.node(j)[0] + d.node(j)[1] * d.node(j)[1];
        phi[j] *= std::max(0.0, 1.0 - r2);
      }
      const double ratio = ss::radial_inequality_ratio(d, phi, ell);
      CAPTURE(ell);
      CHECK(ratio > 0.0);
      CHECK(ratio <= 10.0);
    }
  }
  CHECK_THROWS_AS(ss::radial_inequality_ratio(d, Eigen::VectorXd::Ones(d.size()), 0), ss::ValidationError);
}

TEST_CASE("semiclassical preconditions") {
  const ss::VelocityProfile w = ss::get_profile("couette");
  CHECK_THROWS_AS(ss::ground_state(ss::GridDomain::interval(32, ss::Boundary::dirichlet), w, 0.1),
                  ss::ValidationError);
  const ss::GridDomain d = ss::GridDomain::interval(32, ss::Boundary::neumann);
  CHECK_THROWS_AS(ss::ground_state(d, w, 0.0), ss::ValidationError);
  CHECK_THROWS_AS(ss::ground_state(d, w, 2.0), ss::ValidationError);
  CHECK_THROWS_AS(ss::ground_state(d, Eigen::VectorXd::Constant(d.size(), -1.0), 0.1), ss::ValidationError);
  CHECK_THROWS_AS(ss::fit_semiclassical_exponent(d, w, {1e-3, 1e-2, 1e-1}), ss::ValidationError);
  CHECK_THROWS_AS(ss::fit_semiclassical_exponent(d, w, ss::testing::logspace(1e-2, 1e-1, 8)),
                  ss::ValidationError);
  CHECK_THROWS_AS(ss::fit_semiclassical_exponent(d, ss::get_profile("constant"), ss::default_sigma_grid()),
                  ss::NumericalError);
}
