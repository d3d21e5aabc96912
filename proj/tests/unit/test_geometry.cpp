#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "shearspec/errors.hpp"
#include "shearspec/geometry.hpp"

#include "../support/random_fields.hpp"

namespace ss = shearspec;

namespace {

ss::LevelSetQuery query(const char* name, double lambda, double delta, int m) {
  ss::LevelSetQuery q{ss::get_profile(name)};
  q.lambda = lambda;
  q.delta = delta;
  q.m = m;
  return q;
}

// Largest eigenvalue of chi (I + c delta^2 K)^{-1} chi by dense algebra.
double dense_theta(const ss::GridDomain& d, const ss::Mask& set, double delta, double c0) {
  const Eigen::MatrixXd k = Eigen::MatrixXd(ss::laplacian(d));
  const Eigen::MatrixXd pencil = Eigen::MatrixXd::Identity(d.size(), d.size()) + c0 * delta * delta * k;
  const Eigen::MatrixXd chi = set.cast<double>().matrix().asDiagonal();
  const Eigen::MatrixXd op = chi * pencil.ldlt().solve(chi);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (op + op.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

}  // namespace

TEST_CASE("level-set measures on worked examples") {
  CHECK(ss::level_set_measure(query("couette", 0.5, 0.1, 1), false) == doctest::Approx(0.2).epsilon(1e-3));
  CHECK(ss::level_set_measure(query("couette", 0.5, 0.1, 1), true) == doctest::Approx(0.4).epsilon(1e-3));
  CHECK(ss::level_set_measure(query("couette", 2.0, 0.1, 1), false) == 0.0);
  CHECK(ss::level_set_measure(query("couette", 2.0, 0.1, 1), true) == 0.0);
  // raw Poiseuille is 4y(1 - y): |v - 1| < delta^2 iff |2y - 1| < delta
  const ss::VelocityProfile p = ss::get_profile("poiseuille");
  REQUIRE(p.raw({0.5, 0.0}) == doctest::Approx(1.0));
  REQUIRE(p.raw({0.25, 0.0}) == doctest::Approx(0.75));
  CHECK(ss::level_set_measure(query("poiseuille", 1.0, 0.1, 2), false) == doctest::Approx(0.1).epsilon(1e-3));
}

TEST_CASE("level-set measure grows with delta and with thickening") {
  for (const char* name : {"couette", "poiseuille", "kolmogorov", "saddle"}) {
    double previous = 0.0;
    for (double delta : {0.02, 0.05, 0.1, 0.2}) {
      const ss::LevelSetQuery q = query(name, 0.0, delta, 1);
      const double plain = ss::level_set_measure(q, false, 256);
      const double thick = ss::level_set_measure(q, true, 256);
      CAPTURE(name);
      CAPTURE(delta);
      CHECK(plain >= previous);
      CHECK(thick >= plain);
      previous = plain;
    }
  }
}

TEST_CASE("level-set preconditions") {
  CHECK_THROWS_AS(ss::level_set_measure(query("couette", 0.5, 0.3, 1), false), ss::ValidationError);
  CHECK_THROWS_AS(ss::level_set_measure(query("couette", 0.5, 0.0, 1), false), ss::ValidationError);
  CHECK_THROWS_AS(ss::level_set_measure(query("couette", 0.5, 0.1, 0), false), ss::ValidationError);
  const ss::GridDomain d = ss::GridDomain::interval(16, ss::Boundary::neumann);
  CHECK_THROWS_AS(ss::level_set_mask(d, ss::get_profile("couette"), 0.5, 0.1, 0), ss::ValidationError);
}

TEST_CASE("distance transform matches brute force, including wrap-around") {
  std::mt19937_64 rng(9);
  std::bernoulli_distribution coin(0.03);
  for (const ss::GridDomain& d : {ss::GridDomain::torus2d(24, 16, 1.0, 0.5),
                                  ss::GridDomain::rectangle(20, 12, ss::Boundary::neumann, {0.0, 0.0}, {2.0, 1.0})}) {
    ss::Mask set(d.size());
    for (ss::Index j = 0; j < d.size(); ++j) set[j] = coin(rng);
    set[0] = true;
    const Eigen::VectorXd d2 = ss::squared_distance_to_set(d, set);
    for (ss::Index i = 0; i < d.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (ss::Index j = 0; j < d.size(); ++j) {
        if (!set[j]) continue;
        double s = 0.0;
        for (int a = 0; a < 2; ++a) {
          double diff = std::abs(d.node(i)[static_cast<std::size_t>(a)] - d.node(j)[static_cast<std::size_t>(a)]);
          if (d.periodic()) diff = std::min(diff, d.length(a) - diff);
          s += diff * diff;
        }
        best = std::min(best, s);
      }
      CHECK(d2[i] == doctest::Approx(best).epsilon(1e-12));
    }
  }
  const ss::GridDomain d = ss::GridDomain::interval(8, ss::Boundary::neumann);
  CHECK(std::isinf(ss::squared_distance_to_set(d, ss::Mask::Constant(d.size(), false))[3]));
}

TEST_CASE("H1 thinness of empty, full and slab sets") {
  const ss::GridDomain d = ss::GridDomain::interval(128, ss::Boundary::neumann);
  const ss::ThinnessReport empty = ss::h1_thin_constant(ss::Mask::Constant(d.size(), false), 0.1, 1.0, d);
  CHECK(empty.theta == 0.0);
  CHECK(empty.passed);
  const ss::ThinnessReport full = ss::h1_thin_constant(ss::Mask::Constant(d.size(), true), 0.1, 1.0, d);
  CHECK(full.theta == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_FALSE(full.passed);
  const auto slab = [](const ss::Point& y) { return std::abs(y[0] - 0.5) < 0.02; };
  const ss::ThinnessReport thin = ss::h1_thin_constant(slab, 0.1, 4.0, d);
  CHECK(thin.passed);
  CHECK(thin.theta == doctest::Approx(dense_theta(d, ss::indicator_mask(d, slab), 0.1, 4.0)).epsilon(1e-7));
}

TEST_CASE("H1 thinness agrees with a dense eigensolver on random sets") {
  std::mt19937_64 rng(21);
  std::bernoulli_distribution coin(0.2);
  const ss::GridDomain d = ss::GridDomain::torus2d(12, 10);
  for (int trial = 0; trial < 5; ++trial) {
    ss::Mask set(d.size());
    for (ss::Index j = 0; j < d.size(); ++j) set[j] = coin(rng);
    for (double c0 : {0.5, 2.0}) {
      const ss::ThinnessReport r = ss::h1_thin_constant(set, 0.2, c0, d);
      CHECK(r.theta == doctest::Approx(dense_theta(d, set, 0.2, c0)).epsilon(1e-7));
      CHECK(r.passed == (r.theta <= 0.5));
    }
  }
  CHECK_THROWS_AS(ss::h1_thin_constant(ss::Mask::Constant(d.size(), true), 0.1, 0.0, d), ss::ValidationError);
  CHECK_THROWS_AS(ss::h1_thin_constant(ss::Mask::Constant(d.size(), true), 0.1, 1.0, d, 1.0), ss::ValidationError);
  CHECK_THROWS_AS(ss::h1_thin_constant(ss::Mask::Constant(3, true), 0.1, 1.0, d), ss::ValidationError);
}

TEST_CASE("annulus inequality on random fields") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const ss::GridDomain d = ss::GridDomain::interval(512, ss::Boundary::dirichlet, -1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const ss::ScalarField g = ss::testing::random_smooth_field(d, rng, 6);
    const double r1 = 0.9 * unit(rng);
    const double r2 = r1 + (1.0 - r1) * unit(rng);
    CHECK(ss::annulus_inequality_residual(g, r1, r2) >= -1e-10);
    // an empty shell leaves nothing to bound
    CHECK(ss::annulus_inequality_residual(g, r1, r1) == 0.0);
    CHECK(ss::set_integral(g, ss::Mask::Constant(d.size(), true)) == doctest::Approx(ss::norm(g) * ss::norm(g)));
  }
  CHECK_THROWS_AS(ss::annulus_inequality_residual(ss::ScalarField::zeros(d), 0.5, 0.2), ss::ValidationError);
}
