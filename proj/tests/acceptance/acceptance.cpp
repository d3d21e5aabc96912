// End-to-end acceptance run: one PASS/FAIL line per criterion, exit status 0
// only when every criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "shearspec/evolve.hpp"
#include "shearspec/fitting.hpp"
#include "shearspec/geometry.hpp"
#include "shearspec/hypoco.hpp"
#include "shearspec/profiles.hpp"
#include "shearspec/resolvent.hpp"
#include "shearspec/semiclassical.hpp"
#include "shearspec/sweep.hpp"

#include "../support/random_fields.hpp"

namespace ss = shearspec;
using ss::testing::logspace;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  return ss::fit_power_law(x, y).slope;
}

double psi(const ss::VelocityProfile& p, int n, double nu, double k,
           std::optional<ss::Boundary> bc = std::nullopt) {
  return ss::pseudospectral_abscissa(ss::sweep_domain(p, n, bc), p, nu, k).psi;
}

// 1. Psi exponent in nu at k = 1.
Outcome criterion_nu_exponent() {
  struct Case {
    const char* profile;
    double expected;
    double tol;
  };
  const Case cases[] = {{"couette", 1.0 / 3.0, 0.05},
                        {"poiseuille", 0.5, 0.05},
                        {"kolmogorov", 0.5, 0.05},
                        {"monomial_m:4", 2.0 / 3.0, 0.07}};
  const auto nus = logspace(1e-5, 1e-2, 8);
  Outcome out{true, ""};
  for (const Case& c : cases) {
    const ss::VelocityProfile p = ss::parse_profile(c.profile);
    std::vector<double> values;
    for (double nu : nus) values.push_back(psi(p, 1024, nu, 1.0));
    const double s = slope(nus, values);
    const bool ok = std::abs(s - c.expected) <= c.tol;
    out.pass = out.pass && ok;
    out.detail += std::string(c.profile) + " slope " + fmt(s) + (ok ? "" : " (expected " + fmt(c.expected) + ")") + "; ";
  }
  return out;
}

// 2. Psi exponent in k at nu = 1e-4.
Outcome criterion_k_exponent() {
  const auto ks = logspace(1.0, 64.0, 7);
  Outcome out{true, ""};
  for (const char* name : {"couette", "poiseuille"}) {
    const ss::VelocityProfile p = ss::parse_profile(name);
    const double expected = 2.0 / (p.m_index() + 2.0);
    std::vector<double> values;
    for (double k : ks) values.push_back(psi(p, 1024, 1e-4, k));
    const double s = slope(ks, values);
    const bool ok = std::abs(s - expected) <= 0.07;
    out.pass = out.pass && ok;
    out.detail += std::string(name) + " slope " + fmt(s) + " vs " + fmt(expected) + "; ";
  }
  return out;
}

// 3. Taylor regime: Psi ~ C k^2 / nu.
Outcome criterion_taylor() {
  const ss::VelocityProfile p = ss::get_profile("couette");
  const auto ks = logspace(1.0 / 64.0, 1.0 / 8.0, 4);
  std::vector<double> at1, at2;
  for (double k : ks) {
    at1.push_back(psi(p, 512, 1.0, k));
    at2.push_back(psi(p, 512, 2.0, k));
  }
  const ss::LineFit f1 = ss::fit_power_law(ks, at1);
  const ss::LineFit f2 = ss::fit_power_law(ks, at2);
  const double ratio = std::exp(f2.intercept - f1.intercept);
  const bool ok = std::abs(f1.slope - 2.0) <= 0.1 && std::abs(f2.slope - 2.0) <= 0.1 &&
                  std::abs(ratio - 0.5) <= 0.15 * 0.5;
  return {ok, "k-slope " + fmt(f1.slope) + " (nu=1), " + fmt(f2.slope) + " (nu=2); C(2)/C(1) = " + fmt(ratio)};
}

struct MatrixCase {
  ss::VelocityProfile profile;
  double nu;
  double k;
};

std::vector<MatrixCase> twenty_cases() {
  std::vector<MatrixCase> out;
  for (const char* name : {"couette", "poiseuille"}) {
    for (double nu : {1e-2, 3e-3, 1e-3, 3e-4, 1e-4}) {
      for (double k : {1.0, 3.0}) out.push_back({ss::get_profile(name), nu, k});
    }
  }
  return out;
}

constexpr int kMatrixN = 256;

// 4. Gearhart-Pruss bound along Crank-Nicolson trajectories.
Outcome criterion_semigroup() {
  int violations = 0;
  double worst = 0.0;
  for (const MatrixCase& c : twenty_cases()) {
    const ss::GridDomain domain = ss::sweep_domain(c.profile, kMatrixN, std::nullopt);
    const double psi_value = ss::pseudospectral_abscissa(domain, c.profile, c.nu, c.k).psi;
    const double rate = ss::decay_rate_bound(c.nu, c.k, c.profile.m_index()).rate;
    const ss::ScalarField g0 = ss::default_initial_condition(domain, c.profile, 7);
    const ss::Trajectory traj =
        ss::evolve(domain, c.profile, c.nu, c.k, g0, 5.0 / rate, ss::default_time_step(domain, c.profile, c.nu, c.k, rate, 0.05));
    for (std::size_t i = 0; i < traj.samples(); ++i) {
      const double bound = ss::gearhart_pruss_bound(psi_value, traj.times[i]) * traj.norms[0];
      worst = std::max(worst, traj.norms[i] / bound);
      if (traj.norms[i] > bound * (1.0 + 1e-12)) ++violations;
    }
  }
  return {violations == 0, std::to_string(violations) + " violations; max ||g(t)|| / bound = " + fmt(worst)};
}

// 5. Witness upper bound sandwiches the computed Psi.
Outcome criterion_sandwich() {
  int failures = 0;
  double tightest = std::numeric_limits<double>::infinity();
  for (const MatrixCase& c : twenty_cases()) {
    const ss::GridDomain domain = ss::sweep_domain(c.profile, kMatrixN, std::nullopt);
    const double psi_value = ss::pseudospectral_abscissa(domain, c.profile, c.nu, c.k).psi;
    const int m = c.profile.m_index();
    const double ell = std::min(0.5, 2.0 * std::pow(c.nu / c.k, 1.0 / (m + 2.0)));
    const double slope_max = c.profile.family() == "couette" ? 1.0 : 4.0;
    const double bound = ss::upper_bound_witness(domain, c.profile, c.nu, c.k, ell, slope_max * ell);
    tightest = std::min(tightest, bound / psi_value);
    if (!(bound >= psi_value)) ++failures;
  }
  return {failures == 0, std::to_string(failures) + " failures; min witness / Psi = " + fmt(tightest)};
}

// 6. Phi monotone with the calibrated beta0; Phi-rate / lambda in a factor-5 band.
Outcome criterion_hypocoercivity() {
  Outcome out{true, ""};
  struct Case {
    const char* profile;
    ss::Boundary bc;
  };
  for (const Case& c : {Case{"kolmogorov", ss::Boundary::periodic},
                        Case{"couette", ss::Boundary::dirichlet}}) {
    const ss::VelocityProfile p = ss::get_profile(c.profile);
    const double beta0 = p.calibrated_beta0().value_or(0.0);
    const ss::GridDomain domain = ss::sweep_domain(p, 0, c.bc);
    const ss::ScalarField g0 = ss::default_initial_condition(domain, p);
    bool monotone = true;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double nu : {1e-4, 1e-3, 1e-2}) {
      const ss::HypocoParams params = ss::choose_parameters(nu, 1.0, p.m_index(), beta0);
      const double rate = ss::hypoco_rate(nu, 1.0, p.m_index(), beta0);
      const ss::Trajectory traj = ss::phi_trajectory(domain, p, params, g0, 3.0 / rate, ss::default_time_step(domain, p, nu, 1.0, rate, 0.025));
      const ss::PhiDecay decay = ss::track_phi_decay(traj, params, p);
      monotone = monotone && decay.monotone;
      lo = std::min(lo, decay.rate_fit / rate);
      hi = std::max(hi, decay.rate_fit / rate);
    }
    const bool ok = monotone && hi <= 5.0 * lo;
    out.pass = out.pass && ok;
    out.detail += std::string(c.profile) + " beta0=" + fmt(beta0) + (monotone ? " monotone" : " NOT monotone") +
                  ", rate/lambda in [" + fmt(lo) + ", " + fmt(hi) + "]; ";
  }
  return out;
}

// 7. Energy identities converge at second order under joint refinement.
Outcome criterion_energy_audit() {
  Outcome out{true, ""};
  struct Case {
    const char* profile;
    ss::Boundary bc;
  };
  for (const Case& c : {Case{"poiseuille", ss::Boundary::dirichlet},
                        Case{"kolmogorov", ss::Boundary::periodic}}) {
    const ss::RefinementStudy study = ss::audit_refinement(ss::get_profile(c.profile), c.bc, 1e-2, 1.0);
    double worst = std::numeric_limits<double>::infinity();
    for (double o : study.order) worst = std::min(worst, o);
    const bool ok = worst >= 1.8;
    out.pass = out.pass && ok;
    out.detail += std::string(c.profile) + " orders {";
    for (std::size_t i = 0; i < 4; ++i) out.detail += (i ? ", " : "") + fmt(study.order[i], 3);
    out.detail += "}; ";
  }
  return out;
}

// 8. Semiclassical exponent and the harmonic oscillator.
Outcome criterion_semiclassical() {
  Outcome out{true, ""};
  for (const char* name : {"poiseuille", "couette"}) {
    const ss::VelocityProfile w = ss::get_profile(name);
    const ss::GridDomain domain = w.natural_domain(512, ss::Boundary::neumann);
    const ss::SemiclassicalFit f = ss::fit_semiclassical_exponent(domain, w, ss::default_sigma_grid());
    const double expected = (w.m_index() - 1.0) / w.m_index();
    const bool ok = std::abs(f.exponent - expected) <= 0.05;
    out.pass = out.pass && ok;
    out.detail += std::string(name) + " exponent " + fmt(f.exponent) + "; ";
  }
  double worst = 0.0;
  for (double sigma : logspace(1e-4, 1e-1, 4)) {
    const int n = ss::semiclassical_resolution(sigma, 20.0, 2000);
    const ss::GridDomain domain = ss::GridDomain::interval(n, ss::Boundary::neumann, -10.0, 10.0);
    Eigen::VectorXd potential(domain.size());
    for (ss::Index j = 0; j < domain.size(); ++j) potential[j] = std::pow(domain.node(j)[0], 2);
    const double lambda = ss::ground_state(domain, potential, sigma).lambda_min;
    worst = std::max(worst, std::abs(lambda / std::sqrt(sigma) - 1.0));
  }
  const bool ok = worst <= 0.02;
  out.pass = out.pass && ok;
  out.detail += "oscillator max |lambda/sqrt(sigma) - 1| = " + fmt(worst);
  return out;
}

// 9. Geometry property suite.
Outcome criterion_geometry() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Outcome out{true, ""};
  const auto record = [&](const std::string& name, int fails, double margin) {
    out.pass = out.pass && fails == 0;
    out.detail += name + " " + std::to_string(fails) + " fails (min slack " + fmt(margin) + "); ";
  };

  {  // annulus inequality on [-1, 1]^2
    const ss::GridDomain d = ss::GridDomain::rectangle(64, 64, ss::Boundary::dirichlet, {-1, -1}, {1, 1});
    const double tol = 10.0 * d.h(0) * d.h(0);
    int fails = 0;
    double margin = std::numeric_limits<double>::infinity();
    for (int t = 0; t < 100; ++t) {
      const ss::ScalarField g = ss::testing::random_smooth_field(d, rng);
      double r1 = unit(rng), r2 = unit(rng);
      if (r1 > r2) std::swap(r1, r2);
      const double res = ss::annulus_inequality_residual(g, r1, r2) / std::pow(ss::norm(g), 2);
      margin = std::min(margin, res);
      if (res < -tol) ++fails;
    }
    record("annulus", fails, margin);
  }

  const auto morse = [&](const char* name, double constant) {
    const ss::VelocityProfile v = ss::get_profile(name, std::vector<double>{2.0});
    const ss::GridDomain d = v.natural_domain(128);
    const double tol = 10.0 * d.h(0) * d.h(0);
    const Eigen::VectorXd values = v.sample(d);
    const double lo = values.minCoeff() + v.shift(), hi = values.maxCoeff() + v.shift();
    int fails = 0;
    double margin = std::numeric_limits<double>::infinity();
    for (int t = 0; t < 100; ++t) {
      const ss::ScalarField g = ss::testing::random_smooth_field(d, rng);
      const double lambda = lo + (hi - lo) * unit(rng);
      const double delta = 0.02 + 0.23 * unit(rng);
      const ss::Mask e = ss::level_set_mask(d, v, lambda, delta, 2);
      const ss::Mask ee = ss::neighbourhood(d, e, delta);
      const double scale = std::pow(ss::norm(g), 2);
      const double slack = (constant * delta * ss::norm_gradient_product(g) - ss::set_integral(g, ee)) / scale;
      margin = std::min(margin, slack);
      if (slack < -tol) ++fails;
    }
    record(name, fails, margin);
  };
  morse("radial_m", 2.0 * (1.0 + std::sqrt(3.0)));
  morse("saddle", 4.0 * (2.0 + std::sqrt(2.0)));

  {  // neighbourhood of the graph of |y1 - 1/2| on the unit square
    const ss::GridDomain d = ss::GridDomain::rectangle(128, 128, ss::Boundary::dirichlet, {0, 0}, {1, 1});
    const double tol = 10.0 * d.h(0) * d.h(0);
    int fails = 0;
    double margin = std::numeric_limits<double>::infinity();
    for (int t = 0; t < 100; ++t) {
      const ss::ScalarField g = ss::testing::random_smooth_field(d, rng);
      const double delta = 0.02 + 0.2 * unit(rng);
      const ss::Mask band = ss::indicator_mask(d, [delta](const ss::Point& y) {
        // distance to the graph {(s, |s|)} in coordinates centred at y1 = 1/2
        const double x = y[0] - 0.5, z = y[1];
        const auto seg = [&](double sx) {
          double s = (x + sx * z) / 2.0;
          if (sx * s < 0.0) s = 0.0;
          return std::hypot(x - s, z - sx * s);
        };
        return std::min(seg(1.0), seg(-1.0)) < delta;
      });
      const double scale = std::pow(ss::norm(g), 2);
      const double slack =
          (2.0 * std::sqrt(2.0) * delta * ss::norm_gradient_product(g) - ss::set_integral(g, band)) / scale;
      margin = std::min(margin, slack);
      if (slack < -tol) ++fails;
    }
    record("lipschitz-graph", fails, margin);
  }

  {  // H1-thin mid-slab on the torus, kappa = 1/2, c0 = 4
    const ss::GridDomain d = ss::GridDomain::torus2d(64, 64);
    int fails = 0;
    double worst_theta = 0.0;
    for (double delta : {0.025, 0.05, 0.1}) {
      const auto slab = [delta](const ss::Point& y) { return std::abs(y[0] - 0.5) < delta; };
      const ss::ThinnessReport r = ss::h1_thin_constant(slab, delta, 4.0, d);
      worst_theta = std::max(worst_theta, r.theta);
      if (!r.passed) ++fails;
      // no random field may beat the computed optimum
      const ss::Mask set = ss::indicator_mask(d, slab);
      const ss::FaceOperators faces = ss::face_operators(d);
      for (int t = 0; t < 100 / 3 + 1; ++t) {
        const ss::ScalarField g = ss::testing::random_smooth_field(d, rng);
        const double gn = ss::gradient_norm(faces, g.values);
        const double ratio =
            ss::set_integral(g, set) / (std::pow(ss::norm(g), 2) + 4.0 * delta * delta * gn * gn);
        if (ratio > r.theta * (1.0 + 1e-8)) ++fails;
      }
    }
    out.pass = out.pass && fails == 0;
    out.detail += "h1-thin max theta " + fmt(worst_theta) + ", " + std::to_string(fails) + " fails; ";
  }

  {  // 1-D linear law |E^m_{lambda,delta}| <= C delta, uniform over 32 levels
    double worst = 0.0;
    bool finite = true;
    for (int m = 1; m <= 4; ++m) {
      const ss::VelocityProfile v = ss::get_profile("monomial_m", std::vector<double>{double(m)});
      const double lo = m % 2 == 0 ? 0.0 : -std::pow(0.5, m), hi = std::pow(0.5, m);
      std::vector<double> deltas;
      for (int i = 0; i < 10; ++i) deltas.push_back(0.02 * (i + 1));
      for (int l = 0; l < 32; ++l) {
        const double lambda = lo + (hi - lo) * l / 31.0;
        std::vector<double> measures;
        for (double delta : deltas) {
          const double measure = ss::level_set_measure({v, lambda, delta, m}, true);
          measures.push_back(measure);
          worst = std::max(worst, measure / delta);
        }
        finite = finite && std::isfinite(ss::fit_line(deltas, measures).slope);
      }
    }
    const bool ok = finite && worst <= 10.0;
    out.pass = out.pass && ok;
    out.detail += "linear law C = " + fmt(worst);
  }
  return out;
}

// 10. Iterative solvers agree with dense decompositions for N <= 2048.
Outcome criterion_oracles() {
  double worst_sigma = 0.0, worst_ground = 0.0;
  struct Case {
    const char* profile;
    int n;
    double nu, k, lambda;
  };
  const Case cases[] = {{"couette", 256, 1e-3, 1.0, 0.1},
                        {"poiseuille", 1024, 1e-4, 2.0, 0.2},
                        {"couette", 2048, 1e-5, 1.0, 0.0},
                        {"kolmogorov", 32, 1e-3, 1.0, 0.3}};
  for (const Case& c : cases) {
    const ss::VelocityProfile p = ss::get_profile(c.profile);
    const ss::GridDomain domain = p.natural_domain(c.n);
    const ss::OperatorMatrix op = ss::assemble(domain, p, c.nu, c.k, c.lambda);
    const double dense = ss::smallest_singular_value(op, {ss::SigmaMethod::dense_svd}).sigma;
    const double iterative = ss::smallest_singular_value(op, {ss::SigmaMethod::inverse_iteration}).sigma;
    worst_sigma = std::max(worst_sigma, std::abs(iterative - dense) / dense);
  }
  for (int n : {256, 1024, 2048}) {
    const ss::VelocityProfile w = ss::get_profile("poiseuille");
    const ss::GridDomain domain = w.natural_domain(n, ss::Boundary::neumann);
    const double sigma = 1e-3;
    const double iterative = ss::ground_state(domain, w, sigma).lambda_min;
    const Eigen::MatrixXd a = Eigen::MatrixXd(ss::schrodinger_matrix(domain, ss::gradient_potential(domain, w), sigma));
    const double dense = ss::dense::smallest_symmetric_eigenvalue(a);
    worst_ground = std::max(worst_ground, std::abs(iterative - dense) / dense);
  }
  const bool ok = worst_sigma <= 1e-8 && worst_ground <= 1e-8;
  return {ok, "max relative gap sigma_min " + fmt(worst_sigma, 3) + ", ground state " + fmt(worst_ground, 3)};
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"nu-exponent", criterion_nu_exponent},
      {"k-exponent", criterion_k_exponent},
      {"taylor-regime", criterion_taylor},
      {"semigroup-bound", criterion_semigroup},
      {"witness-sandwich", criterion_sandwich},
      {"hypocoercivity", criterion_hypocoercivity},
      {"energy-audit", criterion_energy_audit},
      {"semiclassical", criterion_semiclassical},
      {"geometry", criterion_geometry},
      {"oracle-equivalence", criterion_oracles},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("%s %2zu %-19s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
