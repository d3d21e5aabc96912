#include "shearspec/hypoco.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "shearspec/errors.hpp"

namespace shearspec {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double re_dot(const ComplexVector& a, const ComplexVector& b) {
  // Re sum a conj(b)
  return (a.array() * b.array().conjugate()).real().sum();
}

}  // namespace

HypocoParams choose_parameters(double nu, double k, int m, double seed,
                               std::optional<double> beta1) {
  if (m != 1 && m != 2) throw ValidationError("choose_parameters: only m = 1 or 2 (Morse case)");
  if (!(nu > 0.0)) throw ValidationError("choose_parameters: nu must be positive");
  if (k == 0.0) throw ValidationError("choose_parameters: k must be nonzero");
  if (!(seed > 0.0 && seed < 1.0)) throw ValidationError("choose_parameters: seed must lie in (0, 1)");
  if (beta1 && !(*beta1 > 0.0 && *beta1 < 1.0)) {
    throw ValidationError("choose_parameters: beta1 must lie in (0, 1)");
  }
  HypocoParams p;
  p.nu = nu;
  p.k = k;
  p.m = m;
  p.beta0 = seed;
  p.beta1 = beta1.value_or(seed);
  const double ak = std::abs(k);
  if (nu <= seed * ak) {
    p.regime = Regime::enhanced;
    p.beta = m == 2 ? seed / ak : seed * std::cbrt(nu) / std::pow(ak, 4.0 / 3.0);
  } else {
    p.regime = Regime::taylor;
    p.beta = p.beta1 / nu;
  }
  p.alpha = std::sqrt(p.beta * nu);
  p.gamma = 16.0 * std::pow(p.beta, 1.5) / std::sqrt(nu);
  return p;
}

double hypoco_rate(double nu, double k, int m, double beta0) {
  const double ak = std::abs(k);
  if (nu <= beta0 * ak) return std::pow(nu, m / (m + 2.0)) * std::pow(ak, 2.0 / (m + 2.0));
  return k * k / nu;
}

EnergyForms::EnergyForms(const GridDomain& domain, const VelocityProfile& profile)
    : domain_(domain),
      faces_(face_operators(domain)),
      node_grad_(node_gradient(domain)),
      stiffness_(laplacian(domain)) {
  if (profile.dim() != domain.dim()) throw ValidationError("EnergyForms: dimension mismatch");
  for (int axis = 0; axis < domain.dim(); ++axis) {
    const auto a = static_cast<std::size_t>(axis);
    const auto& pos = faces_.position[a];
    face_dv_[a].resize(static_cast<Index>(pos.size()));
    face_grad_norm2_[a].resize(static_cast<Index>(pos.size()));
    for (std::size_t f = 0; f < pos.size(); ++f) {
      const Eigen::Vector2d gv = profile.grad(pos[f]);
      face_dv_[a][static_cast<Index>(f)] = gv[axis];
      face_grad_norm2_[a][static_cast<Index>(f)] = gv.head(domain.dim()).squaredNorm();
    }
    node_dv_[a].resize(domain.size());
    node_hess_dv_[a].resize(domain.size());
  }
  node_lap_v_.resize(domain.size());
  const int d = domain.dim();
  for (Index j = 0; j < domain.size(); ++j) {
    const Point y = domain.node(j);
    const Eigen::Vector2d gv = profile.grad(y);
    const Eigen::Matrix2d hv = profile.hess(y);
    node_lap_v_[j] = hv.topLeftCorner(d, d).trace();
    for (int a = 0; a < d; ++a) {
      const auto au = static_cast<std::size_t>(a);
      node_dv_[au][j] = gv[a];
      double s = 0.0;
      for (int b = 0; b < d; ++b) s += hv(a, b) * gv[b];
      node_hess_dv_[au][j] = s;
    }
  }
}

double EnergyForms::l2(const ComplexVector& g) const {
  return domain_.cell_volume() * g.squaredNorm();
}

double EnergyForms::grad2(const ComplexVector& g) const {
  double s = 0.0;
  for (std::size_t a = 0; a < static_cast<std::size_t>(domain_.dim()); ++a) {
    const ComplexVector dg = faces_.gradient[a] * g;
    s += (faces_.weight[a].array() * dg.array().abs2()).sum();
  }
  return s;
}

double EnergyForms::lap2(const ComplexVector& g) const {
  return domain_.cell_volume() * (stiffness_ * g).squaredNorm();
}

double EnergyForms::cross(const ComplexVector& g, double k) const {
  double s = 0.0;
  for (std::size_t a = 0; a < static_cast<std::size_t>(domain_.dim()); ++a) {
    const ComplexVector dg = faces_.gradient[a] * g;
    const ComplexVector ag = faces_.average[a] * g;
    // Re(i k dv ag conj(dg)) = -k dv Im(ag conj(dg))
    const Eigen::ArrayXd im = (ag.array() * dg.array().conjugate()).imag();
    s += -k * (faces_.weight[a].array() * face_dv_[a].array() * im).sum();
  }
  return s;
}

double EnergyForms::weight2(const ComplexVector& g) const {
  double s = 0.0;
  for (std::size_t a = 0; a < static_cast<std::size_t>(domain_.dim()); ++a) {
    const ComplexVector ag = faces_.average[a] * g;
    s += (faces_.weight[a].array() * face_dv_[a].array().square() * ag.array().abs2()).sum();
  }
  return s;
}

double EnergyForms::weighted_grad2(const ComplexVector& g) const {
  double s = 0.0;
  for (std::size_t a = 0; a < static_cast<std::size_t>(domain_.dim()); ++a) {
    const ComplexVector dg = faces_.gradient[a] * g;
    s += (faces_.weight[a].array() * face_grad_norm2_[a].array() * dg.array().abs2()).sum();
  }
  return s;
}

double EnergyForms::advective_lap(const ComplexVector& g, double k) const {
  ComplexVector transport = ComplexVector::Zero(g.size());
  for (std::size_t a = 0; a < static_cast<std::size_t>(domain_.dim()); ++a) {
    transport.array() += node_dv_[a].array().cast<Complex>() * (node_grad_[a] * g).array();
  }
  const ComplexVector lap = -(stiffness_ * g);
  return domain_.cell_volume() * re_dot(Complex(0.0, k) * transport, lap);
}

double EnergyForms::curvature_lap(const ComplexVector& g, double k) const {
  const ComplexVector lap = -(stiffness_ * g);
  const ComplexVector weighted = Complex(0.0, k) * (node_lap_v_.array().cast<Complex>() * g.array()).matrix();
  return domain_.cell_volume() * re_dot(weighted, lap);
}

double EnergyForms::hessian_term(const ComplexVector& g) const {
  double s = 0.0;
  for (std::size_t a = 0; a < static_cast<std::size_t>(domain_.dim()); ++a) {
    const ComplexVector weighted = (node_hess_dv_[a].array().cast<Complex>() * g.array()).matrix();
    s += re_dot(weighted, node_grad_[a] * g);
  }
  return domain_.cell_volume() * s;
}

EnergyState EnergyForms::state(const ComplexVector& g, const HypocoParams& params) const {
  const double n2 = l2(g);
  const double d2 = grad2(g);
  const double w2 = weight2(g);
  const double k2 = params.k * params.k;
  EnergyState e;
  e.params = params;
  e.comp_l2 = 0.5 * n2;
  e.comp_grad = 0.5 * params.alpha * d2;
  e.comp_cross = params.beta * cross(g, params.k);
  e.comp_weight = 0.5 * params.gamma * k2 * w2;
  e.phi = e.comp_l2 + e.comp_grad + e.comp_cross + e.comp_weight;
  e.lower = (4.0 * n2 + 3.0 * params.alpha * d2 + 3.0 * params.gamma * k2 * w2) / 8.0;
  e.upper = (4.0 * n2 + 5.0 * params.alpha * d2 + 5.0 * params.gamma * k2 * w2) / 8.0;
  return e;
}

EnergyState energy_functional(const ScalarField& g, const HypocoParams& params,
                              const VelocityProfile& profile) {
  return EnergyForms(g.domain, profile).state(g.values, params);
}

double curvature_constant(const VelocityProfile& profile, const GridDomain& domain) {
  const int d = domain.dim();
  double sup = 0.0;
  for (Index j = 0; j < domain.size(); ++j) {
    const Eigen::MatrixXd hv = profile.hess(domain.node(j)).topLeftCorner(d, d);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hv, Eigen::EigenvaluesOnly);
    sup = std::max(sup, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  return 5.0 * sup;
}

AuditReport audit_energy_identities(const Trajectory& traj, const HypocoParams& params,
                                    const VelocityProfile& profile) {
  if (traj.snapshots.size() < 3) throw ValidationError("audit: need at least three snapshots");
  const GridDomain& domain = traj.snapshots.front().domain;
  if (domain.bc() == Boundary::neumann) {
    throw ValidationError("audit: the cross-term balance needs Dirichlet or periodic walls");
  }
  if (params.nu > 0.0 && (params.nu != traj.params.nu || params.k != traj.params.k)) {
    throw ValidationError("audit: parameters do not match the trajectory");
  }
  const double nu = traj.params.nu;
  const double k = traj.params.k;
  const EnergyForms forms(domain, profile);
  AuditReport report;
  const auto& t = traj.snapshot_times;
  for (std::size_t i = 1; i + 1 < traj.snapshots.size(); ++i) {
    const double left = t[i] - t[i - 1];
    const double right = t[i + 1] - t[i];
    if (!(left > 0.0) || std::abs(left - right) > 1e-9 * left) continue;
    const ComplexVector& gm = traj.snapshots[i - 1].values;
    const ComplexVector& g = traj.snapshots[i].values;
    const ComplexVector& gp = traj.snapshots[i + 1].values;
    auto ddt = [&](auto&& q) { return (q(gp) - q(gm)) / (2.0 * left); };

    const double d_l2 = ddt([&](const ComplexVector& x) { return forms.l2(x); });
    const double d_grad = ddt([&](const ComplexVector& x) { return forms.grad2(x); });
    const double d_cross = ddt([&](const ComplexVector& x) { return forms.cross(x, k); });
    const double d_weight = ddt([&](const ComplexVector& x) { return forms.weight2(x); });
    const double grad2 = forms.grad2(g);
    const double lap2 = forms.lap2(g);
    const double cross = forms.cross(g, k);
    const double weight2 = forms.weight2(g);
    const double wgrad2 = forms.weighted_grad2(g);
    const double adv = forms.advective_lap(g, k);
    const double curv = forms.curvature_lap(g, k);
    const double hess = forms.hessian_term(g);

    const std::array<std::array<double, 4>, 4> terms{{
        {0.5 * d_l2, nu * grad2, 0.0, 0.0},
        {0.5 * d_grad, nu * lap2, cross, 0.0},
        {d_cross, k * k * weight2, 2.0 * nu * adv, nu * curv},
        {0.5 * d_weight, nu * wgrad2, 2.0 * nu * hess, 0.0},
    }};
    for (std::size_t b = 0; b < 4; ++b) {
      double sum = 0.0;
      for (double term : terms[b]) {
        sum += term;
        report.scale[b] = std::max(report.scale[b], std::abs(term));
      }
      report.residual[b] = std::max(report.residual[b], std::abs(sum));
    }
    ++report.samples;
  }
  if (report.samples == 0) throw ValidationError("audit: no equally spaced snapshot triple");
  return report;
}

ScalarField audit_initial_condition(const GridDomain& domain) {
  ScalarField f = ScalarField::zeros(domain);
  const double pi = std::numbers::pi;
  for (Index j = 0; j < domain.size(); ++j) {
    const Point y = domain.node(j);
    Complex value = 1.0;
    for (int a = 0; a < domain.dim(); ++a) {
      const double s = (y[static_cast<std::size_t>(a)] - domain.origin(a)) / domain.length(a);
      if (domain.periodic()) {
        // the transverse axis of 2-D grids stays unresolved on purpose: data is constant there
        value *= a == 0 ? Complex(std::cos(2 * pi * s), 0.5 * std::sin(4 * pi * s)) : Complex(1.0);
      } else {
        value *= Complex(std::sin(pi * s), 0.5 * std::sin(2 * pi * s));
      }
    }
    f.values[j] = value;
  }
  f.values /= norm(f);
  return f;
}

RefinementStudy audit_refinement(const VelocityProfile& profile, Boundary bc, double nu, double k,
                                 const RefinementOptions& options) {
  if (bc == Boundary::neumann) throw ValidationError("audit: Neumann walls are not supported");
  if (options.levels < 2) throw ValidationError("audit: need at least two refinement levels");
  if (options.centres.empty() || options.centres.size() * 3 > kMaxSnapshots) {
    throw ValidationError("audit: between 1 and 10 audit centres");
  }
  RefinementStudy study;
  HypocoParams params;  // only nu and k matter for the balances
  params.nu = nu;
  params.k = k;
  for (int level = 0; level < options.levels; ++level) {
    const int n = options.base_n << level;
    const double dt = options.base_dt / static_cast<double>(1 << level);
    GridDomain domain = profile.dim() == 2
                            ? (bc == Boundary::periodic
                                   ? GridDomain::torus2d(n, options.transverse_n)
                                   : profile.natural_domain(n, bc).refined(n, options.transverse_n))
                            : profile.natural_domain(n, bc);
    EvolveOptions evolve_options;
    for (double c : options.centres) {
      evolve_options.snapshot_times.insert(evolve_options.snapshot_times.end(), {c - dt, c, c + dt});
    }
    const double t_end = *std::max_element(options.centres.begin(), options.centres.end()) + 2.0 * dt;
    const ScalarField g0 = audit_initial_condition(domain);
    const Trajectory traj = evolve(domain, profile, nu, k, g0, t_end, dt, evolve_options);
    study.levels.push_back(audit_energy_identities(traj, params, profile));
  }
  for (std::size_t b = 0; b < 4; ++b) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l + 1 < study.levels.size(); ++l) {
      const double coarse = study.levels[l].residual[b];
      const double fine = study.levels[l + 1].residual[b];
      const double floor = 1e-12 * std::max(study.levels[l].scale[b], 1e-300);
      const double ratio = coarse <= floor && fine <= floor ? std::numeric_limits<double>::infinity()
                                                            : coarse / fine;
      study.ratios[b].push_back(ratio);
      worst = std::min(worst, ratio);
    }
    study.order[b] = std::log2(worst);
  }
  return study;
}

Trajectory phi_trajectory(const GridDomain& domain, const VelocityProfile& profile,
                          const HypocoParams& params, const ScalarField& g0, double t_end,
                          double dt, int stride) {
  const auto forms = std::make_shared<EnergyForms>(domain, profile);
  EvolveOptions options;
  options.stride = stride;
  options.observer = [forms, params](double, const ComplexVector& g, Trajectory& traj) {
    const EnergyState e = forms->state(g, params);
    traj.series["phi"].push_back(e.phi);
    traj.series["comp_l2"].push_back(e.comp_l2);
    traj.series["comp_grad"].push_back(e.comp_grad);
    traj.series["comp_cross"].push_back(e.comp_cross);
    traj.series["comp_weight"].push_back(e.comp_weight);
  };
  return evolve(domain, profile, params.nu, params.k, g0, t_end, dt, options);
}

PhiDecay track_phi_decay(const Trajectory& traj, const HypocoParams& params,
                         const VelocityProfile& profile, double tolerance) {
  std::vector<double> times;
  std::vector<double> phi;
  std::vector<double> norms;
  if (auto it = traj.series.find("phi"); it != traj.series.end()) {
    phi = it->second;
    times = traj.times;
    norms = traj.norms;
  } else if (!traj.snapshots.empty()) {
    const EnergyForms forms(traj.snapshots.front().domain, profile);
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
      phi.push_back(forms.state(traj.snapshots[i].values, params).phi);
      times.push_back(traj.snapshot_times[i]);
      norms.push_back(norm(traj.snapshots[i]));
    }
  }
  if (phi.size() < 8 || phi.size() != times.size()) {
    throw ValidationError("track_phi_decay: fewer than 8 Phi samples");
  }
  if (traj.params.bc == Boundary::neumann) {
    throw ValidationError("track_phi_decay: Dirichlet or periodic walls only");
  }
  PhiDecay out;
  out.prefactor_shape = std::pow(1.0 + std::abs(params.k) / params.nu,
                                 (params.m - 1.0) / (params.m + 2.0));
  for (std::size_t i = 1; i < phi.size(); ++i) {
    const double increase = phi[i] - phi[i - 1];
    if (phi[i - 1] > 0.0) out.max_increase = std::max(out.max_increase, increase / phi[i - 1]);
    if (increase > tolerance * std::abs(phi[i - 1]) + 1e-300) out.monotone = false;
  }
  if (phi.front() == 0.0) {
    out.rate_fit = kNaN;
    out.l2_prefactor_fit = kNaN;
    return out;
  }
  out.rate_fit = fit_decay_rate(times, phi, phi.front()).rate_fit;
  const double horizon = 1.0 / hypoco_rate(params.nu, params.k, params.m, params.beta0);
  out.l2_prefactor_fit = kNaN;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < horizon) continue;
    const double value = norms[i] * std::exp(0.5 * out.rate_fit * times[i]) / norms.front();
    out.l2_prefactor_fit = std::isnan(out.l2_prefactor_fit) ? value : std::max(out.l2_prefactor_fit, value);
  }
  return out;
}

double calibrate_beta0(const VelocityProfile& profile, Boundary bc, const CalibrationOptions& options) {
  const int m = profile.m_index();
  if (m != 1 && m != 2) throw ValidationError("calibrate_beta0: profile must have m = 1 or 2");
  if (bc == Boundary::neumann) throw ValidationError("calibrate_beta0: Dirichlet or periodic walls only");
  GridDomain domain = profile.dim() == 2
                          ? GridDomain::torus2d(options.n > 0 ? options.n : 128, 4)
                          : profile.natural_domain(options.n > 0 ? options.n : 128, bc);
  const ScalarField g0 = default_initial_condition(domain, profile);
  for (double beta0 = options.start; beta0 >= options.floor; beta0 *= 0.5) {
    bool monotone = true;
    for (double nu : options.nus) {
      const HypocoParams params = choose_parameters(nu, options.k, m, beta0);
      const double rate = hypoco_rate(nu, options.k, m, beta0);
      const double t_end = options.horizon / rate;
      const double dt = default_time_step(domain, profile, nu, options.k, rate, 1.0 / options.steps_per_unit);
      const Trajectory traj = phi_trajectory(domain, profile, params, g0, t_end, dt);
      if (!track_phi_decay(traj, params, profile).monotone) {
        monotone = false;
        break;
      }
    }
    if (monotone) return beta0;
  }
  throw NumericalError("calibrate_beta0: no beta0 above the floor keeps Phi monotone");
}

}  // namespace shearspec
