// shearspec command-line front end.
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "shearspec/errors.hpp"
#include "shearspec/evolve.hpp"
#include "shearspec/geometry.hpp"
#include "shearspec/hypoco.hpp"
#include "shearspec/resolvent.hpp"
#include "shearspec/semiclassical.hpp"
#include "shearspec/sweep.hpp"

namespace ss = shearspec;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

struct Output {
  std::string path;
  std::unique_ptr<std::ofstream> file;

  std::ostream& stream() {
    if (path.empty() || path == "-") return std::cout;
    if (!file) {
      file = std::make_unique<std::ofstream>(path);
      if (!*file) throw ss::ValidationError("cannot write to '" + path + "'");
    }
    return *file;
  }
};

std::optional<ss::Boundary> boundary(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return ss::parse_boundary(text);
}

std::string num(double x) {
  std::ostringstream s;
  s << std::setprecision(12) << x;
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectra, evolution and hypocoercivity checks for passive scalars in shear flows"};
  app.set_version_flag("--version", std::string(ss::version()));
  app.require_subcommand(1);
  Output out;
  app.add_option("--output,-o", out.path, "Output file (default stdout)");

  // geometry
  auto* geo = app.add_subcommand("geometry", "Measure thickened level sets of a profile");
  std::string geo_profile = "couette";
  double geo_lambda = 0.5, geo_delta = 0.1;
  int geo_m = 1, geo_resolution = 0;
  bool geo_thickened = false;
  geo->add_option("--profile", geo_profile, "Profile name[:params]");
  geo->add_option("--lambda", geo_lambda, "Level of the raw profile")->required();
  geo->add_option("--delta", geo_delta, "Thickness delta")->required();
  geo->add_option("--m", geo_m, "Exponent of the thickening |v - lambda| < delta^m");
  geo->add_flag("--thickened", geo_thickened, "Also measure the delta-neighbourhood");
  geo->add_option("--resolution", geo_resolution, "Points per axis (0: default)");

  // psi
  auto* psi = app.add_subcommand("psi", "Pseudospectral abscissa Psi(nu, k)");
  std::string psi_profile = "couette", psi_bc, psi_method = "inverse_iteration";
  double psi_nu = 1e-3, psi_k = 1.0;
  int psi_n = 0, psi_scan = 64, psi_transverse = 4;
  psi->add_option("--profile", psi_profile, "Profile name[:params]");
  psi->add_option("--nu", psi_nu, "Diffusivity")->required();
  psi->add_option("--k", psi_k, "Streamwise wavenumber")->required();
  psi->add_option("--n", psi_n, "Points per axis (0: default)");
  psi->add_option("--bc", psi_bc, "neumann | dirichlet | periodic");
  psi->add_option("--scan-points", psi_scan, "Coarse lambda scan points");
  psi->add_option("--method", psi_method, "automatic | dense_svd | inverse_iteration");
  psi->add_option("--transverse-n", psi_transverse, "Second-axis points for y1-only torus profiles");

  // evolve
  auto* evo = app.add_subcommand("evolve", "Crank-Nicolson evolution of one Fourier mode");
  std::string evo_profile = "couette", evo_bc;
  double evo_nu = 1e-3, evo_k = 1.0, evo_dt = 0.0, evo_t_end = 0.0;
  int evo_n = 0;
  unsigned evo_seed = 1;
  evo->add_option("--profile", evo_profile, "Profile name[:params]");
  evo->add_option("--nu", evo_nu, "Diffusivity")->required();
  evo->add_option("--k", evo_k, "Streamwise wavenumber")->required();
  evo->add_option("--n", evo_n, "Points per axis (0: default)");
  evo->add_option("--bc", evo_bc, "neumann | dirichlet | periodic");
  evo->add_option("--dt", evo_dt, "Time step (default 0.05 / lambda_{nu,k}, capped for accuracy)");
  evo->add_option("--t-end", evo_t_end, "Final time (default 5 / lambda_{nu,k})");
  evo->add_option("--seed", evo_seed, "Seed of the initial condition");

  // hypo
  auto* hypo = app.add_subcommand("hypo", "Track the hypocoercivity functional Phi");
  std::string hypo_profile = "poiseuille", hypo_bc;
  double hypo_nu = 1e-3, hypo_k = 1.0, hypo_beta0 = 0.0, hypo_dt = 0.0, hypo_t_end = 0.0;
  int hypo_m = 0, hypo_n = 0;
  bool hypo_calibrate = false;
  hypo->add_option("--profile", hypo_profile, "Profile name[:params]");
  hypo->add_option("--nu", hypo_nu, "Diffusivity");
  hypo->add_option("--k", hypo_k, "Streamwise wavenumber");
  hypo->add_option("--m", hypo_m, "Degeneracy index (default: the profile's)");
  hypo->add_option("--beta0", hypo_beta0, "Regime seed (default: calibrated value)");
  hypo->add_option("--dt", hypo_dt, "Time step (default 0.025 / lambda, capped for accuracy)");
  hypo->add_option("--t-end", hypo_t_end, "Final time (default 3 / lambda)");
  hypo->add_option("--n", hypo_n, "Points per axis (0: default)");
  hypo->add_option("--bc", hypo_bc, "dirichlet | periodic");
  hypo->add_flag("--calibrate", hypo_calibrate, "Print the calibrated beta0 and exit");

  // semiclassical
  auto* semi = app.add_subcommand("semiclassical", "Ground state of -sigma Delta + |grad w|^2");
  std::string semi_profile = "poiseuille", semi_bc;
  double semi_min = 1e-5, semi_max = 1e-1;
  int semi_points = 9, semi_n = 0;
  semi->add_option("--profile", semi_profile, "Profile used as w");
  semi->add_option("--sigma-min", semi_min, "Smallest sigma");
  semi->add_option("--sigma-max", semi_max, "Largest sigma");
  semi->add_option("--points", semi_points, "Log-spaced sigma values");
  semi->add_option("--bc", semi_bc, "neumann | periodic");
  semi->add_option("--n", semi_n, "Base points per axis (0: default)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep from a config file");
  std::string sweep_config, sweep_format = "jsonl";
  sweep->add_option("--config", sweep_config, "Config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--format", sweep_format, "Echo records to --output as jsonl or csv")
      ->check(CLI::IsMember({"jsonl", "csv"}));

  // fit
  auto* fit = app.add_subcommand("fit", "Fit scaling exponents to sweep records");
  std::string fit_input, fit_regime = "enhanced", fit_quantity = "psi";
  bool fit_keep_all = false;
  fit->add_option("--input", fit_input, "Records file (JSON lines)")->required()->check(CLI::ExistingFile);
  fit->add_option("--regime", fit_regime, "enhanced | taylor");
  fit->add_option("--quantity", fit_quantity, "psi | rate_fit");
  fit->add_flag("--keep-under-resolved", fit_keep_all, "Do not drop under-resolved rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    std::ostream& os = out.stream();
    os << std::setprecision(12);

    if (*geo) {
      ss::LevelSetQuery q{ss::parse_profile(geo_profile), geo_lambda, geo_delta, geo_m};
      const double e = ss::level_set_measure(q, false, geo_resolution);
      os << "profile,lambda,delta,m,measure_E,measure_EE\n";
      os << geo_profile << ',' << num(geo_lambda) << ',' << num(geo_delta) << ',' << geo_m << ','
         << num(e) << ',';
      if (geo_thickened) os << num(ss::level_set_measure(q, true, geo_resolution));
      os << '\n';
    } else if (*psi) {
      const auto t0 = std::chrono::steady_clock::now();
      const ss::VelocityProfile p = ss::parse_profile(psi_profile);
      const ss::GridDomain domain = ss::sweep_domain(p, psi_n, boundary(psi_bc), psi_transverse);
      ss::PsiOptions options;
      options.scan_points = psi_scan;
      options.sigma.method = ss::parse_sigma_method(psi_method);
      const ss::PsiResult r = ss::pseudospectral_abscissa(domain, p, psi_nu, psi_k, options);
      os << "profile,nu,k,psi,lambda_star,method,seconds\n";
      os << psi_profile << ',' << num(psi_nu) << ',' << num(psi_k) << ',' << num(r.psi) << ','
         << num(r.lambda_star) << ',' << ss::to_string(r.method) << ',' << num(seconds_since(t0))
         << '\n';
    } else if (*evo) {
      const ss::VelocityProfile p = ss::parse_profile(evo_profile);
      const ss::GridDomain domain = ss::sweep_domain(p, evo_n, boundary(evo_bc));
      const ss::DecayBound bound = ss::decay_rate_bound(evo_nu, evo_k, p.m_index());
      const double dt = evo_dt > 0.0 ? evo_dt : ss::default_time_step(domain, p, evo_nu, evo_k, bound.rate, 0.05);
      const double t_end = evo_t_end > 0.0 ? evo_t_end : 5.0 / bound.rate;
      const ss::ScalarField g0 = ss::default_initial_condition(domain, p, evo_seed);
      ss::EvolveOptions options;
      options.stride = 0;
      const ss::Trajectory traj = ss::evolve(domain, p, evo_nu, evo_k, g0, t_end, dt, options);
      os << "t,norm,grad_norm\n";
      for (std::size_t i = 0; i < traj.samples(); ++i) {
        os << num(traj.times[i]) << ',' << num(traj.norms[i]) << ',' << num(traj.grad_norms[i]) << '\n';
      }
      const ss::DecayFit f = ss::fit_decay_rate(traj);
      os << "\nrate_fit,c1_fit,lambda_formula,regime,dt,t_end\n";
      os << num(f.rate_fit) << ',' << num(f.c1_fit) << ',' << num(bound.rate) << ','
         << ss::to_string(bound.regime) << ',' << num(dt) << ',' << num(t_end) << '\n';
    } else if (*hypo) {
      const ss::VelocityProfile p = ss::parse_profile(hypo_profile);
      const auto bc = boundary(hypo_bc);
      if (hypo_calibrate) {
        const ss::Boundary wall = bc ? *bc : p.default_boundary();
        os << "profile,beta0\n" << hypo_profile << ',' << num(ss::calibrate_beta0(p, wall)) << '\n';
        return 0;
      }
      const int m = hypo_m > 0 ? hypo_m : p.m_index();
      const double beta0 = hypo_beta0 > 0.0 ? hypo_beta0 : p.calibrated_beta0().value_or(0.0);
      if (!(beta0 > 0.0)) throw ss::ValidationError("no calibrated beta0 for this profile; pass --beta0");
      const ss::GridDomain domain = ss::sweep_domain(p, hypo_n, bc);
      const ss::HypocoParams params = ss::choose_parameters(hypo_nu, hypo_k, m, beta0);
      const double rate = ss::hypoco_rate(hypo_nu, hypo_k, m, beta0);
      const double dt = hypo_dt > 0.0 ? hypo_dt : ss::default_time_step(domain, p, hypo_nu, hypo_k, rate, 0.025);
      const double t_end = hypo_t_end > 0.0 ? hypo_t_end : 3.0 / rate;
      const ss::ScalarField g0 = ss::default_initial_condition(domain, p);
      const ss::Trajectory traj = ss::phi_trajectory(domain, p, params, g0, t_end, dt);
      const ss::PhiDecay decay = ss::track_phi_decay(traj, params, p);
      os << "t,phi,comp_l2,comp_grad,comp_cross,comp_weight\n";
      for (std::size_t i = 0; i < traj.samples(); ++i) {
        os << num(traj.times[i]);
        for (const char* key : {"phi", "comp_l2", "comp_grad", "comp_cross", "comp_weight"}) {
          os << ',' << num(traj.series.at(key)[i]);
        }
        os << '\n';
      }
      os << "\nrate_fit,monotone,lambda,regime,alpha,beta,gamma,l2_prefactor_fit,prefactor_shape\n";
      os << num(decay.rate_fit) << ',' << (decay.monotone ? "true" : "false") << ',' << num(rate)
         << ',' << ss::to_string(params.regime) << ',' << num(params.alpha) << ','
         << num(params.beta) << ',' << num(params.gamma) << ',' << num(decay.l2_prefactor_fit)
         << ',' << num(decay.prefactor_shape) << '\n';
    } else if (*semi) {
      const ss::VelocityProfile p = ss::parse_profile(semi_profile);
      auto bc = boundary(semi_bc);
      if (!bc && p.default_boundary() == ss::Boundary::dirichlet) bc = ss::Boundary::neumann;
      const ss::GridDomain domain = ss::sweep_domain(p, semi_n, bc);
      if (semi_points < 2 || !(semi_min > 0.0) || !(semi_max > semi_min)) {
        throw ss::ValidationError("need sigma-min < sigma-max and at least two points");
      }
      std::vector<double> sigmas;
      for (int i = 0; i < semi_points; ++i) {
        sigmas.push_back(semi_min * std::pow(semi_max / semi_min, i / (semi_points - 1.0)));
      }
      const ss::SemiclassicalFit f = ss::fit_semiclassical_exponent(domain, p, sigmas);
      os << "sigma,lambda_min,residual\n";
      for (const auto& s : f.states) {
        os << num(s.sigma) << ',' << num(s.lambda_min) << ',' << num(s.eigvec_norm_check) << '\n';
      }
      os << "\nexponent,expected,c_sp_fit\n";
      const int m = p.m_index();
      os << num(f.exponent) << ',' << num((m - 1.0) / m) << ',' << num(f.c_sp_fit) << '\n';
    } else if (*sweep) {
      const ss::SweepConfig cfg = ss::parse_config(sweep_config);
      const ss::SweepResult r = ss::run_sweep(cfg, &std::cerr);
      std::cerr << r.computed << " computed, " << r.cached << " cached -> " << cfg.output_path.string()
                << '\n';
      if (!out.path.empty()) {
        if (sweep_format == "csv") {
          ss::write_csv(os, r.records);
        } else {
          for (const auto& rec : r.records) os << ss::to_json_line(rec) << '\n';
        }
      }
      for (const auto& rec : r.records) {
        if (rec.status.starts_with("numerical error")) return kExitNumerical;
      }
    } else if (*fit) {
      const auto records = ss::read_records(fit_input);
      const ss::Regime regime = fit_regime == "taylor" ? ss::Regime::taylor : ss::Regime::enhanced;
      if (fit_regime != "taylor" && fit_regime != "enhanced") {
        throw ss::ValidationError("--regime must be enhanced or taylor");
      }
      const ss::ScalingFit f = ss::fit_scaling(records, regime, ss::parse_scaling_quantity(fit_quantity),
                                               !fit_keep_all);
      os << "quantity,regime,p_nu,p_k,c_fit,r2,used,filtered\n";
      os << fit_quantity << ',' << fit_regime << ',' << (f.has_p_nu ? num(f.p_nu) : "") << ','
         << (f.has_p_k ? num(f.p_k) : "") << ',' << num(f.c_fit) << ',' << num(f.r2) << ','
         << f.used << ',' << f.filtered << '\n';
    }
  } catch (const ss::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ss::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
