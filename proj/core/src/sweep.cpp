#include "shearspec/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "shearspec/errors.hpp"
#include "shearspec/evolve.hpp"
#include "shearspec/hypoco.hpp"
#include "shearspec/semiclassical.hpp"

namespace shearspec {

using nlohmann::json;

#ifndef SHEARSPEC_VERSION
#define SHEARSPEC_VERSION "0.0.0"
#endif

std::string_view version() { return SHEARSPEC_VERSION; }

GridDomain sweep_domain(const VelocityProfile& profile, int n, std::optional<Boundary> bc,
                        int transverse_n) {
  const int points = n > 0 ? n : (profile.dim() == 1 ? 512 : 128);
  if (profile.family() == "kolmogorov") {
    if (bc && *bc != Boundary::periodic) {
      throw ValidationError("kolmogorov lives on the torus; only periodic bc applies");
    }
    return GridDomain::torus2d(points, transverse_n);
  }
  return profile.natural_domain(points, bc);
}

namespace {

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> get_opt(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

json to_json(const SweepRecord& r) {
  json j;
  j["profile"] = r.profile;
  j["task"] = r.task;
  j["nu"] = r.nu;
  j["k"] = r.k;
  j["m"] = r.m;
  j["regime"] = r.regime;
  j["regime_split"] = r.regime_split;
  j["psi"] = opt(r.psi);
  j["lambda_star"] = opt(r.lambda_star);
  j["lambda_formula"] = opt(r.lambda_formula);
  j["rate_fit"] = opt(r.rate_fit);
  j["c1_fit"] = opt(r.c1_fit);
  j["phi_rate_fit"] = opt(r.phi_rate_fit);
  j["phi_monotone"] = opt(r.phi_monotone);
  j["semiclassical_exponent"] = opt(r.semiclassical_exponent);
  j["c_sp_fit"] = opt(r.c_sp_fit);
  j["c_ratios"] = r.c_ratios;
  j["method"] = r.method;
  j["wall_seconds"] = r.wall_seconds;
  j["grid_n"] = r.grid_n;
  j["code_version"] = r.code_version;
  j["status"] = r.status;
  return j;
}

std::string cell(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream s;
  s << std::setprecision(17) << *v;
  return s.str();
}

std::string cell(double v) { return cell(std::optional<double>(v)); }

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

using Key = std::tuple<std::string, double, double, std::string, int>;

Key key_of(const SweepRecord& r) { return {r.profile, r.nu, r.k, r.task, r.grid_n}; }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::string to_json_line(const SweepRecord& r) { return to_json(r).dump(); }

SweepRecord record_from_json(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed record: ") + e.what());
  }
  try {
    SweepRecord r;
    r.profile = j.at("profile").get<std::string>();
    r.task = j.at("task").get<std::string>();
    r.nu = j.at("nu").get<double>();
    r.k = j.at("k").get<double>();
    r.m = j.value("m", 1);
    r.regime = j.value("regime", std::string());
    r.regime_split = j.value("regime_split", std::string());
    r.psi = get_opt<double>(j, "psi");
    r.lambda_star = get_opt<double>(j, "lambda_star");
    r.lambda_formula = get_opt<double>(j, "lambda_formula");
    r.rate_fit = get_opt<double>(j, "rate_fit");
    r.c1_fit = get_opt<double>(j, "c1_fit");
    r.phi_rate_fit = get_opt<double>(j, "phi_rate_fit");
    r.phi_monotone = get_opt<bool>(j, "phi_monotone");
    r.semiclassical_exponent = get_opt<double>(j, "semiclassical_exponent");
    r.c_sp_fit = get_opt<double>(j, "c_sp_fit");
    if (j.contains("c_ratios")) r.c_ratios = j.at("c_ratios").get<std::map<std::string, double>>();
    r.method = j.value("method", std::string());
    r.wall_seconds = j.value("wall_seconds", 0.0);
    r.grid_n = j.value("grid_n", 0);
    r.code_version = j.value("code_version", std::string());
    r.status = j.value("status", std::string("ok"));
    return r;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("record is missing fields: ") + e.what());
  }
}

std::string csv_header() {
  return "profile,task,nu,k,m,regime,regime_split,psi,lambda_star,lambda_formula,rate_fit,c1_fit,"
         "phi_rate_fit,phi_monotone,semiclassical_exponent,c_sp_fit,c_ratios,method,wall_seconds,"
         "grid_n,code_version,status";
}

std::string to_csv_row(const SweepRecord& r) {
  std::string ratios;
  for (const auto& [name, value] : r.c_ratios) {
    if (!ratios.empty()) ratios += ';';
    ratios += name + "=" + cell(value);
  }
  std::ostringstream s;
  s << quoted(r.profile) << ',' << r.task << ',' << cell(r.nu) << ',' << cell(r.k) << ',' << r.m
    << ',' << r.regime << ',' << r.regime_split << ',' << cell(r.psi) << ',' << cell(r.lambda_star)
    << ',' << cell(r.lambda_formula) << ',' << cell(r.rate_fit) << ',' << cell(r.c1_fit) << ','
    << cell(r.phi_rate_fit) << ','
    << (r.phi_monotone ? (*r.phi_monotone ? "true" : "false") : "") << ','
    << cell(r.semiclassical_exponent) << ',' << cell(r.c_sp_fit) << ',' << ratios << ','
    << r.method << ',' << cell(r.wall_seconds) << ',' << r.grid_n << ',' << r.code_version << ','
    << quoted(r.status);
  return s.str();
}

std::vector<SweepRecord> read_records(const std::filesystem::path& path) {
  std::vector<SweepRecord> records;
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read records from '" + path.string() + "'");
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    records.push_back(record_from_json(line));
  }
  return records;
}

void write_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  out << csv_header() << '\n';
  for (const auto& r : records) out << to_csv_row(r) << '\n';
}

SweepRecord run_task(const SweepConfig& config, Task task, double nu, double k) {
  const auto start = std::chrono::steady_clock::now();
  const VelocityProfile profile = parse_profile(config.profile);
  SweepRecord r;
  r.profile = config.profile;
  r.task = std::string(to_string(task));
  r.nu = nu;
  r.k = k;
  r.m = profile.m_index();
  r.code_version = std::string(version());
  try {
    const GridDomain domain = sweep_domain(profile, config.n, config.bc, config.transverse_n);
    r.grid_n = domain.n(0);
    if (task == Task::semiclassical) {
      // the ground state lives in H^1: Dirichlet walls fall back to Neumann
      const GridDomain grid = domain.bc() == Boundary::dirichlet
                                  ? sweep_domain(profile, config.n, Boundary::neumann, config.transverse_n)
                                  : domain;
      const auto sigmas = config.semiclassical.sigma_grid.empty() ? default_sigma_grid()
                                                                  : config.semiclassical.sigma_grid;
      const SemiclassicalFit fit = fit_semiclassical_exponent(grid, profile, sigmas);
      r.semiclassical_exponent = fit.exponent;
      r.c_sp_fit = fit.c_sp_fit;
      r.c_ratios["exponent_minus_law"] = fit.exponent - (r.m - 1.0) / r.m;
      r.method = "shifted_inverse_lanczos";
    } else if (task == Task::hypo) {
      if (r.m != 1 && r.m != 2) throw ValidationError("hypo needs a Morse profile (m = 1 or 2)");
      const auto beta0 = config.hypo.beta0 ? config.hypo.beta0 : profile.calibrated_beta0();
      if (!beta0) throw ValidationError("hypo: no calibrated beta0 for this profile; set [hypo] beta0");
      const HypocoParams params = choose_parameters(nu, k, r.m, *beta0);
      const double rate = hypoco_rate(nu, k, r.m, *beta0);
      r.regime = std::string(to_string(params.regime));
      r.regime_split = "beta0";
      r.lambda_formula = rate;
      const ScalarField g0 = default_initial_condition(domain, profile, config.seed);
      const Trajectory traj = phi_trajectory(domain, profile, params, g0,
                                             config.hypo.horizon / rate,
                                             default_time_step(domain, profile, nu, k, rate,
                                                               config.hypo.dt_factor));
      const PhiDecay decay = track_phi_decay(traj, params, profile);
      r.phi_rate_fit = decay.rate_fit;
      r.phi_monotone = decay.monotone;
      r.c_ratios["phi_rate_over_lambda"] = decay.rate_fit / rate;
      r.method = "crank_nicolson";
    } else {
      const DecayBound bound = decay_rate_bound(nu, k, r.m);
      r.regime = std::string(to_string(bound.regime));
      r.regime_split = "nu_vs_k";
      r.lambda_formula = bound.rate;
      if (task == Task::psi) {
        PsiOptions options;
        options.scan_points = config.psi.scan_points;
        options.sigma.method = config.psi.method;
        const PsiResult psi = pseudospectral_abscissa(domain, profile, nu, k, options);
        r.psi = psi.psi;
        r.lambda_star = psi.lambda_star;
        r.method = std::string(to_string(psi.method));
        r.c_ratios["psi_over_lambda"] = psi.psi / bound.rate;
      } else {
        const ScalarField g0 = default_initial_condition(domain, profile, config.seed);
        const Trajectory traj = evolve(domain, profile, nu, k, g0, config.evolve.horizon / bound.rate,
                                       default_time_step(domain, profile, nu, k, bound.rate,
                                                         config.evolve.dt_factor));
        const DecayFit fit = fit_decay_rate(traj, config.evolve.skip_fraction);
        r.rate_fit = fit.rate_fit;
        r.c1_fit = fit.c1_fit;
        r.method = "crank_nicolson";
        r.c_ratios["rate_over_lambda"] = fit.rate_fit / bound.rate;
      }
    }
  } catch (const ValidationError& e) {
    r.status = std::string("error: ") + e.what();
  } catch (const NumericalError& e) {
    r.status = std::string("numerical error: ") + e.what();
  }
  r.wall_seconds = seconds_since(start);
  return r;
}

SweepResult run_sweep(const SweepConfig& config, std::ostream* progress) {
  config.validate();
  const VelocityProfile profile = parse_profile(config.profile);
  const int grid_n = sweep_domain(profile, config.n, config.bc, config.transverse_n).n(0);

  std::map<Key, SweepRecord> done;
  if (std::filesystem::exists(config.output_path)) {
    for (auto& r : read_records(config.output_path)) done.emplace(key_of(r), std::move(r));
  }
  std::ofstream out(config.output_path, std::ios::app);
  if (!out) throw ValidationError("cannot write to '" + config.output_path.string() + "'");

  struct Job {
    Task task;
    double nu;
    double k;
  };
  std::vector<Job> jobs;
  for (Task task : config.tasks) {
    if (task == Task::semiclassical) {
      jobs.push_back({task, 0.0, 0.0});
      continue;
    }
    for (double nu : config.nu_grid) {
      for (double k : config.k_grid) jobs.push_back({task, nu, k});
    }
  }

  SweepResult result;
  std::vector<std::optional<SweepRecord>> slots(jobs.size());
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Key key{config.profile, jobs[i].nu, jobs[i].k, std::string(to_string(jobs[i].task)), grid_n};
    if (auto it = done.find(key); it != done.end()) {
      slots[i] = it->second;
      ++result.cached;
    } else {
      pending.push_back(i);
    }
  }

  std::mutex writer;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t p = next++; p < pending.size(); p = next++) {
      const Job& job = jobs[pending[p]];
      SweepRecord r = run_task(config, job.task, job.nu, job.k);
      const std::lock_guard lock(writer);
      out << to_json_line(r) << '\n';
      out.flush();
      if (progress) {
        *progress << r.task << " nu=" << r.nu << " k=" << r.k << " " << r.status << " ("
                  << std::fixed << std::setprecision(2) << r.wall_seconds << " s)\n"
                  << std::defaultfloat;
      }
      slots[pending[p]] = std::move(r);
    }
  };
  const int threads = std::min<int>(config.workers, static_cast<int>(pending.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (!out) throw ValidationError("writing '" + config.output_path.string() + "' failed");
  result.computed = static_cast<int>(pending.size());
  for (auto& s : slots) result.records.push_back(std::move(*s));
  return result;
}

ScalingQuantity parse_scaling_quantity(std::string_view text) {
  if (text == "psi") return ScalingQuantity::psi;
  if (text == "rate_fit") return ScalingQuantity::rate_fit;
  throw ValidationError("unknown quantity '" + std::string(text) + "' (psi or rate_fit)");
}

ScalingFit fit_scaling(const std::vector<SweepRecord>& records, Regime regime,
                       ScalingQuantity quantity, bool filter_under_resolved) {
  std::vector<double> lnu, lk, ly;
  ScalingFit fit;
  const std::string wanted(to_string(regime));
  for (const auto& r : records) {
    if (!r.ok() || r.regime != wanted) continue;
    const std::optional<double>& q = quantity == ScalingQuantity::psi ? r.psi : r.rate_fit;
    if (!q) continue;
    if (filter_under_resolved && r.grid_n > 0 &&
        std::pow(r.nu, 1.0 / (r.m + 2.0)) < 8.0 / r.grid_n) {
      ++fit.filtered;
      continue;
    }
    if (!(*q > 0.0)) throw ValidationError("fit_scaling: non-positive quantity in a record");
    lnu.push_back(std::log(r.nu));
    lk.push_back(std::log(std::abs(r.k)));
    ly.push_back(std::log(*q));
  }
  const auto n = static_cast<Index>(ly.size());
  if (n < 6) throw ValidationError("fit_scaling: fewer than 6 usable records in the regime");
  auto varies = [](const std::vector<double>& x) {
    for (double v : x) {
      if (std::abs(v - x.front()) > 1e-12) return true;
    }
    return false;
  };
  fit.has_p_nu = varies(lnu);
  fit.has_p_k = varies(lk);
  if (!fit.has_p_nu && !fit.has_p_k) {
    throw ValidationError("fit_scaling: all records share one nu and one k");
  }
  const int cols = 1 + (fit.has_p_nu ? 1 : 0) + (fit.has_p_k ? 1 : 0);
  Eigen::MatrixXd a(n, cols);
  Eigen::VectorXd b(n);
  for (Index i = 0; i < n; ++i) {
    int c = 0;
    a(i, c++) = 1.0;
    if (fit.has_p_nu) a(i, c++) = lnu[static_cast<std::size_t>(i)];
    if (fit.has_p_k) a(i, c++) = lk[static_cast<std::size_t>(i)];
    b[i] = ly[static_cast<std::size_t>(i)];
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < cols) throw ValidationError("fit_scaling: rank-deficient design");
  const Eigen::VectorXd x = qr.solve(b);
  int c = 0;
  fit.c_fit = std::exp(x[c++]);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  fit.p_nu = fit.has_p_nu ? x[c++] : nan;
  fit.p_k = fit.has_p_k ? x[c++] : nan;
  const Eigen::VectorXd res = b - a * x;
  const double ss_tot = (b.array() - b.mean()).square().sum();
  fit.r2 = ss_tot > 0.0 ? 1.0 - res.squaredNorm() / ss_tot : 1.0;
  fit.used = static_cast<int>(n);
  return fit;
}

}  // namespace shearspec
