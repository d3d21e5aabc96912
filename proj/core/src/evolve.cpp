#include "shearspec/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "shearspec/errors.hpp"
#include "shearspec/fitting.hpp"
#include "shearspec/linalg.hpp"

namespace shearspec {

namespace {

constexpr std::size_t kMinSamples = 8;
constexpr double kUnderflow = 1e-300;

}  // namespace

Trajectory evolve(const GridDomain& domain, const VelocityProfile& profile, double nu, double k,
                  const ScalarField& g0, double t_end, double dt, const EvolveOptions& options) {
  if (!(dt > 0.0)) throw ValidationError("evolve: dt must be positive");
  if (!(t_end >= dt)) throw ValidationError("evolve: t_end must be >= dt");
  if (!(g0.domain == domain)) throw ValidationError("evolve: g0 lives on a different grid");
  if (g0.values.size() != domain.size() || !g0.values.allFinite()) {
    throw ValidationError("evolve: g0 has the wrong size or non-finite entries");
  }
  if (g0.values.norm() == 0.0) throw ValidationError("evolve: g0 must be nonzero");
  if (options.snapshot_times.size() > kMaxSnapshots) {
    throw ValidationError("evolve: at most 32 snapshot times");
  }

  const OperatorMatrix op = assemble(domain, profile, nu, k, 0.0);
  const auto steps = static_cast<long>(std::llround(t_end / dt));
  int stride = options.stride;
  if (stride <= 0) {
    stride = static_cast<int>(std::max<long>(1, steps / static_cast<long>(options.max_samples)));
  }
  if (static_cast<std::size_t>(steps / stride) + 1 < kMinSamples) {
    throw ValidationError("evolve: fewer than 8 samples; decrease dt or increase t_end");
  }

  ComplexSparse identity(op.matrix.rows(), op.matrix.cols());
  identity.setIdentity();
  const ComplexSparse implicit = identity + Complex(0.5 * dt) * op.matrix;
  const ComplexSparse explicit_part = identity - Complex(0.5 * dt) * op.matrix;
  ComplexSparseLU lu(implicit);
  if (!lu.ok()) throw NumericalError("evolve: factorization of I + dt/2 H failed");

  const FaceOperators faces = face_operators(domain);
  std::vector<double> pending = options.snapshot_times;
  std::sort(pending.begin(), pending.end());
  auto next_snapshot = pending.begin();

  Trajectory traj;
  traj.params = {nu, k, profile.name(), domain.bc(), dt, domain.size()};
  ComplexVector g = g0.values;
  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.norms.push_back(norm(domain, g));
    traj.grad_norms.push_back(gradient_norm(faces, g));
    if (options.observer) options.observer(t, g, traj);
  };
  auto maybe_snapshot = [&](double t) {
    while (next_snapshot != pending.end() && t >= *next_snapshot - 1e-9 * dt) {
      traj.snapshots.push_back({g, domain});
      traj.snapshot_times.push_back(t);
      ++next_snapshot;
    }
  };

  record(0.0);
  maybe_snapshot(0.0);
  for (long s = 1; s <= steps; ++s) {
    g = lu.solve(explicit_part * g);
    const double t = static_cast<double>(s) * dt;
    if (s % stride == 0) record(t);
    maybe_snapshot(t);
  }
  return traj;
}

ScalarField default_initial_condition(const GridDomain& domain, const VelocityProfile& profile,
                                      unsigned seed) {
  ScalarField f = ScalarField::zeros(domain);
  const Eigen::VectorXd v = profile.sample(domain);
  const double mean = v.mean();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  // a few random low Fourier modes keep the perturbation smooth
  constexpr int kModes = 4;
  std::array<std::array<double, kModes>, 2> amp_re{}, amp_im{};
  for (int a = 0; a < 2; ++a) {
    for (int j = 0; j < kModes; ++j) {
      amp_re[a][j] = normal(rng) / (j + 1);
      amp_im[a][j] = normal(rng) / (j + 1);
    }
  }
  const bool dirichlet = domain.bc() == Boundary::dirichlet;
  for (Index idx = 0; idx < domain.size(); ++idx) {
    const Point y = domain.node(idx);
    double mode = 1.0;
    Complex noise = 1.0;
    for (int a = 0; a < domain.dim(); ++a) {
      const double s = (y[a] - domain.origin(a)) / domain.length(a);
      const auto au = static_cast<std::size_t>(a);
      // lowest Laplacian eigenfunction of the axis
      mode *= dirichlet ? std::sin(std::numbers::pi * s)
                        : (domain.periodic() ? std::cos(2.0 * std::numbers::pi * s)
                                             : std::cos(std::numbers::pi * s));
      Complex axis_noise = 0.0;
      for (int j = 0; j < kModes; ++j) {
        const double phase = (j + 1) * std::numbers::pi * s;
        const double basis = dirichlet ? std::sin(phase) : std::cos(domain.periodic() ? 2.0 * phase : phase);
        axis_noise += Complex(amp_re[au][static_cast<std::size_t>(j)],
                              amp_im[au][static_cast<std::size_t>(j)]) * basis;
      }
      noise *= axis_noise;
    }
    double envelope = 1.0;
    if (dirichlet) {
      for (int a = 0; a < domain.dim(); ++a) {
        envelope *= std::sin(std::numbers::pi * (y[a] - domain.origin(a)) / domain.length(a));
      }
    }
    f.values[idx] = (v[idx] - mean) * envelope + mode + 0.5 * noise;
  }
  const double n = norm(f);
  if (n == 0.0) throw NumericalError("default_initial_condition: degenerate field");
  f.values /= n;
  return f;
}
double default_time_step(const GridDomain& domain, const VelocityProfile& profile, double nu,
                         double k, double rate, double dt_factor) {
  if (!(rate > 0.0) || !(dt_factor > 0.0) || !(nu > 0.0)) {
    throw ValidationError("default_time_step: nu, rate and dt_factor must be positive");
  }
  const Eigen::VectorXd v = profile.sample(domain);
  const double phase_speed = std::abs(k) * (v.maxCoeff() - v.minCoeff());
  double length = domain.length(0);
  if (domain.dim() == 2) length = std::max(length, domain.length(1));
  const double lowest_mode = nu * std::pow(std::numbers::pi / length, 2);
  double dt = std::min(dt_factor / rate, 1.0 / lowest_mode);
  if (phase_speed > 0.0) dt = std::min(dt, 1.0 / phase_speed);
  return dt;
}

DecayFit fit_decay_rate(const std::vector<double>& times, const std::vector<double>& values,
                        double reference, double skip_fraction) {
  if (times.size() != values.size()) throw ValidationError("fit_decay_rate: size mismatch");
  if (skip_fraction < 0.0 || skip_fraction >= 1.0) {
    throw ValidationError("fit_decay_rate: skip_fraction must lie in [0, 1)");
  }
  if (times.empty()) throw ValidationError("fit_decay_rate: empty trajectory");
  const double t0 = times.front() + skip_fraction * (times.back() - times.front());
  std::vector<double> t, y;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t0) continue;
    if (!(values[i] > kUnderflow)) break;  // underflow truncates the window
    t.push_back(times[i]);
    y.push_back(std::log(values[i]));
  }
  if (t.size() < kMinSamples) throw ValidationError("fit_decay_rate: fewer than 8 samples to fit");
  const LineFit line = fit_line(t, y);
  return {std::exp(line.intercept) / reference, -line.slope};
}

DecayFit fit_decay_rate(const Trajectory& traj, double skip_fraction) {
  if (traj.norms.empty()) throw ValidationError("fit_decay_rate: empty trajectory");
  return fit_decay_rate(traj.times, traj.norms, traj.norms.front(), skip_fraction);
}

}  // namespace shearspec
