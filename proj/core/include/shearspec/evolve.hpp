#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "shearspec/discretize.hpp"

namespace shearspec {

struct TrajectoryParams {
  double nu = 0.0;
  double k = 0.0;
  std::string profile;
  Boundary bc = Boundary::neumann;
  double dt = 0.0;
  Index n = 0;  ///< number of unknowns
};

struct Trajectory {
  std::vector<double> times;
  std::vector<double> norms;
  std::vector<double> grad_norms;
  std::vector<ScalarField> snapshots;
  std::vector<double> snapshot_times;
  /// Extra per-sample observables filled by observers, keyed by name.
  std::map<std::string, std::vector<double>> series;
  TrajectoryParams params;

  std::size_t samples() const { return times.size(); }
};

/// Called after every recorded sample with (time, field values).
using EvolveObserver = std::function<void(double, const ComplexVector&, Trajectory&)>;

inline constexpr std::size_t kMaxSnapshots = 32;

struct EvolveOptions {
  /// Requested snapshot times (at most 32); each is taken at the first step >= t.
  std::vector<double> snapshot_times;
  /// Record every `stride`-th step; 0 picks a stride keeping <= max_samples samples.
  int stride = 1;
  std::size_t max_samples = 20000;
  EvolveObserver observer;
};

/// Crank-Nicolson for dg/dt = -H g, H = -nu Delta_h + i k v, with one LU reused
/// for every step.
Trajectory evolve(const GridDomain& domain, const VelocityProfile& profile, double nu, double k,
                  const ScalarField& g0, double t_end, double dt, const EvolveOptions& options = {});

/// Normalised mix of (v - mean v), the lowest Laplacian mode and a smooth
/// seeded perturbation.
ScalarField default_initial_condition(const GridDomain& domain, const VelocityProfile& profile,
                                      unsigned seed = 1);

/// dt_factor / rate, capped so that one step advances the phase k v by at most
/// one radian across the profile's range and damps the lowest diffusive mode
/// nu (pi / L)^2 by at most e^{-1}. Crank-Nicolson barely damps stiffer modes,
/// so longer steps leave them ringing in the norm.
double default_time_step(const GridDomain& domain, const VelocityProfile& profile, double nu,
                         double k, double rate, double dt_factor);

struct DecayFit {
  double c1_fit = 0.0;
  double rate_fit = 0.0;
};

/// Least squares on (t, log ||g||) after dropping the first skip_fraction of the time window.
DecayFit fit_decay_rate(const Trajectory& traj, double skip_fraction = 0.2);
DecayFit fit_decay_rate(const std::vector<double>& times, const std::vector<double>& values,
                        double reference, double skip_fraction = 0.2);

}  // namespace shearspec
