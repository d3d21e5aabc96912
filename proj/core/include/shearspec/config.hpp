#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shearspec/grid.hpp"
#include "shearspec/resolvent.hpp"

namespace shearspec {

enum class Task { psi, evolve, hypo, semiclassical };

std::string_view to_string(Task task);
Task parse_task(std::string_view text);

/// Grid syntax: `start:end:N[log|lin]` (N points, endpoints included; default
/// log), a comma list, or a single value.
std::vector<double> parse_grid(std::string_view text);

struct PsiSettings {
  int scan_points = 64;
  SigmaMethod method = SigmaMethod::inverse_iteration;
};

struct EvolveSettings {
  double dt_factor = 0.05;   ///< dt = dt_factor / lambda_{nu,k}, see default_time_step()
  double horizon = 5.0;      ///< t_end = horizon / lambda_{nu,k}
  double skip_fraction = 0.2;
};

struct HypoSettings {
  std::optional<double> beta0;  ///< defaults to the profile's calibrated value
  double dt_factor = 0.025;
  double horizon = 3.0;
};

struct SemiclassicalSettings {
  std::vector<double> sigma_grid;  ///< empty: 9 points log-spaced over 1e-5..1e-1
};

struct SweepConfig {
  std::string profile;
  std::vector<double> nu_grid;
  std::vector<double> k_grid;
  int n = 0;                          ///< 0: 512 in 1-D, 128 in 2-D
  int transverse_n = 4;               ///< second axis of torus grids for y1-only profiles
  std::optional<Boundary> bc;         ///< default: the profile's natural boundary
  std::vector<Task> tasks;
  std::filesystem::path output_path = "sweep.jsonl";
  unsigned seed = 1;
  int workers = 1;
  PsiSettings psi;
  EvolveSettings evolve;
  HypoSettings hypo;
  SemiclassicalSettings semiclassical;

  bool has_task(Task t) const;
  /// Checks the invariants; throws ValidationError.
  void validate() const;
};

/// Strict key = value parser with [psi], [evolve], [hypo] and [semiclassical]
/// sections; unknown keys and malformed lines fail with the line number.
SweepConfig parse_config_text(std::string_view text, std::string_view origin = "<config>");
SweepConfig parse_config(const std::filesystem::path& path);

}  // namespace shearspec
