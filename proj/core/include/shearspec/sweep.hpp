#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shearspec/config.hpp"
#include "shearspec/profiles.hpp"

namespace shearspec {

std::string_view version();

/// Grid used by the sweep and the CLI: the profile's natural domain, except
/// that profiles varying only along y1 on the torus get a thin second axis.
GridDomain sweep_domain(const VelocityProfile& profile, int n, std::optional<Boundary> bc,
                        int transverse_n = 4);

/// One persisted measurement; absent quantities serialise as null.
struct SweepRecord {
  std::string profile;
  std::string task;
  double nu = 0.0;
  double k = 0.0;
  int m = 1;
  std::string regime;
  std::string regime_split;  ///< "nu_vs_k" (resolvent path) or "beta0" (hypoco path)
  std::optional<double> psi;
  std::optional<double> lambda_star;
  std::optional<double> lambda_formula;
  std::optional<double> rate_fit;
  std::optional<double> c1_fit;
  std::optional<double> phi_rate_fit;
  std::optional<bool> phi_monotone;
  std::optional<double> semiclassical_exponent;
  std::optional<double> c_sp_fit;
  std::map<std::string, double> c_ratios;
  std::string method;
  double wall_seconds = 0.0;
  int grid_n = 0;
  std::string code_version;
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

std::string to_json_line(const SweepRecord& r);
SweepRecord record_from_json(std::string_view line);

/// Header matching the record field order; c_ratios is one `key=value;...` cell.
std::string csv_header();
std::string to_csv_row(const SweepRecord& r);

std::vector<SweepRecord> read_records(const std::filesystem::path& path);
void write_csv(std::ostream& out, const std::vector<SweepRecord>& records);

struct SweepResult {
  std::vector<SweepRecord> records;
  int computed = 0;
  int cached = 0;
};

/// Runs every requested task per (nu, k) pair, appending each record to the
/// output as it completes; pairs already in the file are skipped.
SweepResult run_sweep(const SweepConfig& config, std::ostream* progress = nullptr);

/// Computes one (task, nu, k) record without touching any file.
SweepRecord run_task(const SweepConfig& config, Task task, double nu, double k);

enum class ScalingQuantity { psi, rate_fit };
ScalingQuantity parse_scaling_quantity(std::string_view text);

struct ScalingFit {
  double p_nu = 0.0;  ///< NaN when every record shares one nu
  double p_k = 0.0;   ///< NaN when every record shares one k
  double c_fit = 0.0;
  double r2 = 0.0;
  bool has_p_nu = true;
  bool has_p_k = true;
  int used = 0;
  int filtered = 0;  ///< rows dropped as under-resolved
};

/// quantity ~ c nu^{p_nu} |k|^{p_k} by least squares in log space. Rows whose
/// boundary layer nu^{1/(m+2)} is thinner than 8 grid cells are dropped.
ScalingFit fit_scaling(const std::vector<SweepRecord>& records, Regime regime,
                       ScalingQuantity quantity, bool filter_under_resolved = true);

}  // namespace shearspec
