#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "shearspec/discretize.hpp"
#include "shearspec/linalg.hpp"

namespace shearspec {

enum class SigmaMethod { automatic, dense_svd, inverse_iteration };
enum class Regime { enhanced, taylor };

std::string_view to_string(SigmaMethod method);
std::string_view to_string(Regime regime);
SigmaMethod parse_sigma_method(std::string_view text);

/// Reported in place of sigma_min when the operator is singular to working precision.
inline constexpr double kSigmaFloor = 1e-14;
/// Largest N handled by the dense SVD under SigmaMethod::automatic.
inline constexpr Index kDenseCrossover = 2048;

struct SigmaOptions {
  SigmaMethod method = SigmaMethod::automatic;
  LanczosOptions lanczos{};
};

struct SigmaResult {
  double sigma = 0.0;
  SigmaMethod method = SigmaMethod::dense_svd;
  /// Approximate right singular vector (iterative path only).
  ComplexVector vector;
};

/// sigma_min(H) by dense SVD or by Lanczos on (H^H H)^{-1} with a sparse LU.
/// `warm_start` seeds the iterative path.
SigmaResult smallest_singular_value(const OperatorMatrix& op, const SigmaOptions& options,
                                    const ComplexVector* warm_start = nullptr);
double smallest_singular_value(const OperatorMatrix& op);

struct PsiOptions {
  int scan_points = 64;
  double relative_tolerance = 1e-4;  ///< final bracket width over osc(v)
  double margin = 0.1;               ///< scan beyond [min v, max v] by margin * osc(v)
  /// Scans default to the iterative solver: a dense SVD per lambda is too slow for sweeps.
  SigmaOptions sigma{SigmaMethod::inverse_iteration};
};

struct PsiResult {
  double psi = 0.0;
  double lambda_star = 0.0;
  std::vector<std::pair<double, double>> sigma_profile;  ///< (lambda, sigma_min) in evaluation order
  SigmaMethod method = SigmaMethod::dense_svd;
};

/// Psi(nu, k) = min over lambda of sigma_min(H_{nu,k,lambda}).
PsiResult pseudospectral_abscissa(const GridDomain& domain, const VelocityProfile& profile,
                                  double nu, double k, const PsiOptions& options);
PsiResult pseudospectral_abscissa(const GridDomain& domain, const VelocityProfile& profile,
                                  double nu, double k, int scan_points = 64);

struct DecayBound {
  double rate = 0.0;  ///< lambda_{nu,k}
  Regime regime = Regime::enhanced;
  int m = 1;
  double c1 = 0.0;  ///< semigroup prefactor e^{pi/2}
  double c2 = 0.0;  ///< rate constant; NaN unless a measured Psi is supplied
};

/// nu^{m/(m+2)} |k|^{2/(m+2)} for nu <= |k|, k^2 / nu otherwise.
DecayBound decay_rate_bound(double nu, double k, int m,
                            std::optional<double> psi = std::nullopt);

/// e^{pi/2} e^{-t psi}.
double gearhart_pruss_bound(double psi, double t);

struct WitnessResult {
  double bound = 0.0;  ///< ||H g|| / ||g||
  double lambda = 0.0;
  Point center{0.0, 0.0};
  int windows_tried = 0;
};

/// Upper bound on Psi from a cos^2 bump of width ell centred where the level
/// window |v - lambda| < delta covers the bump's support.
WitnessResult witness(const GridDomain& domain, const VelocityProfile& profile, double nu,
                      double k, double ell, double delta);
double upper_bound_witness(const GridDomain& domain, const VelocityProfile& profile, double nu,
                           double k, double ell, double delta);

}  // namespace shearspec
