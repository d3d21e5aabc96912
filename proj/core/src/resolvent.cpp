#include "shearspec/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "shearspec/errors.hpp"

namespace shearspec {

std::string_view to_string(SigmaMethod method) {
  switch (method) {
    case SigmaMethod::automatic: return "automatic";
    case SigmaMethod::dense_svd: return "dense_svd";
    case SigmaMethod::inverse_iteration: return "inverse_iteration";
  }
  return "?";
}

std::string_view to_string(Regime regime) {
  return regime == Regime::enhanced ? "enhanced" : "taylor";
}

SigmaMethod parse_sigma_method(std::string_view text) {
  if (text == "automatic" || text == "auto") return SigmaMethod::automatic;
  if (text == "dense_svd" || text == "dense") return SigmaMethod::dense_svd;
  if (text == "inverse_iteration" || text == "iterative") return SigmaMethod::inverse_iteration;
  throw ValidationError("unknown sigma method '" + std::string(text) + "'");
}

namespace {

SigmaMethod resolve(SigmaMethod method, Index n) {
  if (method != SigmaMethod::automatic) return method;
  return n <= kDenseCrossover ? SigmaMethod::dense_svd : SigmaMethod::inverse_iteration;
}

}  // namespace

SigmaResult smallest_singular_value(const OperatorMatrix& op, const SigmaOptions& options,
                                    const ComplexVector* warm_start) {
  const Index n = op.matrix.rows();
  SigmaResult result;
  result.method = resolve(options.method, n);
  if (result.method == SigmaMethod::dense_svd) {
    const Eigen::VectorXd s = dense::singular_values(Eigen::MatrixXcd(op.matrix));
    // below n eps sigma_max the matrix is singular to working precision
    const double noise = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * s[0];
    result.sigma = s[s.size() - 1] <= noise ? kSigmaFloor : std::max(s[s.size() - 1], kSigmaFloor);
    return result;
  }

  ComplexSparseLU lu(op.matrix);
  if (!lu.ok()) {
    result.sigma = kSigmaFloor;
    return result;
  }
  ComplexVector start = warm_start != nullptr && warm_start->size() == n
                            ? *warm_start
                            : ComplexVector(deterministic_start(n, options.lanczos.seed).cast<Complex>());
  auto inverse_normal = [&lu](const ComplexVector& x, ComplexVector& y) {
    y = lu.solve(lu.solve_adjoint(x));
  };
  RitzPair<ComplexVector> pair;
  try {
    pair = lanczos_largest(inverse_normal, start, options.lanczos);
  } catch (const NumericalError&) {
    result.sigma = kSigmaFloor;
    return result;
  }
  if (!pair.converged) throw NumericalError("sigma_min: Lanczos did not converge");
  const ComplexVector hu = op.matrix * pair.vector;
  result.sigma = std::max(hu.norm(), kSigmaFloor);
  result.vector = std::move(pair.vector);
  return result;
}

double smallest_singular_value(const OperatorMatrix& op) {
  return smallest_singular_value(op, SigmaOptions{}).sigma;
}

PsiResult pseudospectral_abscissa(const GridDomain& domain, const VelocityProfile& profile,
                                  double nu, double k, const PsiOptions& options) {
  if (k == 0.0) throw ValidationError("pseudospectral_abscissa: k = 0 is the heat equation");
  if (options.scan_points < 16) throw ValidationError("pseudospectral_abscissa: scan_points < 16");
  if (!(options.relative_tolerance > 0.0)) {
    throw ValidationError("pseudospectral_abscissa: tolerance must be positive");
  }
  const Eigen::VectorXd v = profile.sample(domain);
  const double vmin = v.minCoeff();
  const double vmax = v.maxCoeff();
  const double osc = vmax - vmin;

  PsiResult result;
  result.method = resolve(options.sigma.method, domain.size());
  ComplexVector warm;
  auto sigma_at = [&](double lambda) {
    const OperatorMatrix op = assemble(domain, profile, nu, k, lambda);
    SigmaResult s = smallest_singular_value(op, options.sigma, warm.size() ? &warm : nullptr);
    if (s.vector.size()) warm = std::move(s.vector);
    result.sigma_profile.emplace_back(lambda, s.sigma);
    return s.sigma;
  };

  if (osc == 0.0) {
    result.lambda_star = vmin;
    result.psi = sigma_at(vmin);
    return result;
  }

  const int points = options.scan_points;
  const double lo = vmin - options.margin * osc;
  const double hi = vmax + options.margin * osc;
  std::vector<double> grid(static_cast<std::size_t>(points));
  std::vector<double> values(grid.size());
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  }
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = sigma_at(grid[i]);
    if (values[i] < values[best]) best = i;
  }
  double a = grid[best == 0 ? 0 : best - 1];
  double b = grid[std::min(best + 1, grid.size() - 1)];
  double best_lambda = grid[best];
  double best_sigma = values[best];

  // golden-section search inside the bracket around the coarse minimum
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = sigma_at(c);
  double fd = sigma_at(d);
  while (b - a > options.relative_tolerance * osc) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = sigma_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = sigma_at(d);
    }
  }
  for (const auto& [lambda, sigma] : result.sigma_profile) {
    if (sigma < best_sigma) {
      best_sigma = sigma;
      best_lambda = lambda;
    }
  }
  result.psi = best_sigma;
  result.lambda_star = best_lambda;
  return result;
}

PsiResult pseudospectral_abscissa(const GridDomain& domain, const VelocityProfile& profile,
                                  double nu, double k, int scan_points) {
  PsiOptions options;
  options.scan_points = scan_points;
  return pseudospectral_abscissa(domain, profile, nu, k, options);
}

DecayBound decay_rate_bound(double nu, double k, int m, std::optional<double> psi) {
  if (!(nu > 0.0)) throw ValidationError("decay_rate_bound: nu must be positive");
  if (k == 0.0) throw ValidationError("decay_rate_bound: k must be nonzero");
  if (m < 1) throw ValidationError("decay_rate_bound: m must be >= 1");
  const double ak = std::abs(k);
  DecayBound bound;
  bound.m = m;
  bound.c1 = std::exp(std::numbers::pi / 2.0);
  if (nu <= ak) {
    bound.regime = Regime::enhanced;
    bound.rate = std::pow(nu, m / (m + 2.0)) * std::pow(ak, 2.0 / (m + 2.0));
  } else {
    bound.regime = Regime::taylor;
    bound.rate = k * k / nu;
  }
  bound.c2 = psi ? *psi / bound.rate : std::numeric_limits<double>::quiet_NaN();
  return bound;
}

double gearhart_pruss_bound(double psi, double t) {
  if (psi < 0.0 || t < 0.0) throw ValidationError("gearhart_pruss_bound: psi and t must be >= 0");
  return std::exp(std::numbers::pi / 2.0 - t * psi);
}

namespace {

// Node offsets within (-ell/2, ell/2) of a centre, per axis; empty if the
// support leaves a non-periodic domain.
std::vector<int> support_offsets(const GridDomain& domain, int axis, int centre, double ell) {
  const double h = domain.h(axis);
  const int half = static_cast<int>(std::ceil(ell / (2.0 * h)));
  std::vector<int> nodes;
  for (int o = -half; o <= half; ++o) {
    if (std::abs(o * h) >= ell / 2.0) continue;
    const int j = centre + o;
    if (!domain.periodic() && (j < 0 || j >= domain.n(axis))) return {};
    nodes.push_back(o);
  }
  return nodes;
}

int wrap(int j, int n) { return ((j % n) + n) % n; }

}  // namespace

WitnessResult witness(const GridDomain& domain, const VelocityProfile& profile, double nu,
                      double k, double ell, double delta) {
  if (!(nu > 0.0) || !(ell > 0.0) || !(delta > 0.0)) {
    throw ValidationError("upper_bound_witness: nu, ell and delta must be positive");
  }
  if (profile.dim() != domain.dim()) throw ValidationError("upper_bound_witness: dimension mismatch");
  const int dim = domain.dim();
  std::array<double, 2> width{ell, ell};
  for (int a = 0; a < dim; ++a) width[static_cast<std::size_t>(a)] = std::min(ell, domain.length(a));

  const Eigen::VectorXd v = profile.sample(domain);
  const RealSparse lap = laplacian(domain);
  const double vol = domain.cell_volume();

  // at most 256 window centres in total
  std::array<int, 2> stride{1, 1};
  const int per_axis = dim == 1 ? 256 : 16;
  for (int a = 0; a < dim; ++a) {
    stride[static_cast<std::size_t>(a)] = std::max(1, domain.n(a) / per_axis);
  }

  WitnessResult best;
  best.bound = std::numeric_limits<double>::infinity();
  const int n1 = dim == 2 ? domain.n(1) : 1;
  for (int c1 = stride[1] / 2; c1 < n1; c1 += stride[1]) {
    for (int c0 = stride[0] / 2; c0 < domain.n(0); c0 += stride[0]) {
      const auto off0 = support_offsets(domain, 0, c0, width[0]);
      const auto off1 = dim == 2 ? support_offsets(domain, 1, c1, width[1]) : std::vector<int>{0};
      if (off0.size() < 4 || (dim == 2 && off1.size() < 4) || off0.empty() || off1.empty()) continue;
      const Index centre = domain.index(c0, c1);
      const double lambda = v[centre];
      ComplexVector g = ComplexVector::Zero(domain.size());
      bool admissible = true;
      for (int o1 : off1) {
        const int j1 = dim == 2 ? wrap(c1 + o1, n1) : 0;
        const double b1 = dim == 2 ? std::pow(std::cos(std::numbers::pi * o1 * domain.h(1) / width[1]), 2) : 1.0;
        for (int o0 : off0) {
          const int j0 = wrap(c0 + o0, domain.n(0));
          const Index idx = domain.index(j0, j1);
          if (std::abs(v[idx] - lambda) >= delta) {
            admissible = false;
            break;
          }
          const double b0 = std::pow(std::cos(std::numbers::pi * o0 * domain.h(0) / width[0]), 2);
          g[idx] = b0 * b1;
        }
        if (!admissible) break;
      }
      if (!admissible) continue;
      ++best.windows_tried;
      ComplexVector hg = nu * (lap * g);
      hg.array() += Complex(0.0, k) * (v.array() - lambda).cast<Complex>() * g.array();
      const double ratio = std::sqrt(vol) * hg.norm() / (std::sqrt(vol) * g.norm());
      if (ratio < best.bound) {
        best.bound = ratio;
        best.lambda = lambda;
        best.center = domain.node(centre);
      }
    }
  }
  if (best.windows_tried == 0) {
    throw NumericalError("upper_bound_witness: no admissible level window at this resolution");
  }
  return best;
}

double upper_bound_witness(const GridDomain& domain, const VelocityProfile& profile, double nu,
                           double k, double ell, double delta) {
  return witness(domain, profile, nu, k, ell, delta).bound;
}

}  // namespace shearspec
