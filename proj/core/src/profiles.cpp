#include "shearspec/profiles.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "shearspec/errors.hpp"

namespace shearspec {

namespace detail {

struct ProfileModel {
  std::string name;
  std::string family;
  int dim = 1;
  int m_index = 1;
  std::vector<Point> critical_points;
  double shift = 0.0;
  double sup_norm = 0.0;
  bool degenerate = false;
  bool evolvable = true;
  std::optional<double> beta0;
  Point lo{0.0, 0.0};
  Point hi{1.0, 1.0};
  Boundary default_bc = Boundary::neumann;

  virtual ~ProfileModel() = default;
  virtual double raw(const Point& y) const = 0;
  virtual Eigen::Vector2d grad(const Point& y) const = 0;
  virtual Eigen::Matrix2d hess(const Point& y) const = 0;
  virtual double derivative(int order, double y) const {
    (void)order;
    (void)y;
    throw ValidationError("profile '" + name + "' is not one-dimensional");
  }
};

}  // namespace detail

namespace {

using detail::ProfileModel;
constexpr double kPi = std::numbers::pi;

double falling_factorial(int m, int j) {
  double r = 1.0;
  for (int i = 0; i < j; ++i) r *= (m - i);
  return r;
}

// v(y) = (y - 1/2)^m on (0,1); m = 1 is plane Couette up to the shift.
struct Monomial final : ProfileModel {
  int power = 1;
  double raw(const Point& y) const override { return std::pow(y[0] - 0.5, power); }
  Eigen::Vector2d grad(const Point& y) const override {
    return {derivative(1, y[0]), 0.0};
  }
  Eigen::Matrix2d hess(const Point& y) const override {
    Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
    h(0, 0) = derivative(2, y[0]);
    return h;
  }
  double derivative(int order, double y) const override {
    if (order > power) return 0.0;
    const double x = y - 0.5;
    const double c = falling_factorial(power, order);
    return (order == 0) ? (std::pow(x, power) - shift) : c * std::pow(x, power - order);
  }
};

struct Couette final : ProfileModel {
  double raw(const Point& y) const override { return y[0]; }
  Eigen::Vector2d grad(const Point&) const override { return {1.0, 0.0}; }
  Eigen::Matrix2d hess(const Point&) const override { return Eigen::Matrix2d::Zero(); }
  double derivative(int order, double y) const override {
    if (order == 0) return y - shift;
    return order == 1 ? 1.0 : 0.0;
  }
};

struct Poiseuille final : ProfileModel {
  double raw(const Point& y) const override { return 4.0 * y[0] * (1.0 - y[0]); }
  Eigen::Vector2d grad(const Point& y) const override { return {4.0 - 8.0 * y[0], 0.0}; }
  Eigen::Matrix2d hess(const Point&) const override {
    Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
    h(0, 0) = -8.0;
    return h;
  }
  double derivative(int order, double y) const override {
    switch (order) {
      case 0: return 4.0 * y * (1.0 - y) - shift;
      case 1: return 4.0 - 8.0 * y;
      case 2: return -8.0;
      default: return 0.0;
    }
  }
};

struct Constant final : ProfileModel {
  double value = 0.0;
  double raw(const Point&) const override { return value; }
  Eigen::Vector2d grad(const Point&) const override { return Eigen::Vector2d::Zero(); }
  Eigen::Matrix2d hess(const Point&) const override { return Eigen::Matrix2d::Zero(); }
  double derivative(int order, double) const override { return order == 0 ? value - shift : 0.0; }
};

// cos(2 pi y1) on the unit torus.
struct Kolmogorov final : ProfileModel {
  double raw(const Point& y) const override { return std::cos(2.0 * kPi * y[0]); }
  Eigen::Vector2d grad(const Point& y) const override {
    return {-2.0 * kPi * std::sin(2.0 * kPi * y[0]), 0.0};
  }
  Eigen::Matrix2d hess(const Point& y) const override {
    Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
    h(0, 0) = -4.0 * kPi * kPi * std::cos(2.0 * kPi * y[0]);
    return h;
  }
};

struct Saddle final : ProfileModel {
  double raw(const Point& y) const override { return y[0] * y[0] - y[1] * y[1]; }
  Eigen::Vector2d grad(const Point& y) const override { return {2.0 * y[0], -2.0 * y[1]}; }
  Eigen::Matrix2d hess(const Point&) const override {
    Eigen::Matrix2d h;
    h << 2.0, 0.0, 0.0, -2.0;
    return h;
  }
};

// 1 - |y|^m on the unit disk.
struct Radial final : ProfileModel {
  int power = 2;
  double raw(const Point& y) const override {
    return 1.0 - std::pow(std::hypot(y[0], y[1]), power);
  }
  Eigen::Vector2d grad(const Point& y) const override {
    const double r = std::hypot(y[0], y[1]);
    if (r == 0.0) return Eigen::Vector2d::Zero();
    const double c = -power * std::pow(r, power - 2);
    return {c * y[0], c * y[1]};
  }
  Eigen::Matrix2d hess(const Point& y) const override {
    const double r = std::hypot(y[0], y[1]);
    if (r == 0.0) {
      return power == 2 ? Eigen::Matrix2d(-2.0 * Eigen::Matrix2d::Identity())
                        : Eigen::Matrix2d::Zero().eval();
    }
    const Eigen::Vector2d v(y[0], y[1]);
    return -power * (std::pow(r, power - 2) * Eigen::Matrix2d::Identity() +
                     (power - 2) * std::pow(r, power - 4) * v * v.transpose());
  }
};

double monomial_mean(int m) {
  // mean of (y - 1/2)^m over (0,1)
  return (m % 2 == 1) ? 0.0 : 2.0 * std::pow(0.5, m + 1) / (m + 1);
}

// Largest |v| over a fine sample of the natural domain plus listed critical points.
double measure_sup(const ProfileModel& p) {
  double sup = 0.0;
  auto visit = [&](const Point& y) { sup = std::max(sup, std::abs(p.raw(y) - p.shift)); };
  if (p.dim == 1) {
    constexpr int kSamples = 4096;
    for (int i = 0; i <= kSamples; ++i) visit({p.lo[0] + (p.hi[0] - p.lo[0]) * i / kSamples, 0.0});
  } else {
    constexpr int kSamples = 512;
    for (int i = 0; i <= kSamples; ++i) {
      for (int j = 0; j <= kSamples; ++j) {
        const Point y{p.lo[0] + (p.hi[0] - p.lo[0]) * i / kSamples,
                      p.lo[1] + (p.hi[1] - p.lo[1]) * j / kSamples};
        if (!p.evolvable && std::hypot(y[0], y[1]) > 1.0) continue;
        visit(y);
      }
    }
  }
  for (const auto& c : p.critical_points) visit(c);
  return sup;
}

// Values found by calibrate_beta0 (halving from 0.5 until Phi is monotone
// over nu in {1e-4, 1e-3, 1e-2} at k = 1); see hypoco.hpp.
std::optional<double> stored_beta0(std::string_view family) {
  if (family == "couette") return 0.5;
  if (family == "poiseuille") return 0.5;
  if (family == "kolmogorov") return 0.0078125;
  return std::nullopt;
}

template <class Model>
std::shared_ptr<Model> start(std::string name, std::string family) {
  auto p = std::make_shared<Model>();
  p->name = std::move(name);
  p->family = std::move(family);
  p->beta0 = stored_beta0(p->family);
  return p;
}

int integer_param(std::span<const double> params, std::string_view family, int fallback) {
  if (params.empty()) return fallback;
  const double m = params[0];
  if (m != std::floor(m) || !std::isfinite(m)) {
    throw ValidationError(std::string(family) + ": degeneracy index must be an integer");
  }
  return static_cast<int>(m);
}

}  // namespace

VelocityProfile::VelocityProfile(std::shared_ptr<const detail::ProfileModel> model)
    : model_(std::move(model)) {}

VelocityProfile make_profile(std::shared_ptr<const detail::ProfileModel> model) {
  return VelocityProfile(std::move(model));
}

const std::string& VelocityProfile::name() const { return model_->name; }
const std::string& VelocityProfile::family() const { return model_->family; }
int VelocityProfile::dim() const { return model_->dim; }
int VelocityProfile::m_index() const { return model_->m_index; }
const std::vector<Point>& VelocityProfile::critical_points() const {
  return model_->critical_points;
}
bool VelocityProfile::zero_mean() const { return true; }
double VelocityProfile::shift() const { return model_->shift; }
double VelocityProfile::sup_norm() const { return model_->sup_norm; }
bool VelocityProfile::degenerate() const { return model_->degenerate; }
bool VelocityProfile::evolvable() const { return model_->evolvable; }
std::optional<double> VelocityProfile::calibrated_beta0() const { return model_->beta0; }

double VelocityProfile::eval(const Point& y) const { return model_->raw(y) - model_->shift; }
double VelocityProfile::raw(const Point& y) const { return model_->raw(y); }
Eigen::Vector2d VelocityProfile::grad(const Point& y) const { return model_->grad(y); }
Eigen::Matrix2d VelocityProfile::hess(const Point& y) const { return model_->hess(y); }
double VelocityProfile::derivative(int order, double y) const {
  if (order < 0) throw ValidationError("derivative order must be nonnegative");
  return model_->derivative(order, y);
}

Boundary VelocityProfile::default_boundary() const { return model_->default_bc; }

GridDomain VelocityProfile::natural_domain(int n, std::optional<Boundary> bc) const {
  const Boundary b = bc.value_or(model_->default_bc);
  if (model_->dim == 1) return GridDomain::interval(n, b, model_->lo[0], model_->hi[0]);
  if (model_->family == "kolmogorov") {
    if (b != Boundary::periodic) {
      throw ValidationError("kolmogorov lives on the torus; only periodic bc applies");
    }
    return GridDomain::torus2d(n, n);
  }
  return GridDomain::rectangle(n, n, b, model_->lo, model_->hi);
}

Eigen::VectorXd VelocityProfile::sample(const GridDomain& domain) const {
  Eigen::VectorXd v(domain.size());
  for (Index j = 0; j < domain.size(); ++j) v[j] = eval(domain.node(j));
  return v;
}

VelocityProfile get_profile(std::string_view name, std::span<const double> params) {
  std::shared_ptr<ProfileModel> p;
  if (name == "couette") {
    auto c = start<Couette>("couette", "couette");
    c->shift = 0.5;
    p = c;
  } else if (name == "poiseuille") {
    auto c = start<Poiseuille>("poiseuille", "poiseuille");
    c->m_index = 2;
    c->critical_points = {{0.5, 0.0}};
    c->shift = 2.0 / 3.0;
    p = c;
  } else if (name == "monomial_m") {
    const int m = integer_param(params, name, 2);
    if (m < 1) throw ValidationError("monomial_m: degeneracy index m must be >= 1");
    auto c = start<Monomial>("monomial_m:" + std::to_string(m), "monomial_m");
    c->power = m;
    c->m_index = m;
    if (m > 1) c->critical_points = {{0.5, 0.0}};
    c->shift = monomial_mean(m);
    p = c;
  } else if (name == "kolmogorov") {
    auto c = start<Kolmogorov>("kolmogorov", "kolmogorov");
    c->dim = 2;
    c->m_index = 2;
    // The critical set is the pair of lines y1 = 0 and y1 = 1/2; one point of each.
    c->critical_points = {{0.0, 0.5}, {0.5, 0.5}};
    c->default_bc = Boundary::periodic;
    p = c;
  } else if (name == "saddle") {
    auto c = start<Saddle>("saddle", "saddle");
    c->dim = 2;
    c->m_index = 2;
    c->critical_points = {{0.0, 0.0}};
    c->lo = {-0.5, -0.5};
    c->hi = {0.5, 0.5};
    p = c;
  } else if (name == "radial_m") {
    const int m = integer_param(params, name, 2);
    if (m < 2) throw ValidationError("radial_m: m must be >= 2 (1 - |y| is not differentiable)");
    auto c = start<Radial>("radial_m:" + std::to_string(m), "radial_m");
    c->power = m;
    c->dim = 2;
    c->m_index = m;
    c->critical_points = {{0.0, 0.0}};
    c->lo = {-1.0, -1.0};
    c->hi = {1.0, 1.0};
    c->evolvable = false;
    c->shift = static_cast<double>(m) / (m + 2);  // mean of 1 - r^m over the disk
    p = c;
  } else if (name == "constant") {
    auto c = start<Constant>("constant", "constant");
    c->value = params.empty() ? 0.0 : params[0];
    c->shift = c->value;
    c->degenerate = true;
    if (!params.empty()) c->name = "constant:" + std::to_string(c->value);
    p = c;
  } else {
    throw ValidationError("unknown profile '" + std::string(name) + "'");
  }
  p->sup_norm = measure_sup(*p);
  return make_profile(std::move(p));
}

VelocityProfile parse_profile(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view family = spec.substr(0, colon);
  std::vector<double> params;
  if (colon != std::string_view::npos) {
    std::string_view rest = spec.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string token(rest.substr(0, comma));
      try {
        std::size_t used = 0;
        params.push_back(std::stod(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw ValidationError("bad profile parameter '" + token + "' in '" + std::string(spec) + "'");
      }
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  return get_profile(family, params);
}

std::vector<std::string> catalog_families() {
  return {"couette", "poiseuille", "monomial_m", "kolmogorov", "saddle", "radial_m", "constant"};
}

}  // namespace shearspec
