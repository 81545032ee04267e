#include "xfpt/model.hpp"

#include <cmath>
#include <sstream>

#include "xfpt/csv.hpp"
#include "xfpt/errors.hpp"
#include "xfpt/specialfn.hpp"

namespace xfpt {

namespace {

constexpr double kSqrtPi = 1.77245385090551602730;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// sigma^{d-1} with the one-dimensional convention sigma^0 = 1
double surface_factor(const AnnulusModel& m) {
  return m.dim == 1 ? 1.0 : std::pow(m.sigma, m.dim - 1);
}

double half_surface_factor(const AnnulusModel& m) {
  return m.dim == 1 ? 1.0 : std::pow(m.sigma, 0.5 * (m.dim - 1));
}

// (1 - sigma^d) / (1 - sigma), equal to 1 in one dimension
double volume_ratio(const AnnulusModel& m) {
  return m.dim == 1 ? 1.0 : (1.0 - std::pow(m.sigma, m.dim)) / (1.0 - m.sigma);
}

}  // namespace

std::string initial_condition_name(const InitialCondition& ic) {
  return std::visit(Overloaded{
                        [](const DeltaAtOuter&) { return std::string("outer"); },
                        [](const Uniform&) { return std::string("uniform"); },
                        [](const QuasiStationary&) { return std::string("quasi_stationary"); },
                        [](const DeltaAtCenter&) { return std::string("center"); },
                    },
                    ic);
}

void AnnulusModel::validate() const {
  if (dim < 1 || dim > 3) {
    throw DomainError("annulus: dim must be 1, 2 or 3");
  }
  if (!(sigma >= 0.0 && sigma < 1.0)) {
    throw DomainError("annulus: sigma must lie in [0, 1)");
  }
  if (dim == 1 && sigma != 0.0) {
    throw DomainError("annulus: dim = 1 requires sigma = 0");
  }
  if (dim > 1 && sigma == 0.0) {
    throw DomainError("annulus: dim > 1 requires sigma > 0");
  }
  if (!(kappa > 0.0)) {
    throw DomainError("annulus: kappa must be positive (inf for a perfect target)");
  }
  if (!(t_diff > 0.0) || std::isinf(t_diff)) {
    throw DomainError("annulus: t_diff must be positive");
  }
  if (std::holds_alternative<DeltaAtCenter>(initial)) {
    throw DomainError("annulus: a centre start is not inside the annulus");
  }
}

void OUWellModel::validate() const {
  if (dim < 1) {
    throw DomainError("ou well: dim must be positive");
  }
  if (!(eps > 0.0) || std::isinf(eps)) {
    throw DomainError("ou well: eps must be positive");
  }
  if (!(t_diff > 0.0) || std::isinf(t_diff)) {
    throw DomainError("ou well: t_diff must be positive");
  }
  if (std::holds_alternative<DeltaAtOuter>(initial)) {
    throw DomainError("ou well: the outer sphere is the target");
  }
}

void NarrowEscapeSphereModel::validate() const {
  if (dim != 2 && dim != 3) {
    throw DomainError("narrow escape: dim must be 2 or 3");
  }
  if (num_targets < 1) {
    throw DomainError("narrow escape: need at least one target");
  }
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw DomainError("narrow escape: sigma must lie in (0, 1)");
  }
  if (!(target_radius > 0.0) || !(domain_volume > 0.0) || !(diffusivity > 0.0)) {
    throw DomainError("narrow escape: radius, volume and diffusivity must be positive");
  }
}

double NarrowEscapeSphereModel::t_diff() const {
  validate();
  if (dim == 2) {
    return domain_volume / (specialfn::kPi * diffusivity);
  }
  return domain_volume / (4.0 / 3.0 * specialfn::kPi * target_radius * diffusivity);
}

double mfpt_asymptotic(const AnnulusModel& m) {
  m.validate();
  const int d = m.dim;
  if (m.perfect()) {
    if (d == 1) {
      throw UnsupportedError("annulus: a perfect target in d = 1 has no slow regime");
    }
    const double small = d == 2 ? -std::log(m.sigma) : 1.0 / m.sigma;
    return m.t_diff * small / d;
  }
  const double vol = m.dim == 1 ? 1.0 : 1.0 - std::pow(m.sigma, d);
  const double gap = m.dim == 1 ? 1.0 : (1.0 - m.sigma) * (1.0 - m.sigma);
  return m.t_diff * vol / (d * gap * m.kappa * surface_factor(m));
}

double mfpt_asymptotic(const OUWellModel& m) {
  m.validate();
  const double half_d = 0.5 * m.dim;
  return m.t_diff * specialfn::gamma_fn(half_d) / 4.0 * std::pow(m.eps, half_d + 1.0) *
         std::exp(1.0 / m.eps);
}

double mfpt_asymptotic(const NarrowEscapeSphereModel& m) {
  return 1.0 / principal_eigenvalue_asymptotic(m);
}

double mfpt_asymptotic(const Model& m) {
  return std::visit([](const auto& x) { return mfpt_asymptotic(x); }, m);
}

double principal_eigenvalue_asymptotic(const AnnulusModel& m) { return 1.0 / mfpt_asymptotic(m); }

double principal_eigenvalue_asymptotic(const OUWellModel& m) {
  m.validate();
  const double half_d = 0.5 * m.dim;
  return 4.0 * std::exp(-1.0 / m.eps) /
         (m.t_diff * specialfn::gamma_fn(half_d) * std::pow(m.eps, half_d + 1.0));
}

double principal_eigenvalue_asymptotic(const NarrowEscapeSphereModel& m) {
  m.validate();
  const double num = specialfn::kPi * m.diffusivity * m.num_targets;
  if (m.dim == 2) {
    return -2.0 * num / (m.domain_volume * std::log(m.sigma));
  }
  return 4.0 * num * m.target_radius * m.sigma / m.domain_volume;
}

double principal_eigenvalue_asymptotic(const Model& m) {
  return std::visit([](const auto& x) { return principal_eigenvalue_asymptotic(x); }, m);
}

double ou_higher_eigenvalue_asymptotic(const OUWellModel& m, int n) {
  m.validate();
  if (n < 1) {
    throw DomainError("ou higher eigenvalue: n must be >= 1");
  }
  return 4.0 * n / (m.eps * m.t_diff);
}

double partial_absorption_eigenvalue(double diffusivity, double kappa, double sigma, int dim,
                                     double length, double volume_to_area) {
  if (!(diffusivity > 0.0) || !(kappa > 0.0) || !(length > 0.0) || !(volume_to_area > 0.0)) {
    throw DomainError("partial absorption eigenvalue: parameters must be positive");
  }
  const double s = dim == 1 ? 1.0 : std::pow(sigma, dim - 1);
  return diffusivity * kappa * s / (length * volume_to_area);
}

ShortTimeAsymptotics short_time_coefficients(const AnnulusModel& m) {
  m.validate();
  if (std::holds_alternative<QuasiStationary>(m.initial)) {
    throw UnsupportedError(
        "short-time coefficients: quasi-stationary start has no power law; use the spectral "
        "expansion");
  }
  const double td = m.t_diff;
  if (std::holds_alternative<DeltaAtOuter>(m.initial)) {
    if (m.perfect()) {
      return {2.0 / kSqrtPi / std::sqrt(td) * half_surface_factor(m), 0.5, td / 4.0};
    }
    return {4.0 / kSqrtPi * std::pow(td, -1.5) * m.kappa * half_surface_factor(m), 1.5, td / 4.0};
  }
  // uniform start
  if (m.perfect()) {
    return {2.0 * m.dim / (kSqrtPi * volume_ratio(m)) * surface_factor(m) / std::sqrt(td), 0.5, 0.0};
  }
  return {m.dim / volume_ratio(m) * m.kappa * surface_factor(m) / td, 1.0, 0.0};
}

ShortTimeAsymptotics radial_short_time_coefficients(const AnnulusModel& m, double start_radius) {
  m.validate();
  if (!(start_radius > m.sigma && start_radius <= 1.0)) {
    throw DomainError("radial short-time coefficients: start radius must lie in (sigma, 1]");
  }
  const double dist = start_radius - m.sigma;
  const double geom = m.dim == 1 ? 1.0 : std::pow(m.sigma / start_radius, 0.5 * (m.dim - 1));
  const double gap = dist * dist / 4.0;
  if (m.perfect()) {
    return {2.0 / (kSqrtPi * dist) * geom, 0.5, gap};
  }
  return {4.0 * m.kappa_bar() / (kSqrtPi * dist * dist) * geom, 1.5, gap};
}

ShortTimeAsymptotics outer_to_diffusion_units(const ShortTimeAsymptotics& st, const AnnulusModel& m) {
  // t_outer = t / T with T = R^2/D in t_diff units
  const double scale = m.outer_time_scale();
  return {st.amp * std::pow(scale, -st.power), st.power, st.gap * scale};
}

double laplace_survival(const AnnulusModel& m, double r, double s) {
  m.validate();
  if (!(s > 0.0)) {
    throw DomainError("laplace_survival: s must be positive");
  }
  if (!(r >= m.sigma && r <= 1.0)) {
    throw DomainError("laplace_survival: r must lie in [sigma, 1]");
  }
  const double q = std::sqrt(s);
  const int d = m.dim;
  // d = 1 closed forms are evaluated directly so that r = sigma = 0 is allowed
  auto i0 = [&](double x) { return d == 1 ? std::exp(x) : specialfn::bessel_i({0, d}, x); };
  auto i1 = [&](double x) { return d == 1 ? std::exp(x) : specialfn::bessel_i({1, d}, x); };
  auto k0 = [&](double x) { return d == 1 ? std::exp(-x) : specialfn::bessel_k({0, d}, x); };
  auto k1 = [&](double x) { return d == 1 ? std::exp(-x) : specialfn::bessel_k({1, d}, x); };

  const double k1_outer = k1(q);
  const double i1_outer = i1(q);
  // g solves the homogeneous equation with the reflecting condition at r = 1
  auto g = [&](double x) { return k1_outer * i0(q * x) + i1_outer * k0(q * x); };
  auto g_r = [&](double x) { return q * (k1_outer * i1(q * x) - i1_outer * k1(q * x)); };

  if (m.perfect()) {
    return (1.0 - g(r) / g(m.sigma)) / s;
  }
  const double kb = m.kappa_bar();
  return (1.0 + kb * g(r) / (g_r(m.sigma) - kb * g(m.sigma))) / s;
}

std::string to_json(const AnnulusModel& m) {
  std::ostringstream os;
  os << "{\"type\":\"annulus\",\"dim\":" << m.dim << ",\"sigma\":" << format_real(m.sigma)
     << ",\"kappa\":\"" << format_real(m.kappa) << "\",\"initial\":\""
     << initial_condition_name(m.initial) << "\",\"t_diff\":" << format_real(m.t_diff) << "}";
  return os.str();
}

std::string to_json(const OUWellModel& m) {
  std::ostringstream os;
  os << "{\"type\":\"ou\",\"dim\":" << m.dim << ",\"eps\":" << format_real(m.eps)
     << ",\"t_diff\":" << format_real(m.t_diff) << ",\"initial\":\""
     << initial_condition_name(m.initial) << "\"}";
  return os.str();
}

}  // namespace xfpt
