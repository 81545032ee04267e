#pragma once

#include <limits>
#include <string>
#include <variant>

namespace xfpt {

inline constexpr double kInfiniteReactivity = std::numeric_limits<double>::infinity();

/// Searcher starts on the outer sphere, ||X(0)|| = R.
struct DeltaAtOuter {};
/// Searcher starts uniformly distributed in the domain.
struct Uniform {};
/// Searcher starts from the quasi-stationary density u0 rho / N.
struct QuasiStationary {};
/// Searcher starts at the origin (bottom of the OU well).
struct DeltaAtCenter {};

using InitialCondition = std::variant<DeltaAtOuter, Uniform, QuasiStationary, DeltaAtCenter>;

std::string initial_condition_name(const InitialCondition& ic);

/// Annulus a < |x| < R in d dimensions, reflecting outer sphere, target at |x| = a.
/// sigma = a/R, kappa = k_on L / D with L = R - a, t_diff = L^2 / D.
struct AnnulusModel {
  int dim = 3;
  double sigma = 0.1;
  double kappa = kInfiniteReactivity;
  InitialCondition initial = DeltaAtOuter{};
  double t_diff = 1.0;

  void validate() const;
  bool perfect() const { return kappa == kInfiniteReactivity; }
  /// Reactivity in outer-radius units, k_on R / D = kappa / (1 - sigma).
  double kappa_bar() const { return kappa / (1.0 - sigma); }
  /// R^2/D expressed in units of t_diff.
  double outer_time_scale() const { return t_diff / ((1.0 - sigma) * (1.0 - sigma)); }
};

/// Ornstein-Uhlenbeck searcher in the ball |x| < L, absorbed on |x| = L.
/// eps = 2D / (theta L^2) with potential V = theta |x|^2 / 2.
struct OUWellModel {
  int dim = 1;
  double eps = 0.1;
  double t_diff = 1.0;
  InitialCondition initial = DeltaAtCenter{};

  void validate() const;
  /// The potential's theta in units where L = 1 (so D = 1/t_diff).
  double well_stiffness() const { return 2.0 / (eps * t_diff); }
};

/// M small spherical targets of radius sigma * r in a domain of volume |Omega|.
struct NarrowEscapeSphereModel {
  int dim = 3;
  int num_targets = 1;
  double target_radius = 1.0;
  double sigma = 0.01;
  double domain_volume = 1.0;
  double diffusivity = 1.0;

  void validate() const;
  double t_diff() const;
};

using Model = std::variant<AnnulusModel, OUWellModel, NarrowEscapeSphereModel>;

/// Leading-order short-time law P(tau <= t) ~ amp t^power exp(-gap / t).
struct ShortTimeAsymptotics {
  double amp = 1.0;
  double power = 0.5;
  double gap = 0.0;
};

double mfpt_asymptotic(const AnnulusModel& m);
double mfpt_asymptotic(const OUWellModel& m);
double mfpt_asymptotic(const NarrowEscapeSphereModel& m);
double mfpt_asymptotic(const Model& m);

double principal_eigenvalue_asymptotic(const AnnulusModel& m);
double principal_eigenvalue_asymptotic(const OUWellModel& m);
double principal_eigenvalue_asymptotic(const NarrowEscapeSphereModel& m);
double principal_eigenvalue_asymptotic(const Model& m);

/// lambda_n ~ 4n / (eps t_diff), n >= 1.
double ou_higher_eigenvalue_asymptotic(const OUWellModel& m, int n);

/// Generic small-reactivity principal eigenvalue D kappa sigma^{d-1} / (L L0),
/// L0 = |Omega| / |dOmega|.  Geometry enters only through L and L0.
double partial_absorption_eigenvalue(double diffusivity, double kappa, double sigma, int dim,
                                     double length, double volume_to_area);

/// Case-matched (A, p, C) in t_diff units for DeltaAtOuter / Uniform starts.
ShortTimeAsymptotics short_time_coefficients(const AnnulusModel& m);

/// (A, p, C) of 1 - S(r, t) for a start at radius r in outer-radius units
/// (length R, time R^2/D).
ShortTimeAsymptotics radial_short_time_coefficients(const AnnulusModel& m, double start_radius);

/// Rescales (A, p, C) from R^2/D time units to t_diff units.
ShortTimeAsymptotics outer_to_diffusion_units(const ShortTimeAsymptotics& st, const AnnulusModel& m);

/// Exact Laplace transform  int_0^inf e^{-st} S(r, t) dt  in outer-radius units
/// (r in [sigma, 1], s in units of D/R^2), built from the d-dimensional Bessel
/// functions.
double laplace_survival(const AnnulusModel& m, double r, double s);

std::string to_json(const AnnulusModel& m);
std::string to_json(const OUWellModel& m);

}  // namespace xfpt
