#pragma once

// Special functions shared by the whole library.  Every function is pure and
// throws DomainError outside its stated domain instead of returning NaN.

namespace xfpt::specialfn {

inline constexpr double kEulerGamma = 0.57721566490153286061;
inline constexpr double kPi = 3.14159265358979323846;

/// Order alpha in {0,1} and dimension d in {1,2,3} of the d-dimensional
/// modified Bessel functions I_{alpha,d}, K_{alpha,d}.
struct BesselOrder {
  int alpha = 0;
  int dim = 2;
};

double gamma_fn(double x);

/// Γ(k, z) for integer k >= 1, normalised so that Γ(k, 0) = Γ(k).
double upper_incomplete_gamma(int k, double z);

/// Regularised Q(k, z) = Γ(k, z) / Γ(k); does not overflow for large k.
double regularized_upper_gamma(int k, double z);

/// Principal branch W0 on [-1/e, inf).
double lambert_w0(double z);

double bessel_i(BesselOrder order, double x);
double bessel_k(BesselOrder order, double x);

double erfc(double x);

}  // namespace xfpt::specialfn
