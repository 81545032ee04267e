#include "xfpt/specialfn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "xfpt/errors.hpp"

namespace xfpt::specialfn {

namespace {

void require_dim(BesselOrder order) {
  if (order.alpha < 0 || order.alpha > 1) {
    throw DomainError("bessel: order alpha must be 0 or 1, got " + std::to_string(order.alpha));
  }
  if (order.dim < 1 || order.dim > 3) {
    throw DomainError("bessel: dimension must be 1, 2 or 3, got " + std::to_string(order.dim));
  }
}

}  // namespace

double gamma_fn(double x) {
  if (!(x > 0.0)) {
    throw DomainError("gamma_fn: argument must be positive");
  }
  return std::tgamma(x);
}

double regularized_upper_gamma(int k, double z) {
  if (k < 1) {
    throw DomainError("upper_incomplete_gamma: k must be >= 1");
  }
  if (!(z >= 0.0)) {
    throw DomainError("upper_incomplete_gamma: z must be >= 0");
  }
  if (z == 0.0) {
    return 1.0;
  }
  if (std::isinf(z)) {
    return 0.0;
  }
  // e^{-z} sum_{j<k} z^j/j!, accumulated in log space so that neither e^{-z}
  // nor z^j overflows on its own.
  const double log_z = std::log(z);
  double log_term = -z;  // j = 0
  double max_log = log_term;
  for (int j = 1; j < k; ++j) {
    log_term += log_z - std::log(static_cast<double>(j));
    max_log = std::max(max_log, log_term);
  }
  double sum = 0.0;
  log_term = -z;
  for (int j = 0; j < k; ++j) {
    if (j > 0) {
      log_term += log_z - std::log(static_cast<double>(j));
    }
    sum += std::exp(log_term - max_log);
  }
  const double q = std::exp(max_log) * sum;
  return std::min(q, 1.0);
}

double upper_incomplete_gamma(int k, double z) {
  const double q = regularized_upper_gamma(k, z);
  return q * std::tgamma(static_cast<double>(k));
}

double lambert_w0(double z) {
  constexpr double kInvE = 0.36787944117144232160;
  if (std::isnan(z) || z < -kInvE * (1.0 + 4.0 * 2.2e-16)) {
    throw DomainError("lambert_w0: argument below -1/e");
  }
  if (z == 0.0) {
    return 0.0;
  }
  if (std::isinf(z)) {
    return z;
  }
  if (z <= -kInvE) {
    return -1.0;
  }

  double w;
  if (z < -0.25) {
    // branch-point series in p = sqrt(2(ez + 1))
    const double p = std::sqrt(2.0 * (std::exp(1.0) * z + 1.0));
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else {
    w = std::log1p(z);
    if (z > 3.0) {
      w -= std::log(w);
    }
  }

  for (int it = 0; it < 32; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - z;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) {
      break;
    }
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 4.0 * 2.2e-16 * (1.0 + std::abs(w))) {
      break;
    }
  }
  return w;
}

double bessel_i(BesselOrder order, double x) {
  require_dim(order);
  if (!(x > 0.0)) {
    throw DomainError("bessel_i: argument must be positive");
  }
  switch (order.dim) {
    case 1:
      return std::exp(x);
    case 2:
      return std::cyl_bessel_i(static_cast<double>(order.alpha), x);
    default:
      if (order.alpha == 0) {
        return std::sinh(x) / x;
      }
      if (x < 0.5) {
        // d/dx sinh(x)/x = sum_{k>=1} 2k x^{2k-1}/(2k+1)!; avoids the
        // cancellation in x cosh x - sinh x
        double term = x / 3.0;  // k = 1
        double sum = term;
        for (int k = 2; k < 20; ++k) {
          term *= x * x * k / ((k - 1.0) * (2.0 * k) * (2.0 * k + 1.0));
          sum += term;
        }
        return sum;
      }
      return (x * std::cosh(x) - std::sinh(x)) / (x * x);
  }
}

double bessel_k(BesselOrder order, double x) {
  require_dim(order);
  if (!(x > 0.0)) {
    throw DomainError("bessel_k: argument must be positive");
  }
  switch (order.dim) {
    case 1:
      return std::exp(-x);
    case 2:
      return std::cyl_bessel_k(static_cast<double>(order.alpha), x);
    default:
      if (order.alpha == 0) {
        return std::exp(-x) / x;
      }
      return std::exp(-x) * (x + 1.0) / (x * x);
  }
}

double erfc(double x) { return std::erfc(x); }

}  // namespace xfpt::specialfn
