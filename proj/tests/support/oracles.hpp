#pragma once

// Reference values computed without the library: closed-form series,
// bisection roots and adaptive quadrature.  Tests compare against these.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                          double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  // below a few ulps of the piece the difference is rounding noise
  const double floor = 8.0 * 2.220446049250313e-16 * std::fabs(left + right);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * std::max(tol, floor)) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

/// Adaptive Simpson on [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int depth = 50) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

/// Integral over [a, b] split at log-spaced breakpoints (for integrands with
/// structure on many scales).
inline double integrate_log(const std::function<double(double)>& f, double a, double b,
                            int pieces = 60, double tol = 1e-13) {
  double total = integrate(f, 0.0, a, tol);
  const double la = std::log(a), lb = std::log(b);
  for (int i = 0; i < pieces; ++i) {
    const double x0 = std::exp(la + (lb - la) * i / pieces);
    const double x1 = std::exp(la + (lb - la) * (i + 1) / pieces);
    total += integrate(f, x0, x1, tol);
  }
  return total;
}

/// Root of f on [a, b] with a sign change.
inline double bisect(const std::function<double(double)>& f, double a, double b, int iters = 200) {
  double fa = f(a);
  for (int i = 0; i < iters; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

/// W0 by the fixed-point form of Newton's method, w <- (w^2 + z e^{-w}) / (w + 1).
inline double lambert_w0(double z) {
  double w = z < 1.0 ? z : std::log(z);
  for (int i = 0; i < 200; ++i) w = (w * w + z * std::exp(-w)) / (w + 1.0);
  return w;
}

/// Unit interval, target at 0, reflecting wall at 1, start at 1, D = 1:
/// 1 - S(t) = 2 sum_k (-1)^k erfc((2k+1) / (2 sqrt t)) by the method of images.
inline double interval_absorbed_images(double t) {
  double sum = 0.0;
  for (int k = 0; k < 60; ++k) {
    const double term = std::erfc((2.0 * k + 1.0) / (2.0 * std::sqrt(t)));
    sum += (k % 2 == 0 ? 2.0 : -2.0) * term;
    if (term < 1e-300) break;
  }
  return sum;
}

/// Same problem by the eigenfunction series; accurate for t >~ 1e-3.
inline double interval_survival_series(double t, double x = 1.0, int terms = 4000) {
  double s = 0.0;
  for (int n = 0; n < terms; ++n) {
    const double k = (n + 0.5) * kPi;
    s += 2.0 / k * std::sin(k * x) * std::exp(-k * k * t);
  }
  return s;
}

/// Uniform start on the unit interval, perfect target at 0.
inline double interval_uniform_survival(double t, int terms = 4000) {
  double s = 0.0;
  for (int n = 0; n < terms; ++n) {
    const double k = (n + 0.5) * kPi;
    s += 2.0 / (k * k) * std::exp(-k * k * t);
  }
  return s;
}

/// Smallest positive roots of sqrt(l) tan(sqrt(l)) = kappa (Robin target at 0,
/// reflecting at 1), by bisection on each branch of tan.
inline std::vector<double> robin_interval_eigenvalues(double kappa, int count) {
  std::vector<double> out;
  for (int n = 0; n < count; ++n) {
    const double lo = n * kPi + 1e-14, hi = (n + 0.5) * kPi - 1e-14;
    const double q = bisect([&](double x) { return x * std::tan(x) - kappa; }, lo, hi);
    out.push_back(q * q);
  }
  return out;
}

/// d = 3 annulus sigma < r < 1 (outer-radius units, D = 1), perfect target at
/// sigma, reflecting at 1, start on r = 1.  Modes sin(k (r - sigma)) / r with
/// tan(k L) = k, L = 1 - sigma.
class SphericalShellSeries {
 public:
  explicit SphericalShellSeries(double sigma, int modes = 3000) {
    const double len = 1.0 - sigma;
    auto f = [&](double k) { return k * std::cos(k * len) - std::sin(k * len); };
    // one root in each interval ((n - 1/2) pi, (n + 1/2) pi) / L beyond the first
    for (int n = 0; static_cast<int>(k_.size()) < modes; ++n) {
      const double lo = std::max(1e-9, (n - 0.5) * kPi / len + 1e-12);
      const double hi = (n + 0.5) * kPi / len - 1e-12;
      if (f(lo) * f(hi) < 0.0) k_.push_back(bisect(f, lo, hi));
    }
    for (double k : k_) {
      const double norm = len / 2.0 - std::sin(2.0 * k * len) / (4.0 * k);
      // int_sigma^1 r sin(k (r - sigma)) dr
      const double proj = -std::cos(k * len) / k + std::sin(k * len) / (k * k) + sigma / k;
      c_.push_back(proj / norm * std::sin(k * len));
    }
  }

  /// S(t) with t in outer-radius units R^2 / D.
  double survival(double t) const {
    double s = 0.0;
    for (std::size_t i = 0; i < k_.size(); ++i) s += c_[i] * std::exp(-k_[i] * k_[i] * t);
    return s;
  }

  double principal_rate() const { return k_[0] * k_[0]; }

 private:
  std::vector<double> k_, c_;
};

}  // namespace oracle
