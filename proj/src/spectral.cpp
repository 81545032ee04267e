#include "xfpt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "xfpt/csv.hpp"
#include "xfpt/errors.hpp"

namespace xfpt {

namespace {

// Symmetric tridiagonal T = M^{-1/2} K M^{-1/2}.
struct Tridiagonal {
  std::vector<double> a;  // diagonal
  std::vector<double> b;  // off-diagonal
};

Tridiagonal symmetrize(const radial::Discretization& disc) {
  const std::size_t n = disc.size();
  Tridiagonal t;
  t.a.resize(n);
  t.b.resize(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) {
    t.a[i] = disc.diag[i] / disc.mass_u[i];
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    t.b[i] = disc.off[i] / std::sqrt(disc.mass_u[i] * disc.mass_u[i + 1]);
  }
  return t;
}

// Number of eigenvalues strictly below x (Sturm sequence).
std::size_t sturm_count(const Tridiagonal& t, double x, double pivmin) {
  std::size_t count = 0;
  double q = t.a[0] - x;
  for (std::size_t i = 0;; ++i) {
    if (std::abs(q) < pivmin) {
      q = -pivmin;
    }
    if (q < 0.0) {
      ++count;
    }
    if (i + 1 == t.a.size()) {
      break;
    }
    q = t.a[i + 1] - x - t.b[i] * t.b[i] / q;
  }
  return count;
}

double upper_bound(const Tridiagonal& t) {
  double hi = 0.0;
  const std::size_t n = t.a.size();
  for (std::size_t i = 0; i < n; ++i) {
    double r = std::abs(t.a[i]);
    if (i > 0) {
      r += std::abs(t.b[i - 1]);
    }
    if (i + 1 < n) {
      r += std::abs(t.b[i]);
    }
    hi = std::max(hi, r);
  }
  return hi;
}

// k-th smallest eigenvalue by bisection
double bisect(const Tridiagonal& t, std::size_t k, double hi, double pivmin) {
  double lo = 0.0;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(t, mid, pivmin) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi + pivmin) {
      break;
    }
  }
  return 0.5 * (lo + hi);
}

// (T - shift I) x = rhs by LU with partial pivoting.
std::vector<double> shifted_solve(const Tridiagonal& t, double shift, std::vector<double> rhs,
                                  double tiny) {
  const std::size_t n = t.a.size();
  std::vector<double> d(n), dl(t.b), du(t.b), du2(n, 0.0);
  std::vector<bool> swapped(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = t.a[i] - shift;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) {
        d[i] = tiny;
      }
      const double f = dl[i] / d[i];
      dl[i] = f;
      d[i + 1] -= f * du[i];
    } else {
      const double f = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = f;
      const double tmp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = tmp - f * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -f * du[i + 1];
      }
      swapped[i] = true;
    }
  }
  if (d[n - 1] == 0.0) {
    d[n - 1] = tiny;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (swapped[i]) {
      const double tmp = rhs[i] - dl[i] * rhs[i + 1];
      rhs[i] = rhs[i + 1];
      rhs[i + 1] = tmp;
    } else {
      rhs[i + 1] -= dl[i] * rhs[i];
    }
  }
  rhs[n - 1] /= d[n - 1];
  if (n > 1) {
    rhs[n - 2] = (rhs[n - 2] - du[n - 2] * rhs[n - 1]) / d[n - 2];
  }
  for (std::size_t i = n - 2; i-- > 0;) {
    rhs[i] = (rhs[i] - du[i] * rhs[i + 1] - du2[i] * rhs[i + 2]) / d[i];
  }
  return rhs;
}

void normalize_euclid(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) {
    s += x * x;
  }
  s = std::sqrt(s);
  for (double& x : v) {
    x /= s;
  }
}

struct Modes {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;  // on unknowns, (.,.)_rho-orthonormal
};

Modes lowest_modes(const radial::Discretization& disc, std::size_t count) {
  const std::size_t n = disc.size();
  if (count == 0 || count > n) {
    throw DomainError("eigenpairs: mode count out of range");
  }
  const Tridiagonal t = symmetrize(disc);
  const double hi = upper_bound(t) * (1.0 + 1e-12) + 1e-300;
  const double pivmin = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  const double tiny = std::numeric_limits<double>::epsilon() * hi;

  Modes out;
  std::vector<std::vector<double>> basis;  // Euclidean eigenvectors of T
  for (std::size_t k = 0; k < count; ++k) {
    const double lam = bisect(t, k, hi, pivmin);
    // deterministic, sign-mixed start vector
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i) + 0.3 * static_cast<double>(k));
    }
    for (int it = 0; it < 4; ++it) {
      v = shifted_solve(t, lam, v, tiny);
      for (const auto& q : basis) {
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          dot += q[i] * v[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
          v[i] -= dot * q[i];
        }
      }
      normalize_euclid(v);
    }
    basis.push_back(v);

    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = v[i] / std::sqrt(disc.mass_u[i]);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      norm += disc.mass_u[i] * u[i] * u[i];
    }
    const double scale = std::sqrt(disc.total_mass / norm);
    const double sign = u[disc.reflecting] < 0.0 ? -1.0 : 1.0;
    for (double& x : u) {
      x *= sign * scale;
    }
    out.values.push_back(disc.rayleigh_quotient(u));
    out.vectors.push_back(std::move(u));
  }
  return out;
}

}  // namespace

double EigenSystem::inner(const std::vector<double>& f, const std::vector<double>& g) const {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    s += disc.mass_u[i] * f[i] * g[i];
  }
  return s / disc.total_mass;
}

EigenSystem eigenpairs(const RadialModel& model, int n_max, const GridSpec& grid) {
  if (n_max < 0) {
    throw DomainError("eigenpairs: n_max must be >= 0");
  }
  grid.validate();
  if (n_max > grid.num_cells / 8) {
    throw DomainError("eigenpairs: n_max exceeds num_cells / 8");
  }
  EigenSystem sys{model, radial::discretize(model, grid), {}, {}};
  Modes modes = lowest_modes(sys.disc, static_cast<std::size_t>(n_max) + 1);
  sys.eigenvalues = std::move(modes.values);
  sys.eigenfunctions = std::move(modes.vectors);
  return sys;
}

std::vector<double> ground_state(const radial::Discretization& disc) {
  return lowest_modes(disc, 1).vectors.front();
}

SpectralCoefficients expansion_coefficients(const EigenSystem& sys, const InitialCondition& initial) {
  RadialModel m = sys.model;
  std::visit([&initial](auto& x) { x.initial = initial; }, m);
  validate(m);
  const std::vector<double> mu = radial::initial_weights(sys.disc, m, &sys.eigenfunctions.front());
  const std::vector<double> ones(sys.disc.size(), 1.0);
  SpectralCoefficients c;
  c.values.reserve(sys.size());
  for (const auto& u : sys.eigenfunctions) {
    double start = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      start += mu[i] * u[i];
    }
    c.values.push_back(sys.inner(u, ones) * start);
  }
  return c;
}

SpectralSurvival survival_from_expansion(const EigenSystem& sys, const SpectralCoefficients& coeffs,
                                         const std::vector<double>& times) {
  const auto& lam = sys.eigenvalues;
  const auto& a = coeffs.values;
  if (a.size() != lam.size()) {
    throw DomainError("survival_from_expansion: coefficient count does not match the system");
  }
  double missing = 1.0;
  for (double v : a) {
    missing -= v;
  }
  SpectralSurvival out;
  out.curve.times = times;
  const std::size_t last = lam.size() - 1;
  for (double t : times) {
    if (!(t > 0.0)) {
      throw DomainError("survival_from_expansion: times must be positive");
    }
    // 1 - S = (1 - sum A_n) + sum A_n (1 - e^{-lambda_n t})
    double absorbed = missing;
    for (std::size_t n = 0; n < lam.size(); ++n) {
      absorbed -= a[n] * std::expm1(-lam[n] * t);
    }
    absorbed = std::clamp(absorbed, 0.0, 1.0);
    out.curve.absorbed.push_back(absorbed);
    out.curve.values.push_back(1.0 - absorbed);
    double bound = std::abs(a[last]) * std::exp(-lam[last] * t);
    if (last > 0) {
      bound /= -std::expm1(-(lam[last] - lam[last - 1]) * t);
    }
    out.truncation_bound.push_back(bound);
  }
  return out;
}

std::vector<double> quasi_stationary_density(const EigenSystem& sys) {
  const auto& u0 = sys.eigenfunctions.front();
  const double mass = sys.inner(u0, std::vector<double>(u0.size(), 1.0));
  std::vector<double> q = sys.disc.expand(u0);
  for (double& v : q) {
    v = std::max(v, 0.0) / mass;
  }
  return q;
}

double eta_error(const SpectralCoefficients& coeffs, const EigenSystem& sys, double x) {
  if (!(x >= 0.0)) {
    throw DomainError("eta_error: x must be >= 0");
  }
  const auto& lam = sys.eigenvalues;
  double eta = coeffs.values.at(0) - 1.0;
  for (std::size_t n = 1; n < lam.size() && n < coeffs.values.size(); ++n) {
    eta += coeffs.values[n] * std::exp((1.0 - lam[n] / lam[0]) * x);
  }
  return eta;
}

double spectral_exponential_stat(const EigenSystem& sys, long long n) {
  if (n < 1) {
    throw DomainError("spectral_exponential_stat: n must be >= 1");
  }
  if (sys.size() < 2) {
    throw DomainError("spectral_exponential_stat: needs at least two modes");
  }
  const double nn = static_cast<double>(n);
  return nn * std::exp(-sys.eigenvalues[1] / (sys.eigenvalues[0] * nn));
}

std::string spectrum_csv(const EigenSystem& sys, const SpectralCoefficients& coeffs) {
  CsvWriter w({"n", "lambda_n", "A_n"});
  for (std::size_t n = 0; n < sys.size(); ++n) {
    w.row({std::to_string(n), format_real(sys.eigenvalues[n]), format_real(coeffs.values.at(n))});
  }
  return w.str();
}

}  // namespace xfpt
