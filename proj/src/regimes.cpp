#include "xfpt/regimes.hpp"

#include <cmath>
#include <limits>

#include "xfpt/errors.hpp"
#include "xfpt/extremes.hpp"
#include "xfpt/specialfn.hpp"

namespace xfpt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_slow(const AnnulusModel& m) {
  m.validate();
  if (m.dim == 1 && m.perfect()) {
    throw UnsupportedError("regimes: d = 1 with a perfect target has no slow regime");
  }
}

double surface(const AnnulusModel& m) { return m.dim == 1 ? 1.0 : std::pow(m.sigma, m.dim - 1); }

// theta_exp = N exp(-c / N)
double slow_constant(const AnnulusModel& m) {
  if (m.perfect()) {
    return m.dim == 2 ? -0.5 * std::log(m.sigma) : 1.0 / (3.0 * m.sigma);
  }
  return 1.0 / (m.dim * m.kappa * surface(m));
}

// theta_gum = |ln x| / ln N
double gumbel_base(const AnnulusModel& m) {
  const double half = m.dim == 1 ? 1.0 : std::pow(m.sigma, 0.5 * (m.dim - 1));
  return m.perfect() ? half : m.kappa * half;
}

// The statistics are smooth in N > 0, so thresholds below one can still be
// checked against them.
void require_n(double n) {
  if (!(n > 0.0)) {
    throw DomainError("regimes: N must be positive");
  }
}

void require_theta(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw DomainError("regimes: theta must lie in (0, 1)");
  }
}

}  // namespace

std::string label_name(RegimeLabel label) {
  switch (label) {
    case RegimeLabel::Exponential:
      return "exponential";
    case RegimeLabel::Gumbel:
      return "gumbel";
    case RegimeLabel::WeibullExtreme:
      return "weibull-extreme";
    case RegimeLabel::ExponentialExtreme:
      return "exponential-extreme";
    case RegimeLabel::Indeterminate:
      break;
  }
  return "indeterminate";
}

double sufficient_exponential_stat(long long n, double mfpt, double t_diff) {
  if (n < 1 || !(mfpt > 0.0) || !(t_diff > 0.0)) {
    throw DomainError("sufficient_exponential_stat: arguments must be positive");
  }
  const double nn = static_cast<double>(n);
  return nn * std::exp(-mfpt / (nn * t_diff));
}

double necessary_exponential_violated(long long n, double mfpt, double t_diff) {
  if (n < 2) {
    throw DomainError("necessary_exponential_violated: N must be >= 2");
  }
  if (!(mfpt > 0.0) || !(t_diff > 0.0)) {
    throw DomainError("necessary_exponential_violated: arguments must be positive");
  }
  const double nn = static_cast<double>(n);
  return 4.0 * std::log(nn) * mfpt / (nn * t_diff);
}

double theta_exp(const AnnulusModel& m, double n) {
  require_slow(m);
  require_n(n);
  if (std::holds_alternative<QuasiStationary>(m.initial)) {
    return 0.0;
  }
  return n * std::exp(-slow_constant(m) / n);
}

double theta_gum(const AnnulusModel& m, double n) {
  require_slow(m);
  require_n(n);
  if (!std::holds_alternative<DeltaAtOuter>(m.initial)) {
    return kInf;
  }
  const double x = std::abs(std::log(gumbel_base(m)));
  if (x == 0.0) {
    return 0.0;  // condition holds for every N; n_gum = 1
  }
  if (n < 1.0) {
    throw DomainError("theta_gum: N must be >= 1");
  }
  return n == 1.0 ? kInf : x / std::log(n);
}

double theta_wei(const AnnulusModel& m, double n) {
  require_slow(m);
  require_n(n);
  if (!std::holds_alternative<Uniform>(m.initial)) {
    return kInf;
  }
  const double base = m.dim * n * surface(m);
  return m.perfect() ? 1.0 / (base * base) : 1.0 / (base * m.kappa);
}

Thresholds n_thresholds(const AnnulusModel& m, double theta) {
  require_slow(m);
  require_theta(theta);
  Thresholds t{kInf, kInf, kInf};
  if (!std::holds_alternative<QuasiStationary>(m.initial)) {
    const double c = slow_constant(m);
    t.n_exp = c / specialfn::lambert_w0(c / theta);
  }
  if (std::holds_alternative<DeltaAtOuter>(m.initial)) {
    t.n_gum = std::exp(std::abs(std::log(gumbel_base(m))) / theta);
  }
  if (std::holds_alternative<Uniform>(m.initial)) {
    const double base = m.dim * surface(m);
    t.n_wei = m.perfect() ? 1.0 / (base * std::sqrt(theta)) : 1.0 / (base * m.kappa * theta);
  }
  return t;
}

RegimeReport classify(const AnnulusModel& m, long long n, double theta, std::optional<double> mfpt) {
  if (n < 1) {
    throw DomainError("classify: N must be >= 1");
  }
  RegimeReport r;
  r.n = n;
  r.theta = theta;
  r.thresholds = n_thresholds(m, theta);
  const double nn = static_cast<double>(n);
  r.theta_exp = theta_exp(m, nn);
  r.theta_gum = theta_gum(m, nn);
  r.theta_wei = theta_wei(m, nn);
  r.mfpt_from_model = !mfpt.has_value();
  r.mfpt = mfpt ? *mfpt : mfpt_asymptotic(m);
  r.sufficient_stat = sufficient_exponential_stat(n, r.mfpt, m.t_diff);
  r.necessary_stat = n >= 2 ? necessary_exponential_violated(n, r.mfpt, m.t_diff) : kInf;

  const bool uniform = std::holds_alternative<Uniform>(m.initial);
  if (nn <= r.thresholds.n_exp) {
    r.label = RegimeLabel::Exponential;
  } else if (std::holds_alternative<DeltaAtOuter>(m.initial) && nn >= r.thresholds.n_gum) {
    r.label = RegimeLabel::Gumbel;
  } else if (uniform && nn >= r.thresholds.n_wei) {
    r.label = m.perfect() ? RegimeLabel::WeibullExtreme : RegimeLabel::ExponentialExtreme;
  } else {
    r.label = RegimeLabel::Indeterminate;
  }

  try {
    if (r.label == RegimeLabel::Exponential) {
      r.recommended_law = small_n_law(r.mfpt, {n, 1, std::nullopt});
    } else if (r.label != RegimeLabel::Indeterminate) {
      r.recommended_law = large_n_law(short_time_coefficients(m), {n, 1, std::nullopt});
    }
  } catch (const DomainError&) {
    r.recommended_law.reset();
  }
  return r;
}

double max_approximation(long long n, double mfpt, double t_diff) {
  if (n < 2) {
    throw DomainError("max_approximation: N must be >= 2");
  }
  if (!(mfpt > 0.0) || !(t_diff > 0.0)) {
    throw DomainError("max_approximation: arguments must be positive");
  }
  const double nn = static_cast<double>(n);
  return std::max(mfpt / nn, t_diff / (4.0 * std::log(nn)));
}

double max_approximation_crossover(double mfpt, double t_diff) {
  if (!(mfpt > 0.0) || !(t_diff > 0.0)) {
    throw DomainError("max_approximation_crossover: arguments must be positive");
  }
  // g(N) = 4 ln(N) mfpt / (N t_diff) peaks at N = e and decays beyond it
  auto g = [&](double x) { return 4.0 * std::log(x) * mfpt / (x * t_diff) - 1.0; };
  const double e = std::exp(1.0);
  if (g(e) <= 0.0) {
    return 1.0;
  }
  double lo = e;
  double hi = 2.0 * e;
  while (g(hi) > 0.0) {
    hi *= 2.0;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace xfpt
