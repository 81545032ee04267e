#include "xfpt/extremes.hpp"

#include <cmath>

#include "xfpt/errors.hpp"
#include "xfpt/specialfn.hpp"

namespace xfpt {

namespace {

void require_asymptotics(const ShortTimeAsymptotics& st) {
  if (!(st.amp > 0.0) || !std::isfinite(st.amp)) {
    throw DomainError("short-time amplitude A must be positive");
  }
  if (!(st.power > 0.0)) {
    throw DomainError("short-time power p must be positive");
  }
  if (!(st.gap >= 0.0)) {
    throw DomainError("short-time gap C must be >= 0");
  }
}

void require_gumbel(const ShortTimeAsymptotics& st, const ExtremeQuery& q) {
  if (q.k != 1) {
    throw UnsupportedError(
        "the Gumbel-type limit of T_{k,N} for k >= 2 is not provided; see the extreme-value "
        "literature for order statistics of minima");
  }
  if (q.n < 2) {
    throw DomainError("the Gumbel limit needs N >= 2");
  }
  (void)st;
}

}  // namespace

void ExtremeQuery::validate() const {
  if (n < 1 || k < 1 || k > n) {
    throw DomainError("extreme query: need 1 <= k <= n");
  }
  if (moment && !(*moment > 0.0)) {
    throw DomainError("extreme query: moment order must be positive");
  }
}

GumbelSequences gumbel_sequences(const ShortTimeAsymptotics& st, long long n) {
  require_asymptotics(st);
  if (!(st.gap > 0.0)) {
    throw DomainError("gumbel sequences need C > 0");
  }
  if (n < 2) {
    throw DomainError("gumbel sequences need N >= 2");
  }
  const double ln_n = std::log(static_cast<double>(n));
  const double ln2 = ln_n * ln_n;
  const double c = st.gap;
  const double p = st.power;
  // ln(A C^p) = ln A + p ln C
  const double log_acp = std::log(st.amp) + p * std::log(c);
  return {c / ln2, c / ln_n + c * p * std::log(ln_n) / ln2 - c * log_acp / ln2};
}

LimitLaw small_n_law(double mfpt, const ExtremeQuery& q) {
  q.validate();
  if (!(mfpt > 0.0) || !std::isfinite(mfpt)) {
    throw DomainError("small_n_law: mfpt must be positive and finite");
  }
  if (q.k == 1) {
    return laws::Exponential{mfpt / static_cast<double>(q.n)};
  }
  return laws::RenyiOrderStat{1.0 / mfpt, q.n, q.k};
}

LimitLaw large_n_law(const ShortTimeAsymptotics& st, const ExtremeQuery& q) {
  q.validate();
  require_asymptotics(st);
  if (st.gap == 0.0) {
    const double scale = std::pow(st.amp * static_cast<double>(q.n), -1.0 / st.power);
    if (q.k == 1) {
      return laws::Weibull{scale, st.power};
    }
    return laws::GeneralizedGamma{scale, st.power, static_cast<int>(q.k)};
  }
  require_gumbel(st, q);
  const GumbelSequences s = gumbel_sequences(st, q.n);
  return laws::Gumbel{s.b, s.a};
}

double large_n_moment(const ShortTimeAsymptotics& st, const ExtremeQuery& q,
                      bool leading_order_only) {
  q.validate();
  require_asymptotics(st);
  const double m = q.moment.value_or(1.0);
  if (st.gap == 0.0) {
    const double k = static_cast<double>(q.k);
    const double an = st.amp * static_cast<double>(q.n);
    return std::exp(std::lgamma(k + m / st.power) - std::lgamma(k) - (m / st.power) * std::log(an));
  }
  require_gumbel(st, q);
  if (m != 1.0 && m != 2.0) {
    throw UnsupportedError("Gumbel-regime moments are available for m = 1, 2 only");
  }
  const double ln_n = std::log(static_cast<double>(q.n));
  if (leading_order_only) {
    const double lead = st.gap / ln_n;
    return m == 1.0 ? lead : lead * lead;
  }
  const GumbelSequences s = gumbel_sequences(st, q.n);
  const double mean = s.b - specialfn::kEulerGamma * s.a;
  if (m == 1.0) {
    return mean;
  }
  return specialfn::kPi * specialfn::kPi * s.a * s.a / 6.0 + mean * mean;
}

}  // namespace xfpt
