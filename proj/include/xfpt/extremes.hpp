#pragma once

#include <optional>

#include "xfpt/laws.hpp"
#include "xfpt/model.hpp"

namespace xfpt {

/// T_{k,N}: the k-th fastest of N searchers, optionally with a moment order m.
struct ExtremeQuery {
  long long n = 1;
  long long k = 1;
  std::optional<double> moment;

  void validate() const;
};

/// Centring and scaling of the Gumbel limit for C > 0.
struct GumbelSequences {
  double a = 0.0;  ///< C / (ln N)^2
  double b = 0.0;  ///< C / ln N + C p ln ln N / (ln N)^2 - C (ln A + p ln C) / (ln N)^2
};

GumbelSequences gumbel_sequences(const ShortTimeAsymptotics& st, long long n);

/// Exponential-regime law of T_{k,N}: Exponential{mfpt/N} for k = 1, else the
/// Renyi sum with rate 1/mfpt.
LimitLaw small_n_law(double mfpt, const ExtremeQuery& q);

/// Large-N law: GeneralizedGamma{(A N)^{-1/p}, p, k} when C = 0 (a Weibull for
/// k = 1), Gumbel{b_N, a_N} when C > 0 and k = 1.
LimitLaw large_n_law(const ShortTimeAsymptotics& st, const ExtremeQuery& q);

/// Asymptotic raw moment E[T_{k,N}^m] (m defaults to 1).  For C > 0 only m in {1, 2}
/// are available; `leading_order_only` keeps just C / ln N.
double large_n_moment(const ShortTimeAsymptotics& st, const ExtremeQuery& q,
                      bool leading_order_only = false);

}  // namespace xfpt
