#pragma once

#include <optional>
#include <string>

#include "xfpt/laws.hpp"
#include "xfpt/model.hpp"

namespace xfpt {

enum class RegimeLabel { Exponential, Gumbel, WeibullExtreme, ExponentialExtreme, Indeterminate };

/// "exponential", "gumbel", "weibull-extreme", "exponential-extreme", "indeterminate"
std::string label_name(RegimeLabel label);

/// Searcher-count thresholds; +inf marks a threshold that does not apply to
/// the model's initial condition.
struct Thresholds {
  double n_exp = 0.0;
  double n_gum = 0.0;
  double n_wei = 0.0;
};

struct RegimeReport {
  long long n = 1;
  double theta = 0.5;
  double theta_exp = 0.0;
  double theta_gum = 0.0;
  double theta_wei = 0.0;
  Thresholds thresholds;
  double mfpt = 0.0;
  bool mfpt_from_model = true;
  /// N exp(-mfpt / (N t_diff)) and 4 ln N mfpt / (N t_diff) for the supplied mfpt.
  double sufficient_stat = 0.0;
  double necessary_stat = 0.0;
  RegimeLabel label = RegimeLabel::Indeterminate;
  std::optional<LimitLaw> recommended_law;
};

/// N exp(-mfpt / (N t_diff)); the exponential regime is certified when small.
double sufficient_exponential_stat(long long n, double mfpt, double t_diff);

/// 4 ln(N) mfpt / (N t_diff); the exponential regime is ruled out when small.
/// Meaningful only when the start is separated from the target.
double necessary_exponential_violated(long long n, double mfpt, double t_diff);

/// Model-specific statistics; +inf where the statistic does not apply.
double theta_exp(const AnnulusModel& m, double n);
double theta_gum(const AnnulusModel& m, double n);
double theta_wei(const AnnulusModel& m, double n);

Thresholds n_thresholds(const AnnulusModel& m, double theta);

/// `mfpt` defaults to mfpt_asymptotic(m).
RegimeReport classify(const AnnulusModel& m, long long n, double theta,
                      std::optional<double> mfpt = std::nullopt);

/// max{mfpt / N, t_diff / (4 ln N)}.
double max_approximation(long long n, double mfpt, double t_diff);

/// Largest N at which the two branches of max_approximation are equal,
/// or 1 when the large-N branch dominates for every N >= 2.
double max_approximation_crossover(double mfpt, double t_diff);

}  // namespace xfpt
