#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xfpt/radial.hpp"

namespace xfpt {

/// Crank-Nicolson stepping with geometric step growth.  Unset fields are
/// resolved from the model when the solve starts.
struct TimeSpec {
  std::optional<double> dt_initial;  ///< default 1e-6 t_diff
  std::optional<double> t_final;     ///< default 30 x the largest discrete mean exit time
  std::optional<double> dt_max;      ///< default t_final / 2000
  double growth = 1.01;
  /// Backward-Euler steps taken before switching to Crank-Nicolson; they damp
  /// the stiff modes excited by the incompatible initial data.
  int startup_steps = 4;
  /// Radial snapshots are stored at the first step reaching each time.
  std::vector<double> snapshot_times;
};

struct RadialSnapshot {
  double time = 0.0;
  std::vector<double> radii;
  std::vector<double> values;  ///< S(r, t) on all nodes
};

/// Tabulated S(t) with t[0] = 0.  `absorbed` holds 1 - S computed without
/// cancellation; it drives the early-time part of extreme-FPT quadrature.
struct SurvivalCurve {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> absorbed;
  std::vector<RadialSnapshot> snapshots;

  /// Builds a curve from samples; absorbed is filled as 1 - S.
  static SurvivalCurve from_values(std::vector<double> times, std::vector<double> values);

  std::size_t size() const { return times.size(); }
  /// Throws NumericalError when values leave [0,1] or increase by more than `slack`.
  void validate(double slack = 1e-9) const;
  /// CSV with header `t,S`.
  std::string to_csv() const;
};

SurvivalCurve solve_survival(const RadialModel& model, const GridSpec& grid, const TimeSpec& time);

enum class MeanStatus {
  Resolved,          ///< curve decays below the tail threshold
  TailExtrapolated,  ///< exponential tail beyond t_final was added
  Degenerate,        ///< S never leaves 1; value is +inf
};

struct MeanEstimate {
  double value = 0.0;
  MeanStatus status = MeanStatus::Resolved;
};

struct QuadratureOptions {
  bool extrapolate_tail = true;
  /// S(t_final) above this needs the tail extrapolation.
  double tail_threshold = 0.01;
  /// Refuse when N (1 - S(t_1)) reaches this value.
  double early_time_limit = 0.1;
};

/// E[tau] = int S dt by the trapezoidal rule plus S(t_f)/lambda_fit.
MeanEstimate mean_fpt(const SurvivalCurve& curve, const QuadratureOptions& opts = {});

/// E[T_{k,N}] = int P(T_{k,N} > t) dt with the binomial order-statistic
/// survival evaluated in log space.
MeanEstimate mean_kth_fastest(const SurvivalCurve& curve, long long n, long long k = 1,
                              const QuadratureOptions& opts = {});

/// E[T_N] = int S^N dt for real N >= 1 (used for markers at non-integer thresholds).
MeanEstimate mean_fastest(const SurvivalCurve& curve, double n, const QuadratureOptions& opts = {});

/// Decay rate fitted to ln S over the last decade in which S stays above 1e-9.
double tail_decay_rate(const SurvivalCurve& curve);

}  // namespace xfpt
