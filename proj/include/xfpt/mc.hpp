#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "xfpt/laws.hpp"
#include "xfpt/radial.hpp"

namespace xfpt {

struct SimConfig {
  double dt = 1e-4;        ///< in the model's time units
  double max_time = 10.0;  ///< censoring time
  long long trials = 1000;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Independent stream for one trial, derived from (seed, index) only.
RandomStream trial_stream(std::uint64_t seed, std::uint64_t index);

/// One searcher.  Returns the absorption time, or nullopt when the searcher is
/// still free at min(cutoff, cfg.max_time).
std::optional<double> simulate_fpt(const RadialModel& model, const SimConfig& cfg, RandomStream& rng,
                                   double cutoff = std::numeric_limits<double>::infinity());

/// Draws one FPT from a stream, or nullopt if it exceeds the cutoff.
using FptSampler = std::function<std::optional<double>(RandomStream&, double cutoff)>;

struct EmpiricalOrderStats {
  long long n = 0;
  long long k_max = 0;
  long long trials = 0;
  long long censored = 0;
  /// Row-major trials x k_max sorted times; rows of censored trials hold +inf
  /// past the last absorption.
  std::vector<double> times;
  std::vector<double> mean;    ///< per k, over trials with at least k absorptions
  std::vector<double> variance;
  std::vector<double> stderr_;
  std::vector<long long> count;  ///< uncensored trials per k

  double censored_fraction() const {
    return trials > 0 ? static_cast<double>(censored) / static_cast<double>(trials) : 0.0;
  }
  /// CSV `k,N,mean_emp,stderr,censored_frac,trials`.
  std::string to_csv() const;
};

/// Fastest k_max of n searchers per trial.  Searchers run sequentially and are
/// cut off at the current k_max-th best time.  Aborts with NumericalError when
/// more than `max_censored_fraction` of the trials are censored.
EmpiricalOrderStats sample_fastest(const FptSampler& sampler, long long n, long long k_max,
                                   long long trials, std::uint64_t seed, int jobs = 1,
                                   double max_censored_fraction = 0.01);

EmpiricalOrderStats sample_fastest(const RadialModel& model, long long n, long long k_max,
                                   const SimConfig& cfg, int jobs = 1);

/// Single-searcher samples (one per trial); nullopt entries are censored.
std::vector<std::optional<double>> sample_fpts(const RadialModel& model, const SimConfig& cfg,
                                               int jobs = 1);

/// Fraction of samples still free at each checkpoint (censored samples count
/// as free; checkpoints must not exceed the censoring time).
std::vector<double> empirical_survival(const std::vector<std::optional<double>>& samples,
                                       const std::vector<double>& checkpoints);

}  // namespace xfpt
