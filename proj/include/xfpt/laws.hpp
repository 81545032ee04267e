#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <variant>

namespace xfpt {

/// Random stream used for all sampling.  One stream per worker / trial.
using RandomStream = std::mt19937_64;

namespace laws {

struct Exponential {
  double mean = 1.0;
};

/// P(X > x) = exp(-(x/scale)^shape)
struct Weibull {
  double scale = 1.0;
  double shape = 1.0;
};

/// P(X > x) = Γ(order, (x/scale)^shape) / Γ(order)
struct GeneralizedGamma {
  double scale = 1.0;
  double shape = 1.0;
  int order = 1;
};

/// Minimum convention: P(X > x) = exp(-exp((x - location)/scale)).
struct Gumbel {
  double location = 0.0;
  double scale = 1.0;
};

/// Law of sum_{j=1}^{k} X_j / (rate (n - j + 1)) with X_j iid Exp(1), i.e. the
/// k-th order statistic of n iid exponentials with the given rate.
struct RenyiOrderStat {
  double rate = 1.0;
  long long n = 1;
  long long k = 1;
};

}  // namespace laws

using LimitLaw = std::variant<laws::Exponential, laws::Weibull, laws::GeneralizedGamma,
                              laws::Gumbel, laws::RenyiOrderStat>;

namespace laws {

/// Throws DomainError if a parameter violates the type invariants.
void validate(const LimitLaw& law);

double survival(const LimitLaw& law, double x);

/// Raw moment E[X^m].  Gumbel and RenyiOrderStat support m in {1, 2} only.
double moment(const LimitLaw& law, double m);

double mean(const LimitLaw& law);
double variance(const LimitLaw& law);

double sample(const LimitLaw& law, RandomStream& rng);

/// "exponential", "weibull", ...
std::string type_name(const LimitLaw& law);

/// {type, params} record, e.g. `{"type":"gumbel","location":0.1,"scale":0.01}`.
std::string to_json(const LimitLaw& law);

}  // namespace laws
}  // namespace xfpt
