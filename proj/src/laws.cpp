#include "xfpt/laws.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "xfpt/csv.hpp"
#include "xfpt/errors.hpp"
#include "xfpt/specialfn.hpp"

namespace xfpt::laws {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || std::isinf(v)) {
    throw DomainError(std::string("law parameter must be positive and finite: ") + what);
  }
}

double log_binomial(long long n, long long j) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(j) + 1.0) -
         std::lgamma(static_cast<double>(n - j) + 1.0);
}

// P(k-th order statistic of n iid Exp(rate) > x)
double renyi_survival(const RenyiOrderStat& r, double x) {
  if (x <= 0.0) {
    return 1.0;
  }
  const double log_q = -r.rate * x;             // ln P(X > x)
  const double log_p = std::log(-std::expm1(log_q));  // ln P(X <= x)
  double total = 0.0;
  for (long long j = 0; j < r.k; ++j) {
    const double lt = log_binomial(r.n, j) + static_cast<double>(j) * log_p +
                      static_cast<double>(r.n - j) * log_q;
    total += std::exp(lt);
  }
  return std::min(total, 1.0);
}

double renyi_mean(const RenyiOrderStat& r) {
  double m = 0.0;
  for (long long j = 1; j <= r.k; ++j) {
    m += 1.0 / (r.rate * static_cast<double>(r.n - j + 1));
  }
  return m;
}

double renyi_variance(const RenyiOrderStat& r) {
  double v = 0.0;
  for (long long j = 1; j <= r.k; ++j) {
    const double s = 1.0 / (r.rate * static_cast<double>(r.n - j + 1));
    v += s * s;
  }
  return v;
}

double gumbel_mean(const Gumbel& g) { return g.location - specialfn::kEulerGamma * g.scale; }

double gumbel_variance(const Gumbel& g) {
  return specialfn::kPi * specialfn::kPi * g.scale * g.scale / 6.0;
}

// E[X^m] for X = scale * G^{1/shape}, G ~ Gamma(order, 1)
double gen_gamma_moment(double scale, double shape, int order, double m) {
  const double k = static_cast<double>(order);
  return std::pow(scale, m) * std::exp(std::lgamma(k + m / shape) - std::lgamma(k));
}

}  // namespace

void validate(const LimitLaw& law) {
  std::visit(Overloaded{
                 [](const Exponential& e) { require_positive(e.mean, "exponential mean"); },
                 [](const Weibull& w) {
                   require_positive(w.scale, "weibull scale");
                   require_positive(w.shape, "weibull shape");
                 },
                 [](const GeneralizedGamma& g) {
                   require_positive(g.scale, "generalized gamma scale");
                   require_positive(g.shape, "generalized gamma shape");
                   if (g.order < 1) {
                     throw DomainError("generalized gamma order must be >= 1");
                   }
                 },
                 [](const Gumbel& g) {
                   require_positive(g.scale, "gumbel scale");
                   if (!std::isfinite(g.location)) {
                     throw DomainError("gumbel location must be finite");
                   }
                 },
                 [](const RenyiOrderStat& r) {
                   require_positive(r.rate, "renyi rate");
                   if (r.n < 1 || r.k < 1 || r.k > r.n) {
                     throw DomainError("renyi order statistic requires 1 <= k <= n");
                   }
                 },
             },
             law);
}

double survival(const LimitLaw& law, double x) {
  validate(law);
  return std::visit(
      Overloaded{
          [x](const Exponential& e) { return x <= 0.0 ? 1.0 : std::exp(-x / e.mean); },
          [x](const Weibull& w) {
            return x <= 0.0 ? 1.0 : std::exp(-std::pow(x / w.scale, w.shape));
          },
          [x](const GeneralizedGamma& g) {
            if (x <= 0.0) {
              return 1.0;
            }
            return specialfn::regularized_upper_gamma(g.order, std::pow(x / g.scale, g.shape));
          },
          [x](const Gumbel& g) { return std::exp(-std::exp((x - g.location) / g.scale)); },
          [x](const RenyiOrderStat& r) { return renyi_survival(r, x); },
      },
      law);
}

double moment(const LimitLaw& law, double m) {
  validate(law);
  if (!(m > 0.0)) {
    throw DomainError("moment order must be positive");
  }
  const bool low_order = (m == 1.0 || m == 2.0);
  return std::visit(
      Overloaded{
          [m](const Exponential& e) { return gen_gamma_moment(e.mean, 1.0, 1, m); },
          [m](const Weibull& w) { return gen_gamma_moment(w.scale, w.shape, 1, m); },
          [m](const GeneralizedGamma& g) { return gen_gamma_moment(g.scale, g.shape, g.order, m); },
          [m, low_order](const Gumbel& g) {
            if (!low_order) {
              throw UnsupportedError("gumbel moments are provided for m = 1, 2 only");
            }
            const double mu = gumbel_mean(g);
            return m == 1.0 ? mu : gumbel_variance(g) + mu * mu;
          },
          [m, low_order](const RenyiOrderStat& r) {
            if (!low_order) {
              throw UnsupportedError("renyi order-statistic moments are provided for m = 1, 2 only");
            }
            const double mu = renyi_mean(r);
            return m == 1.0 ? mu : renyi_variance(r) + mu * mu;
          },
      },
      law);
}

double mean(const LimitLaw& law) { return moment(law, 1.0); }

double variance(const LimitLaw& law) {
  validate(law);
  if (const auto* g = std::get_if<Gumbel>(&law)) {
    return gumbel_variance(*g);
  }
  if (const auto* r = std::get_if<RenyiOrderStat>(&law)) {
    return renyi_variance(*r);
  }
  const double mu = moment(law, 1.0);
  return moment(law, 2.0) - mu * mu;
}

double sample(const LimitLaw& law, RandomStream& rng) {
  validate(law);
  std::exponential_distribution<double> unit_exp(1.0);
  return std::visit(
      Overloaded{
          [&](const Exponential& e) { return e.mean * unit_exp(rng); },
          [&](const Weibull& w) { return w.scale * std::pow(unit_exp(rng), 1.0 / w.shape); },
          [&](const GeneralizedGamma& g) {
            double s = 0.0;
            for (int i = 0; i < g.order; ++i) {
              s += unit_exp(rng);
            }
            return g.scale * std::pow(s, 1.0 / g.shape);
          },
          [&](const Gumbel& g) {
            // S(X) is uniform; -ln U ~ Exp(1)
            return g.location + g.scale * std::log(unit_exp(rng));
          },
          [&](const RenyiOrderStat& r) {
            double t = 0.0;
            for (long long j = 1; j <= r.k; ++j) {
              t += unit_exp(rng) / (r.rate * static_cast<double>(r.n - j + 1));
            }
            return t;
          },
      },
      law);
}

std::string type_name(const LimitLaw& law) {
  return std::visit(Overloaded{
                        [](const Exponential&) { return std::string("exponential"); },
                        [](const Weibull&) { return std::string("weibull"); },
                        [](const GeneralizedGamma&) { return std::string("generalized_gamma"); },
                        [](const Gumbel&) { return std::string("gumbel"); },
                        [](const RenyiOrderStat&) { return std::string("renyi_order_stat"); },
                    },
                    law);
}

std::string to_json(const LimitLaw& law) {
  std::ostringstream os;
  os << "{\"type\":\"" << type_name(law) << "\"";
  auto field = [&os](const char* name, double v) { os << ",\"" << name << "\":" << format_real(v); };
  std::visit(Overloaded{
                 [&](const Exponential& e) { field("mean", e.mean); },
                 [&](const Weibull& w) {
                   field("scale", w.scale);
                   field("shape", w.shape);
                 },
                 [&](const GeneralizedGamma& g) {
                   field("scale", g.scale);
                   field("shape", g.shape);
                   os << ",\"order\":" << g.order;
                 },
                 [&](const Gumbel& g) {
                   field("location", g.location);
                   field("scale", g.scale);
                 },
                 [&](const RenyiOrderStat& r) {
                   field("rate", r.rate);
                   os << ",\"n\":" << r.n << ",\"k\":" << r.k;
                 },
             },
             law);
  os << "}";
  return os.str();
}

}  // namespace xfpt::laws
