#include "xfpt/pde.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "xfpt/csv.hpp"
#include "xfpt/errors.hpp"
#include "xfpt/spectral.hpp"

namespace xfpt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

constexpr std::array<double, 4> kGlNodes = {0.18343464249564980494, 0.52553240991632898582,
                                            0.79666647741362673959, 0.96028985649753623168};
constexpr std::array<double, 4> kGlWeights = {0.36268378337836198297, 0.31370664587788728734,
                                              0.22238103445337447054, 0.10122853629037625915};

template <class F>
double gauss8(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < kGlNodes.size(); ++i) {
    s += kGlWeights[i] * (f(mid - half * kGlNodes[i]) + f(mid + half * kGlNodes[i]));
  }
  return s * half;
}

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

// ln of P(T_{k,N} > t) from ln S and ln(1 - S)
class OrderSurvival {
 public:
  OrderSurvival(double n, long long k) : n_(n), log_binom_(k, 0.0) {
    for (long long j = 1; j < k; ++j) {
      log_binom_[j] = log_binom_[j - 1] + std::log((n_ - static_cast<double>(j) + 1.0) / j);
    }
  }

  double operator()(double log_s, double log_f) const {
    if (log_s == kNegInf) {
      return 0.0;
    }
    double total = std::exp(n_ * log_s);
    if (log_f == kNegInf) {
      return total;
    }
    for (std::size_t j = 1; j < log_binom_.size(); ++j) {
      const double jj = static_cast<double>(j);
      total += std::exp(log_binom_[j] + jj * log_f + (n_ - jj) * log_s);
    }
    return std::min(total, 1.0);
  }

 private:
  double n_;
  std::vector<double> log_binom_;
};

bool degenerate(const SurvivalCurve& c) {
  return std::all_of(c.absorbed.begin(), c.absorbed.end(), [](double f) { return f <= 0.0; });
}

void require_shape(const SurvivalCurve& c) {
  if (c.times.size() < 2 || c.values.size() != c.times.size() ||
      c.absorbed.size() != c.times.size()) {
    throw DomainError("survival curve: need at least two samples with matching columns");
  }
}

}  // namespace

SurvivalCurve SurvivalCurve::from_values(std::vector<double> times, std::vector<double> values) {
  SurvivalCurve c;
  c.times = std::move(times);
  c.values = std::move(values);
  c.absorbed.reserve(c.values.size());
  for (double v : c.values) {
    c.absorbed.push_back(1.0 - v);
  }
  return c;
}

void SurvivalCurve::validate(double slack) const {
  require_shape(*this);
  for (std::size_t i = 0; i < size(); ++i) {
    if (!(values[i] >= 0.0 && values[i] <= 1.0)) {
      throw NumericalError("survival curve: value outside [0,1] at index " + std::to_string(i));
    }
    if (i > 0) {
      if (!(times[i] > times[i - 1])) {
        throw NumericalError("survival curve: times must increase");
      }
      if (values[i] > values[i - 1] + slack) {
        throw NumericalError("survival curve: S increases at index " + std::to_string(i));
      }
    }
  }
}

std::string SurvivalCurve::to_csv() const {
  CsvWriter w({"t", "S"});
  for (std::size_t i = 0; i < size(); ++i) {
    w.row(std::vector<double>{times[i], values[i]});
  }
  return w.str();
}

SurvivalCurve solve_survival(const RadialModel& model, const GridSpec& grid, const TimeSpec& time) {
  const radial::Discretization disc = radial::discretize(model, grid);
  const std::size_t n = disc.size();

  std::vector<double> ground;
  if (std::holds_alternative<QuasiStationary>(initial_condition(model))) {
    ground = ground_state(disc);
  }
  const std::vector<double> mu =
      radial::initial_weights(disc, model, ground.empty() ? nullptr : &ground);

  const double t_diff = diffusion_time(model);
  double t_final = 0.0;
  if (time.t_final) {
    t_final = *time.t_final;
  } else {
    const auto tau = radial::mean_exit_time_profile(disc);
    t_final = 30.0 * *std::max_element(tau.begin(), tau.end());
  }
  const double dt0 = time.dt_initial.value_or(1e-6 * t_diff);
  const double dt_max = time.dt_max.value_or(t_final / 2000.0);
  if (!(dt0 > 0.0) || !(t_final > dt0) || !(dt_max > 0.0)) {
    throw DomainError("time spec: need 0 < dt_initial < t_final and dt_max > 0");
  }
  if (!(time.growth >= 1.0)) {
    throw DomainError("time spec: growth must be >= 1");
  }
  std::vector<double> snap_times = time.snapshot_times;
  std::sort(snap_times.begin(), snap_times.end());
  std::size_t next_snap = 0;

  double start_absorbed = 1.0;
  for (double w : mu) {
    start_absorbed -= w;
  }
  start_absorbed = std::max(start_absorbed, 0.0);

  SurvivalCurve curve;
  auto record = [&](double t, const std::vector<double>& u) {
    double f = t > 0.0 ? start_absorbed : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      f += mu[i] * u[i];
    }
    f = std::clamp(f, 0.0, 1.0);
    curve.times.push_back(t);
    curve.absorbed.push_back(f);
    curve.values.push_back(1.0 - f);
    while (next_snap < snap_times.size() && t >= snap_times[next_snap]) {
      RadialSnapshot s{t, disc.nodes, std::vector<double>(disc.nodes.size(), 0.0)};
      for (std::size_t i = 0; i < n; ++i) {
        s.values[disc.lo + i] = 1.0 - u[i];
      }
      curve.snapshots.push_back(std::move(s));
      ++next_snap;
    }
  };

  // U = 1 - S solves M dU/dt = -K U + K 1 with U(0) = 0.
  std::vector<double> u(n, 0.0);
  record(0.0, u);
  std::vector<double> a_diag(n), a_off(n - 1), rhs(n);
  double t = 0.0;
  double dt = dt0;
  int step = 0;
  while (t < t_final * (1.0 - 1e-14)) {
    const double h = std::min({dt, dt_max, t_final - t});
    const bool implicit_euler = step < time.startup_steps;
    const double alpha = implicit_euler ? h : 0.5 * h;
    for (std::size_t i = 0; i < n; ++i) {
      a_diag[i] = disc.mass_u[i] + alpha * disc.diag[i];
      double r = disc.mass_u[i] * u[i] + h * disc.source[i];
      if (!implicit_euler) {
        double ku = disc.diag[i] * u[i];
        if (i > 0) {
          ku += disc.off[i - 1] * u[i - 1];
        }
        if (i + 1 < n) {
          ku += disc.off[i] * u[i + 1];
        }
        r -= alpha * ku;
      }
      rhs[i] = r;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      a_off[i] = alpha * disc.off[i];
    }
    u = radial::solve_tridiagonal(a_off, a_diag, a_off, rhs);
    for (double& v : u) {
      if (!std::isfinite(v)) {
        throw NumericalError("solve_survival: non-finite state at t = " + format_real(t));
      }
      v = std::clamp(v, 0.0, 1.0);
    }
    t += h;
    ++step;
    record(t, u);
    dt *= time.growth;
  }
  return curve;
}

double tail_decay_rate(const SurvivalCurve& curve) {
  require_shape(curve);
  // S = 1 - U carries an absolute rounding error near 1e-16, so values below
  // the floor say nothing about the decay rate.
  constexpr double floor = 1e-9;
  double t_end = curve.times.front();
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve.values[i] > floor) {
      t_end = curve.times[i];
    }
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve.times[i] >= t_end / 10.0 && curve.times[i] <= t_end && curve.values[i] > floor) {
      const double x = curve.times[i];
      const double y = std::log(curve.values[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++m;
    }
  }
  if (m < 2) {
    throw NumericalError("tail fit: fewer than two positive samples in the last decade");
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  if (!(slope < 0.0)) {
    throw NumericalError("tail fit: survival is not decaying over the last decade");
  }
  return -slope;
}

MeanEstimate mean_fpt(const SurvivalCurve& curve, const QuadratureOptions& opts) {
  require_shape(curve);
  if (degenerate(curve)) {
    return {std::numeric_limits<double>::infinity(), MeanStatus::Degenerate};
  }
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    integral += 0.5 * (curve.times[i + 1] - curve.times[i]) * (curve.values[i] + curve.values[i + 1]);
  }
  const double s_f = curve.values.back();
  MeanStatus status = MeanStatus::Resolved;
  if (s_f > opts.tail_threshold) {
    if (!opts.extrapolate_tail) {
      throw NumericalError("mean_fpt: unresolved tail, S(t_final) = " + format_real(s_f));
    }
    status = MeanStatus::TailExtrapolated;
  }
  if (opts.extrapolate_tail && s_f > 0.0) {
    integral += s_f / tail_decay_rate(curve);
  }
  return {integral, status};
}

namespace {

MeanEstimate order_mean(const SurvivalCurve& curve, double nn, long long k,
                        const QuadratureOptions& opts) {
  if (degenerate(curve)) {
    return {std::numeric_limits<double>::infinity(), MeanStatus::Degenerate};
  }
  if (nn * curve.absorbed[1] >= opts.early_time_limit) {
    throw NumericalError("mean_kth_fastest: early times under-resolved, N (1 - S(t1)) = " +
                         format_real(nn * curve.absorbed[1]));
  }
  const double s_f = curve.values.back();
  MeanStatus status = MeanStatus::Resolved;
  if (s_f > opts.tail_threshold) {
    if (!opts.extrapolate_tail) {
      throw NumericalError("mean_kth_fastest: unresolved tail, S(t_final) = " + format_real(s_f));
    }
    status = MeanStatus::TailExtrapolated;
  }

  const OrderSurvival order(nn, k);
  const auto& t = curve.times;
  const auto& f = curve.absorbed;
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    const double f0 = f[i], f1 = f[i + 1];
    const double s1 = 1.0 - f1;
    if (order(std::log1p(-f0), safe_log(f0)) == 0.0) {
      break;  // P(T_{k,N} > t) is non-increasing and has underflowed
    }
    const double dt = t[i + 1] - t[i];
    if (f0 > 0.0 && f1 > 0.0 && s1 > 0.0 && t[i] > 0.0) {
      // ln(-ln S) linear in ln t
      const double g0 = std::log(-std::log1p(-f0));
      const double g1 = std::log(-std::log1p(-f1));
      const double l0 = std::log(t[i]);
      const double slope = (g1 - g0) / (std::log(t[i + 1]) - l0);
      integral += gauss8(
          [&](double x) {
            const double minus_log_s = std::exp(g0 + slope * (std::log(x) - l0));
            return order(-minus_log_s, std::log(-std::expm1(-minus_log_s)));
          },
          t[i], t[i + 1]);
    } else if (s1 > 0.0) {
      // ln S linear in t
      const double ls0 = std::log1p(-f0);
      const double ls1 = std::log1p(-f1);
      integral += gauss8(
          [&](double x) {
            const double ls = ls0 + (ls1 - ls0) * (x - t[i]) / dt;
            return order(ls, safe_log(-std::expm1(ls)));
          },
          t[i], t[i + 1]);
    } else {
      integral += gauss8(
          [&](double x) {
            const double w = (x - t[i]) / dt;
            const double fx = f0 + (f1 - f0) * w;
            return order(safe_log(1.0 - fx), safe_log(fx));
          },
          t[i], t[i + 1]);
    }
  }

  if (opts.extrapolate_tail && s_f > 0.0 && order(std::log(s_f), safe_log(f.back())) > 0.0) {
    // S(t) = S_f e^{-lambda (t - t_f)}; integrate over x = ln S
    const double lambda = tail_decay_rate(curve);
    const double top = std::log(s_f);
    const double span = std::min(40.0 / (nn - static_cast<double>(k) + 1.0), 800.0);
    const int panels = 8;
    for (int p = 0; p < panels; ++p) {
      const double a = top - span * (p + 1) / panels;
      const double b = top - span * p / panels;
      integral += gauss8([&](double x) { return order(x, safe_log(-std::expm1(x))) / lambda; }, a, b);
    }
  }
  return {integral, status};
}

}  // namespace

MeanEstimate mean_kth_fastest(const SurvivalCurve& curve, long long n, long long k,
                              const QuadratureOptions& opts) {
  require_shape(curve);
  if (n < 1 || k < 1 || k > n) {
    throw DomainError("mean_kth_fastest: need 1 <= k <= n");
  }
  return order_mean(curve, static_cast<double>(n), k, opts);
}

MeanEstimate mean_fastest(const SurvivalCurve& curve, double n, const QuadratureOptions& opts) {
  require_shape(curve);
  if (!(n >= 1.0) || !std::isfinite(n)) {
    throw DomainError("mean_fastest: need finite N >= 1");
  }
  return order_mean(curve, n, 1, opts);
}

}  // namespace xfpt
