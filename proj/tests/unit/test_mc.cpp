#include <cmath>
#include <random>
#include <vector>

#include "approx.hpp"
#include "doctest.h"
#include "xfpt/errors.hpp"
#include "xfpt/mc.hpp"
#include "xfpt/pde.hpp"

using namespace xfpt;
// relative tolerances throughout

namespace {

AnnulusModel annulus(int dim, double sigma, double kappa, InitialCondition ic = DeltaAtOuter{}) {
  AnnulusModel m;
  m.dim = dim;
  m.sigma = sigma;
  m.kappa = kappa;
  m.initial = ic;
  return m;
}

SimConfig sim(double dt, double max_time, long long trials, std::uint64_t seed) {
  SimConfig c;
  c.dt = dt;
  c.max_time = max_time;
  c.trials = trials;
  c.seed = seed;
  return c;
}

struct Moments {
  double mean = 0.0;
  double se = 0.0;
  double censored = 0.0;
};

Moments moments(const std::vector<std::optional<double>>& xs) {
  double s = 0.0, sq = 0.0;
  long long n = 0, cens = 0;
  for (const auto& x : xs) {
    if (!x) {
      ++cens;
      continue;
    }
    s += *x;
    sq += *x * *x;
    ++n;
  }
  Moments m;
  m.mean = s / n;
  m.se = std::sqrt((sq / n - m.mean * m.mean) / n);
  m.censored = static_cast<double>(cens) / xs.size();
  return m;
}

double interp(const SurvivalCurve& c, double t) {
  std::size_t i = 1;
  while (i + 1 < c.size() && c.times[i] < t) ++i;
  const double w = (t - c.times[i - 1]) / (c.times[i] - c.times[i - 1]);
  return c.values[i - 1] + w * (c.values[i] - c.values[i - 1]);
}

}  // namespace

TEST_CASE("mean exit time of the interval") {
  const auto m = moments(sample_fpts(annulus(1, 0.0, kInfiniteReactivity), sim(1e-4, 20.0, 10000, 3)));
  CHECK(m.censored == 0.0);
  CHECK(std::fabs(m.mean - 0.5) <= 3.0 * m.se + 0.02);
}

TEST_CASE("weak Robin target") {
  // dt coarser than the default keeps the run short; the mean is ~100 t_diff
  const auto m = moments(sample_fpts(annulus(1, 0.0, 0.01), sim(1e-2, 2000.0, 2000, 4)));
  CHECK(m.censored <= 1e-3);
  CHECK(std::fabs(m.mean - 100.5) <= 3.0 * m.se + 0.02 * 100.5);
}

TEST_CASE("harmonic well against the time stepper") {
  const OUWellModel ou{1, 0.5, 1.0, DeltaAtCenter{}};
  const double pde = mean_fpt(solve_survival(ou, {}, {})).value;
  const auto m = moments(sample_fpts(ou, sim(1e-4, 50.0, 4000, 5)));
  MESSAGE("OU mean mc " << m.mean << " pde " << pde);
  CHECK(m.mean == Approx(pde).epsilon(0.15));
}

TEST_CASE("order statistics of synthetic exponentials") {
  const FptSampler expo = [](RandomStream& rng, double cutoff) -> std::optional<double> {
    const double x = std::exponential_distribution<double>(1.0)(rng);
    if (x > cutoff) return std::nullopt;
    return x;
  };
  const auto stats = sample_fastest(expo, 10, 2, 200000, 9, 1, 0.0);
  CHECK(stats.censored == 0);
  CHECK(std::fabs(stats.mean[0] - 0.1) <= 3.0 * stats.stderr_[0]);
  CHECK(std::fabs(stats.mean[1] - (0.1 + 1.0 / 9.0)) <= 3.0 * stats.stderr_[1]);
  for (long long t = 0; t < 100; ++t) CHECK(stats.times[2 * t] <= stats.times[2 * t + 1]);
  CHECK(stats.to_csv().rfind("k,N,mean_emp,stderr,censored_frac,trials\n", 0) == 0);
}

TEST_CASE("fastest of a hundred against quadrature") {
  const auto model = annulus(1, 0.0, kInfiniteReactivity);
  const double pde = mean_kth_fastest(solve_survival(model, {}, {}), 100).value;
  const auto stats = sample_fastest(model, 100, 1, sim(1e-4, 2.0, 1000, 11));
  MESSAGE("T_100 mc " << stats.mean[0] << " +- " << stats.stderr_[0] << " pde " << pde);
  CHECK(std::fabs(stats.mean[0] - pde) <= 3.0 * stats.stderr_[0] + 0.03 * pde);
}

TEST_CASE("uniform shell start at a thousand searchers against quadrature") {
  const auto model = annulus(3, 0.1, kInfiniteReactivity, Uniform{});
  GridSpec g;
  g.num_cells = 4096;
  TimeSpec ts;
  ts.dt_initial = 1e-10;
  const double pde = mean_kth_fastest(solve_survival(model, g, ts), 1000).value;
  const auto stats = sample_fastest(model, 1000, 1, sim(1e-5, 0.05, 300, 12));
  MESSAGE("T_1000 mc " << stats.mean[0] << " +- " << stats.stderr_[0] << " pde " << pde
                       << " N^2 E = " << pde * 1e6);
  CHECK(std::fabs(stats.mean[0] - pde) <= 3.0 * stats.stderr_[0] + 0.05 * pde);
}

TEST_CASE("empirical survival stays inside binomial bands") {
  const auto model = annulus(3, 0.3, kInfiniteReactivity);
  const auto curve = solve_survival(model, {}, {});
  const long long trials = 4000;
  const auto samples = sample_fpts(model, sim(1e-4, 8.0, trials, 21));
  std::vector<double> checkpoints;
  for (int i = 1; i <= 20; ++i) checkpoints.push_back(0.05 * i * i / 4.0);
  const auto emp = empirical_survival(samples, checkpoints);
  int outside = 0;
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    const double s = interp(curve, checkpoints[i]);
    const double band = 3.0 * std::sqrt(std::max(s * (1.0 - s), 1e-6) / trials);
    if (std::fabs(emp[i] - s) > band) ++outside;
  }
  CHECK(outside == 0);
}

TEST_CASE("time-step bias shrinks under halving") {
  // The bridge-corrected perfect target converges at first order.
  const auto model = annulus(3, 0.3, kInfiniteReactivity);
  const double exact = mean_fpt(solve_survival(model, {}, {})).value;
  std::vector<double> bias;
  for (double dt : {2e-2, 1e-2, 5e-3}) {
    const auto m = moments(sample_fpts(model, sim(dt, 40.0, 200000, 31)));
    MESSAGE("perfect dt " << dt << " bias " << m.mean - exact << " +- " << m.se);
    bias.push_back(std::fabs(m.mean - exact));
  }
  CHECK(bias[0] / bias[1] >= 1.6);
  CHECK(bias[1] / bias[2] >= 1.6);

  // The partial-absorption rule is only half order, so halving gains about sqrt 2.
  const auto robin = annulus(1, 0.0, 1.0);
  std::vector<double> robin_bias;
  for (double dt : {4e-2, 1e-2}) {
    const auto m = moments(sample_fpts(robin, sim(dt, 60.0, 100000, 32)));
    MESSAGE("robin dt " << dt << " bias " << m.mean - 1.5 << " +- " << m.se);
    robin_bias.push_back(std::fabs(m.mean - 1.5));
  }
  CHECK(robin_bias[0] / robin_bias[1] == Approx(2.0).epsilon(0.25));
}

TEST_CASE("determinism and censoring") {
  const auto model = annulus(2, 0.2, 5.0);
  const auto cfg = sim(1e-3, 3.0, 64, 77);
  const auto a = sample_fastest(model, 8, 3, cfg, 1);
  const auto b = sample_fastest(model, 8, 3, cfg, 4);
  CHECK(a.times == b.times);
  CHECK(a.mean == b.mean);

  const auto s1 = sample_fpts(model, cfg, 1);
  const auto s3 = sample_fpts(model, cfg, 3);
  CHECK(s1 == s3);

  double prev = 1.0;
  for (double max_time : {0.05, 0.2, 0.5, 1.0, 2.0}) {
    const auto m = moments(sample_fpts(model, sim(1e-3, max_time, 500, 78)));
    CHECK(m.censored <= prev);
    prev = m.censored;
  }
  CHECK_THROWS_AS(sample_fastest(model, 8, 1, sim(1e-3, 0.01, 50, 1)), NumericalError);
  CHECK_THROWS_AS(sim(0.0, 1.0, 1, 1).validate(), DomainError);
}
