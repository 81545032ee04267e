#include "xfpt/mc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

#include "xfpt/csv.hpp"
#include "xfpt/errors.hpp"
#include "xfpt/parallel.hpp"

namespace xfpt {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

using Vec = std::array<double, 3>;

struct Walker {
  int dim;
  Vec x{0.0, 0.0, 0.0};

  // signed coordinate in d = 1, Euclidean norm otherwise
  double radius() const {
    if (dim == 1) {
      return x[0];
    }
    double s = 0.0;
    for (int i = 0; i < dim; ++i) {
      s += x[i] * x[i];
    }
    return std::sqrt(s);
  }

  void set_radius(double from, double to) {
    if (dim == 1) {
      x[0] = to;
      return;
    }
    const double f = to / from;
    for (int i = 0; i < dim; ++i) {
      x[i] *= f;
    }
  }
};

Vec random_direction(int dim, RandomStream& rng, std::normal_distribution<double>& normal) {
  Vec v{0.0, 0.0, 0.0};
  double s = 0.0;
  do {
    s = 0.0;
    for (int i = 0; i < dim; ++i) {
      v[i] = normal(rng);
      s += v[i] * v[i];
    }
  } while (s == 0.0);
  s = std::sqrt(s);
  for (int i = 0; i < dim; ++i) {
    v[i] /= s;
  }
  return v;
}

// Lengths in units of L = R - a, so D = 1 / t_diff.
std::optional<double> simulate_annulus(const AnnulusModel& m, const SimConfig& cfg, RandomStream& rng,
                                       double t_stop) {
  const int d = m.dim;
  const double diff = 1.0 / m.t_diff;
  const double outer = 1.0 / (1.0 - m.sigma);
  const double inner = m.sigma / (1.0 - m.sigma);
  const double dt = cfg.dt;
  const double sd = std::sqrt(2.0 * diff * dt);
  const double bridge_scale = 1.0 / (diff * dt);
  const double p_react = m.perfect() ? 1.0 : std::min(1.0, m.kappa / m.t_diff * std::sqrt(kPi * dt / diff));

  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Walker w{d};
  if (std::holds_alternative<DeltaAtOuter>(m.initial)) {
    w.x[0] = outer;
  } else if (std::holds_alternative<Uniform>(m.initial)) {
    const double lo = std::pow(inner, d);
    const double hi = std::pow(outer, d);
    const double r = std::pow(lo + unif(rng) * (hi - lo), 1.0 / d);
    if (d == 1) {
      w.x[0] = r;
    } else {
      const Vec u = random_direction(d, rng, normal);
      for (int i = 0; i < d; ++i) {
        w.x[i] = r * u[i];
      }
    }
  } else {
    throw UnsupportedError("mc: only outer and uniform starts are simulated in the annulus");
  }

  double r_old = w.radius();
  double t = 0.0;
  while (t < t_stop) {
    for (int i = 0; i < d; ++i) {
      w.x[i] += sd * normal(rng);
    }
    t += dt;
    double r = w.radius();
    if (r > outer) {
      const double folded = 2.0 * outer - r;
      w.set_radius(r, folded);
      r = folded;
    }
    if (r <= inner) {
      if (m.perfect() || unif(rng) < p_react) {
        return t <= t_stop ? std::optional<double>(t) : std::nullopt;
      }
      const double reflected = 2.0 * inner - r;
      w.set_radius(r, reflected);
      r = reflected;
    } else if (m.perfect()) {
      // Brownian-bridge crossing probability between two outside positions
      const double expo = (r_old - inner) * (r - inner) * bridge_scale;
      if (expo < 40.0 && unif(rng) < std::exp(-expo)) {
        return t <= t_stop ? std::optional<double>(t) : std::nullopt;
      }
    }
    r_old = r;
  }
  return std::nullopt;
}

// Lengths in units of L with D = 1 / t_diff and drift -theta x.
std::optional<double> simulate_ou(const OUWellModel& m, const SimConfig& cfg, RandomStream& rng,
                                  double t_stop) {
  const int d = m.dim;
  if (d > 3) {
    throw UnsupportedError("mc: OU wells are simulated for d <= 3");
  }
  const double diff = 1.0 / m.t_diff;
  const double theta = m.well_stiffness();
  const double dt = cfg.dt;
  const double sd = std::sqrt(2.0 * diff * dt);
  const double bridge_scale = 1.0 / (diff * dt);
  const double decay = 1.0 - theta * dt;

  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Vec x{0.0, 0.0, 0.0};
  if (std::holds_alternative<Uniform>(m.initial)) {
    const double r = std::pow(unif(rng), 1.0 / d);
    if (d == 1) {
      x[0] = unif(rng) < 0.5 ? -r : r;
    } else {
      const Vec u = random_direction(d, rng, normal);
      for (int i = 0; i < d; ++i) {
        x[i] = r * u[i];
      }
    }
  } else if (!std::holds_alternative<DeltaAtCenter>(m.initial)) {
    throw UnsupportedError("mc: only centre and uniform starts are simulated in the OU well");
  }

  auto norm = [&]() {
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
      s += x[i] * x[i];
    }
    return std::sqrt(s);
  };
  double r_old = norm();
  double t = 0.0;
  while (t < t_stop) {
    for (int i = 0; i < d; ++i) {
      x[i] = decay * x[i] + sd * normal(rng);
    }
    t += dt;
    const double r = norm();
    bool hit = r >= 1.0;
    if (!hit) {
      const double expo = (1.0 - r_old) * (1.0 - r) * bridge_scale;
      hit = expo < 40.0 && unif(rng) < std::exp(-expo);
    }
    if (hit) {
      return t <= t_stop ? std::optional<double>(t) : std::nullopt;
    }
    r_old = r;
  }
  return std::nullopt;
}

}  // namespace

void SimConfig::validate() const {
  if (!(dt > 0.0) || !(max_time > dt) || trials < 1) {
    throw DomainError("sim config: need dt > 0, max_time > dt and trials >= 1");
  }
}

RandomStream trial_stream(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t a = splitmix64(seed);
  const std::uint64_t b = splitmix64(a ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
  return RandomStream(b);
}

std::optional<double> simulate_fpt(const RadialModel& model, const SimConfig& cfg, RandomStream& rng,
                                   double cutoff) {
  cfg.validate();
  validate(model);
  const double t_stop = std::min(cutoff, cfg.max_time);
  if (const auto* a = std::get_if<AnnulusModel>(&model)) {
    return simulate_annulus(*a, cfg, rng, t_stop);
  }
  return simulate_ou(std::get<OUWellModel>(model), cfg, rng, t_stop);
}

EmpiricalOrderStats sample_fastest(const FptSampler& sampler, long long n, long long k_max,
                                   long long trials, std::uint64_t seed, int jobs,
                                   double max_censored_fraction) {
  if (n < 1 || k_max < 1 || k_max > n || trials < 1) {
    throw DomainError("sample_fastest: need 1 <= k_max <= n and trials >= 1");
  }
  const std::size_t k = static_cast<std::size_t>(k_max);
  EmpiricalOrderStats out;
  out.n = n;
  out.k_max = k_max;
  out.trials = trials;
  out.times.assign(static_cast<std::size_t>(trials) * k, std::numeric_limits<double>::infinity());
  std::vector<char> censored(static_cast<std::size_t>(trials), 0);

  parallel_for(static_cast<std::size_t>(trials), jobs, [&](std::size_t trial) {
    RandomStream rng = trial_stream(seed, trial);
    std::priority_queue<double> best;  // max-heap of the k fastest so far
    for (long long s = 0; s < n; ++s) {
      const double cutoff =
          best.size() == k ? best.top() : std::numeric_limits<double>::infinity();
      const std::optional<double> tau = sampler(rng, cutoff);
      if (!tau) {
        continue;
      }
      if (best.size() < k) {
        best.push(*tau);
      } else if (*tau < best.top()) {
        best.pop();
        best.push(*tau);
      }
    }
    censored[trial] = best.size() < k ? 1 : 0;
    std::vector<double> row;
    while (!best.empty()) {
      row.push_back(best.top());
      best.pop();
    }
    std::reverse(row.begin(), row.end());
    std::copy(row.begin(), row.end(), out.times.begin() + static_cast<std::ptrdiff_t>(trial * k));
  });

  out.censored = std::count(censored.begin(), censored.end(), 1);
  if (out.censored_fraction() > max_censored_fraction) {
    throw NumericalError("sample_fastest: " + std::to_string(out.censored) + " of " +
                         std::to_string(trials) +
                         " trials censored; increase max_time or reduce dt");
  }
  out.mean.assign(k, 0.0);
  out.variance.assign(k, 0.0);
  out.stderr_.assign(k, 0.0);
  out.count.assign(k, 0);
  for (std::size_t j = 0; j < k; ++j) {
    double sum = 0.0;
    long long c = 0;
    for (long long t = 0; t < trials; ++t) {
      const double v = out.times[static_cast<std::size_t>(t) * k + j];
      if (std::isfinite(v)) {
        sum += v;
        ++c;
      }
    }
    out.count[j] = c;
    if (c == 0) {
      out.mean[j] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const double mean = sum / static_cast<double>(c);
    double ss = 0.0;
    for (long long t = 0; t < trials; ++t) {
      const double v = out.times[static_cast<std::size_t>(t) * k + j];
      if (std::isfinite(v)) {
        ss += (v - mean) * (v - mean);
      }
    }
    out.mean[j] = mean;
    out.variance[j] = c > 1 ? ss / static_cast<double>(c - 1) : 0.0;
    out.stderr_[j] = std::sqrt(out.variance[j] / static_cast<double>(c));
  }
  return out;
}

EmpiricalOrderStats sample_fastest(const RadialModel& model, long long n, long long k_max,
                                   const SimConfig& cfg, int jobs) {
  cfg.validate();
  validate(model);
  FptSampler sampler = [&model, &cfg](RandomStream& rng, double cutoff) {
    return simulate_fpt(model, cfg, rng, cutoff);
  };
  return sample_fastest(sampler, n, k_max, cfg.trials, cfg.seed, jobs);
}

std::vector<std::optional<double>> sample_fpts(const RadialModel& model, const SimConfig& cfg,
                                               int jobs) {
  cfg.validate();
  validate(model);
  std::vector<std::optional<double>> out(static_cast<std::size_t>(cfg.trials));
  parallel_for(out.size(), jobs, [&](std::size_t i) {
    RandomStream rng = trial_stream(cfg.seed, i);
    out[i] = simulate_fpt(model, cfg, rng);
  });
  return out;
}

std::vector<double> empirical_survival(const std::vector<std::optional<double>>& samples,
                                       const std::vector<double>& checkpoints) {
  std::vector<double> out;
  out.reserve(checkpoints.size());
  const double total = static_cast<double>(samples.size());
  for (double t : checkpoints) {
    long long alive = 0;
    for (const auto& s : samples) {
      if (!s || *s > t) {
        ++alive;
      }
    }
    out.push_back(static_cast<double>(alive) / total);
  }
  return out;
}

std::string EmpiricalOrderStats::to_csv() const {
  CsvWriter w({"k", "N", "mean_emp", "stderr", "censored_frac", "trials"});
  for (std::size_t j = 0; j < mean.size(); ++j) {
    w.row({std::to_string(j + 1), std::to_string(n), format_real(mean[j]), format_real(stderr_[j]),
           format_real(censored_fraction()), std::to_string(trials)});
  }
  return w.str();
}

}  // namespace xfpt
