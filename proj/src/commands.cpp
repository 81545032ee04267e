#include "xfpt/commands.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "xfpt/csv.hpp"
#include "xfpt/errors.hpp"
#include "xfpt/extremes.hpp"
#include "xfpt/parallel.hpp"
#include "xfpt/regimes.hpp"
#include "xfpt/spectral.hpp"

namespace xfpt {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::filesystem::path prepare(const RunConfig& cfg, const std::string& file) {
  std::filesystem::create_directories(cfg.output_dir);
  return cfg.output_dir / file;
}

const AnnulusModel& require_annulus(const RunConfig& cfg, const char* what) {
  if (const auto* m = std::get_if<AnnulusModel>(&cfg.model)) return *m;
  throw UnsupportedError(std::string(what) + " needs an annulus model");
}

double pde_mfpt(const SurvivalCurve& curve, const QuadratureOptions& q) {
  return mean_fpt(curve, q).value;
}

struct FastestRow {
  long long n = 1;
  double mean_pde = kNaN;
  double small_n = kNaN;
  double large_n = kNaN;
  double max_approx = kNaN;
  std::string label;
};

/// classify() where the model supports it, otherwise only the sufficient
/// exponential statistic can certify a regime.
RegimeLabel regime_label(const RunConfig& cfg, long long n, double theta, double mfpt) {
  if (const auto* m = std::get_if<AnnulusModel>(&cfg.model)) {
    try {
      return classify(*m, n, theta, mfpt).label;
    } catch (const UnsupportedError&) {
    }
  }
  const bool exp_ok = sufficient_exponential_stat(n, mfpt, diffusion_time(cfg.model)) <= theta;
  return exp_ok ? RegimeLabel::Exponential : RegimeLabel::Indeterminate;
}

std::optional<ShortTimeAsymptotics> short_time(const RunConfig& cfg) {
  const auto* m = std::get_if<AnnulusModel>(&cfg.model);
  if (!m) return std::nullopt;
  try {
    return short_time_coefficients(*m);
  } catch (const UnsupportedError&) {
    return std::nullopt;
  }
}

FastestRow fastest_row(const RunConfig& cfg, const SurvivalCurve& curve, double mfpt, long long n,
                       double theta) {
  FastestRow r;
  r.n = n;
  r.mean_pde = mean_kth_fastest(curve, n, 1, cfg.quadrature).value;
  r.small_n = mean(small_n_law(mfpt, {n, 1, std::nullopt}));
  r.max_approx = n >= 2 ? max_approximation(n, mfpt, diffusion_time(cfg.model)) : mfpt;
  if (const auto st = short_time(cfg)) {
    try {
      r.large_n = large_n_moment(*st, {n, 1, std::nullopt});
    } catch (const DomainError&) {
    }
  }
  r.label = label_name(regime_label(cfg, n, theta, mfpt));
  return r;
}

// Figures ----------------------------------------------------------------------

struct Series {
  std::string name;
  std::string kind;   // computed | asymptote
  std::string style;  // solid | dashed | dotted | dashdot | plus
  std::string color;
  int panel = 0;
  std::vector<double> x, y;
};

struct Marker {
  std::string label;
  std::string shape;  // square | circle
  std::string color;
  int panel = 0;
  double x = 0.0, y = 0.0;
};

struct FigureSpec {
  std::string id, title, x_label, y_label;
  std::vector<std::string> panel_titles{""};
  std::vector<Series> series;
  std::vector<Marker> markers;
};

FigureBundle to_bundle(const FigureSpec& f) {
  FigureBundle b;
  b.id = f.id;
  auto put = [&](std::string k, std::string v) { b.manifest.emplace_back(std::move(k), std::move(v)); };
  put("id", f.id);
  put("title", f.title);
  put("x_label", f.x_label);
  put("y_label", f.y_label);
  put("x_scale", "log");
  put("y_scale", "log");
  put("panels", std::to_string(f.panel_titles.size()));
  for (std::size_t p = 0; p < f.panel_titles.size(); ++p) {
    put("panel." + std::to_string(p) + ".title", f.panel_titles[p]);
  }
  put("series.count", std::to_string(f.series.size()));
  for (std::size_t i = 0; i < f.series.size(); ++i) {
    const Series& s = f.series[i];
    const std::string pre = "series." + std::to_string(i) + ".";
    const std::string file = s.name + ".csv";
    put(pre + "name", s.name);
    put(pre + "file", file);
    put(pre + "kind", s.kind);
    put(pre + "style", s.style);
    put(pre + "color", s.color);
    put(pre + "panel", std::to_string(s.panel));
    CsvWriter w({"x", "y"});
    for (std::size_t j = 0; j < s.x.size(); ++j) {
      if (std::isfinite(s.x[j]) && std::isfinite(s.y[j])) w.row(std::vector<double>{s.x[j], s.y[j]});
    }
    b.files[file] = w.str();
  }
  put("markers.count", std::to_string(f.markers.size()));
  for (std::size_t i = 0; i < f.markers.size(); ++i) {
    const Marker& m = f.markers[i];
    const std::string pre = "markers." + std::to_string(i) + ".";
    put(pre + "label", m.label);
    put(pre + "shape", m.shape);
    put(pre + "color", m.color);
    put(pre + "panel", std::to_string(m.panel));
    put(pre + "x", format_real(m.x));
    put(pre + "y", format_real(m.y));
  }
  return b;
}

std::string tag(double v) {
  std::ostringstream s;
  s << v;
  std::string out = s.str();
  for (char& c : out) {
    if (c == '.') c = 'p';
    if (c == '-') c = 'm';
  }
  return out;
}

/// E[T_N] over `ns` from one PDE solve.
std::vector<double> fastest_curve(const SurvivalCurve& curve, const std::vector<double>& ns,
                                  const QuadratureOptions& q, int jobs) {
  std::vector<double> out(ns.size(), kNaN);
  parallel_for(ns.size(), jobs, [&](std::size_t i) {
    out[i] = mean_kth_fastest(curve, static_cast<long long>(ns[i]), 1, q).value;
  });
  return out;
}

std::vector<double> as_reals(const std::vector<long long>& v) {
  return {v.begin(), v.end()};
}

/// Start the time grid well below the first arrivals of the largest N.
TimeSpec early_time(const RunConfig& base, double dt_initial) {
  TimeSpec t = base.time;
  if (!t.dt_initial) t.dt_initial = dt_initial;
  return t;
}

FigureSpec figure_regime(const RunConfig&) {
  FigureSpec f;
  f.id = "regime";
  f.title = "Regime thresholds, theta = 1/2, d = 3";
  f.x_label = "sigma";
  f.y_label = "N";
  f.panel_titles = {"kappa = inf", "kappa = 1"};
  constexpr double theta = 0.5;
  const auto sigmas = log_spaced(1e-3, 0.95, 120);
  const double kappas[] = {kInfiniteReactivity, 1.0};
  for (int p = 0; p < 2; ++p) {
    Series ne{"n_exp_p" + std::to_string(p), "computed", "dashed", "black", p, {}, {}};
    Series ng{"n_gum_p" + std::to_string(p), "computed", "dotted", "blue", p, {}, {}};
    Series nw{"n_wei_p" + std::to_string(p), "computed", "solid", "red", p, {}, {}};
    for (double s : sigmas) {
      AnnulusModel outer{3, s, kappas[p], DeltaAtOuter{}, 1.0};
      AnnulusModel uniform{3, s, kappas[p], Uniform{}, 1.0};
      const Thresholds to = n_thresholds(outer, theta);
      const Thresholds tu = n_thresholds(uniform, theta);
      ne.x.push_back(s), ne.y.push_back(to.n_exp);
      ng.x.push_back(s), ng.y.push_back(to.n_gum);
      nw.x.push_back(s), nw.y.push_back(tu.n_wei);
    }
    f.series.push_back(ne);
    f.series.push_back(ng);
    f.series.push_back(nw);
  }
  return f;
}

FigureSpec figure_zoo_left(const RunConfig& base, int jobs) {
  FigureSpec f;
  f.id = "zoo_left";
  f.title = "Perfect target, sigma = 0.1, d = 3";
  f.x_label = "N";
  f.y_label = "E[T_N] / t_diff";
  const auto ns = as_reals(log_spaced_counts(1.0, 1e6, 25));
  const AnnulusModel outer{3, 0.1, kInfiniteReactivity, DeltaAtOuter{}, 1.0};
  const AnnulusModel uniform{3, 0.1, kInfiniteReactivity, Uniform{}, 1.0};

  const auto c1 = solve_survival(outer, base.grid, base.time);
  Series s1{"case1_pde", "computed", "solid", "blue", 0, ns, fastest_curve(c1, ns, base.quadrature, jobs)};

  // The uniform-start curve resolves the boundary layer at the target only
  // while sqrt(t) spans several grid cells, which caps N on this grid.
  std::vector<double> ns3;
  for (double n : ns) {
    if (n <= 1e4) ns3.push_back(n);
  }
  const auto c3 = solve_survival(uniform, base.grid, early_time(base, 1e-10));
  Series s3{"case3_pde", "computed", "solid", "red", 0, ns3, fastest_curve(c3, ns3, base.quadrature, jobs)};

  Series small{"small_n", "asymptote", "dashed", "black", 0, {}, {}};
  Series gumbel{"case1_large_n", "asymptote", "dotted", "black", 0, {}, {}};
  Series weibull{"case3_large_n", "asymptote", "dashdot", "black", 0, {}, {}};
  const double mfpt = mfpt_asymptotic(outer);
  const auto st1 = short_time_coefficients(outer);
  const auto st3 = short_time_coefficients(uniform);
  for (double n : ns) {
    const auto nn = static_cast<long long>(n);
    small.x.push_back(n), small.y.push_back(mfpt / n);
    if (nn >= 2) {
      gumbel.x.push_back(n), gumbel.y.push_back(large_n_moment(st1, {nn, 1, std::nullopt}, true));
    }
    weibull.x.push_back(n), weibull.y.push_back(large_n_moment(st3, {nn, 1, std::nullopt}));
  }
  f.series = {s1, s3, small, gumbel, weibull};
  return f;
}

FigureSpec figure_zoo_right(const RunConfig& base, int jobs) {
  FigureSpec f;
  f.id = "zoo_right";
  f.title = "Perfect target, outer start, d = 3, theta = 1/2";
  f.x_label = "N";
  f.y_label = "E[T_N] / t_diff";
  constexpr double theta = 0.5;
  const auto ns = as_reals(log_spaced_counts(1.0, 1e6, 25));
  const double sigmas[] = {0.01, 0.1, 0.3};
  const char* colors[] = {"black", "blue", "red"};
  for (int i = 0; i < 3; ++i) {
    const AnnulusModel m{3, sigmas[i], kInfiniteReactivity, DeltaAtOuter{}, 1.0};
    const auto curve = solve_survival(m, base.grid, base.time);
    const std::string t = tag(sigmas[i]);
    f.series.push_back({"pde_sigma_" + t, "computed", "solid", colors[i], 0, ns,
                        fastest_curve(curve, ns, base.quadrature, jobs)});
    Series approx{"max_approx_sigma_" + t, "asymptote", "dashed", colors[i], 0, {}, {}};
    const double mfpt = mfpt_asymptotic(m);
    for (double n : ns) {
      if (n >= 2) approx.x.push_back(n), approx.y.push_back(max_approximation(static_cast<long long>(n), mfpt, 1.0));
    }
    f.series.push_back(approx);

    const Thresholds th = n_thresholds(m, theta);
    const std::pair<double, const char*> marks[] = {{th.n_exp, "square"}, {th.n_gum, "circle"}};
    for (const auto& [n_mark, shape] : marks) {
      if (!(n_mark >= 1.0) || !std::isfinite(n_mark)) continue;
      Marker mk;
      mk.label = std::string(shape == std::string("square") ? "N_exp" : "N_gum") + " sigma=" + format_real(sigmas[i]);
      mk.shape = shape;
      mk.color = colors[i];
      mk.x = n_mark;
      mk.y = mean_fastest(curve, n_mark, base.quadrature).value;
      f.markers.push_back(mk);
    }
  }
  return f;
}

FigureSpec figure_kappa(const RunConfig& base, int jobs) {
  FigureSpec f;
  f.id = "kappa";
  f.title = "Partially absorbing target, d = 1";
  f.x_label = "N";
  f.y_label = "E[T_N] / t_diff";
  const auto ns = as_reals(log_spaced_counts(1.0, 1e6, 25));
  const double kappas[] = {1e-2, 1e2};
  const char* colors[] = {"blue", "black"};
  for (int i = 0; i < 2; ++i) {
    const std::string t = tag(kappas[i]);
    // A one-dimensional interval has no geometric sigma; see the README.
    const AnnulusModel outer{1, 0.0, kappas[i], DeltaAtOuter{}, 1.0};
    const AnnulusModel uniform{1, 0.0, kappas[i], Uniform{}, 1.0};
    const auto co = solve_survival(outer, base.grid, base.time);
    const auto cu = solve_survival(uniform, base.grid, early_time(base, 1e-12));
    f.series.push_back({"case2_pde_kappa_" + t, "computed", "solid", colors[i], 0, ns,
                        fastest_curve(co, ns, base.quadrature, jobs)});
    f.series.push_back({"case4_pde_kappa_" + t, "computed", "dashed", colors[i], 0, ns,
                        fastest_curve(cu, ns, base.quadrature, jobs)});

    Series small{"small_n_kappa_" + t, "asymptote", "plus", "red", 0, {}, {}};
    Series large2{"case2_large_n_kappa_" + t, "asymptote", "plus", "red", 0, {}, {}};
    Series large4{"case4_large_n_kappa_" + t, "asymptote", "plus", "red", 0, {}, {}};
    const double mfpt = mfpt_asymptotic(outer);
    const auto st2 = short_time_coefficients(outer);
    const auto st4 = short_time_coefficients(uniform);
    for (double n : ns) {
      const auto nn = static_cast<long long>(n);
      small.x.push_back(n), small.y.push_back(mfpt / n);
      if (nn >= 2) large2.x.push_back(n), large2.y.push_back(large_n_moment(st2, {nn, 1, std::nullopt}));
      large4.x.push_back(n), large4.y.push_back(large_n_moment(st4, {nn, 1, std::nullopt}));
    }
    f.series.push_back(small);
    f.series.push_back(large2);
    f.series.push_back(large4);
  }
  return f;
}

}  // namespace

RunConfig resolve(RunConfig cfg, const CommandOptions& opts) {
  if (opts.out) cfg.output_dir = *opts.out;
  if (opts.seed) cfg.sim.seed = *opts.seed;
  if (opts.theta) {
    if (!(*opts.theta > 0.0) || !std::isfinite(*opts.theta)) {
      throw ConfigError("--theta", "--theta must be a positive number");
    }
    cfg.theta_values = {*opts.theta};
  }
  return cfg;
}

std::vector<std::filesystem::path> cmd_survival(const RunConfig& in, const CommandOptions& opts) {
  const RunConfig cfg = resolve(in, opts);
  const auto curve = solve_survival(cfg.model, cfg.grid, cfg.time);
  const auto path = prepare(cfg, "survival.csv");
  write_text_atomic(path, curve.to_csv());
  return {path};
}

std::string fastest_table(const RunConfig& cfg, int jobs) {
  if (cfg.n_values.empty()) throw ConfigError("sweep.n", "cmd_fastest needs [sweep] n or n_log");
  const auto curve = solve_survival(cfg.model, cfg.grid, cfg.time);
  const double mfpt = pde_mfpt(curve, cfg.quadrature);
  const double theta = cfg.theta_values.front();
  std::vector<FastestRow> rows(cfg.n_values.size());
  parallel_for(rows.size(), jobs, [&](std::size_t i) {
    rows[i] = fastest_row(cfg, curve, mfpt, cfg.n_values[i], theta);
  });
  CsvWriter w({"N", "mean_pde", "mean_small_n", "mean_large_n", "mean_max_approx", "label"});
  for (const auto& r : rows) {
    w.row({std::to_string(r.n), format_real(r.mean_pde), format_real(r.small_n), format_real(r.large_n),
           format_real(r.max_approx), r.label});
  }
  return w.str();
}

std::vector<std::filesystem::path> cmd_fastest(const RunConfig& in, const CommandOptions& opts) {
  const RunConfig cfg = resolve(in, opts);
  const std::string table = fastest_table(cfg, opts.jobs);
  const auto path = prepare(cfg, "fastest.csv");
  write_text_atomic(path, table);
  return {path};
}

std::vector<std::filesystem::path> cmd_regimes(const RunConfig& in, const CommandOptions& opts) {
  const RunConfig cfg = resolve(in, opts);
  const AnnulusModel& m = require_annulus(cfg, "regimes");
  const double theta = cfg.theta_values.front();
  // n_gum is defined for an outer start and n_wei for a uniform start, so
  // each column comes from the matching variant of the model.
  auto thresholds = [](AnnulusModel model, double th) {
    model.initial = DeltaAtOuter{};
    const Thresholds outer = n_thresholds(model, th);
    model.initial = Uniform{};
    const Thresholds uniform = n_thresholds(model, th);
    return Thresholds{outer.n_exp, outer.n_gum, uniform.n_wei};
  };
  std::vector<std::filesystem::path> out;

  std::vector<double> sigmas = cfg.sigma_values;
  if (sigmas.empty()) sigmas = {m.sigma};
  std::vector<Thresholds> by_sigma(sigmas.size());
  parallel_for(sigmas.size(), opts.jobs, [&](std::size_t i) {
    AnnulusModel mi = m;
    mi.sigma = sigmas[i];
    try {
      mi.validate();
    } catch (const DomainError& e) {
      throw ConfigError("sweep.sigma", std::string("sigma sweep: ") + e.what());
    }
    by_sigma[i] = thresholds(mi, theta);
  });
  CsvWriter ws({"sigma", "n_exp", "n_gum", "n_wei"});
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    ws.row(std::vector<double>{sigmas[i], by_sigma[i].n_exp, by_sigma[i].n_gum, by_sigma[i].n_wei});
  }
  out.push_back(prepare(cfg, "regimes_sigma.csv"));
  write_text_atomic(out.back(), ws.str());

  CsvWriter wt({"theta", "n_exp", "n_gum", "n_wei"});
  for (double th : cfg.theta_values) {
    const Thresholds t = thresholds(m, th);
    wt.row(std::vector<double>{th, t.n_exp, t.n_gum, t.n_wei});
  }
  out.push_back(prepare(cfg, "regimes_theta.csv"));
  write_text_atomic(out.back(), wt.str());

  if (!cfg.n_values.empty()) {
    CsvWriter wn({"N", "theta_exp", "stat_necessary", "label"});
    const double mfpt = mfpt_asymptotic(m);
    for (long long n : cfg.n_values) {
      const RegimeReport r = classify(m, n, theta);
      const double nec = n >= 2 ? necessary_exponential_violated(n, mfpt, m.t_diff) : kNaN;
      wn.row({std::to_string(n), format_real(r.theta_exp), format_real(nec), label_name(r.label)});
    }
    out.push_back(prepare(cfg, "regimes_n.csv"));
    write_text_atomic(out.back(), wn.str());
  }
  return out;
}

std::vector<std::filesystem::path> cmd_mc_validate(const RunConfig& in, const CommandOptions& opts) {
  const RunConfig cfg = resolve(in, opts);
  if (cfg.n_values.empty()) throw ConfigError("sweep.n", "cmd_mc_validate needs [sweep] n or n_log");
  const auto curve = solve_survival(cfg.model, cfg.grid, cfg.time);
  const double mfpt = pde_mfpt(curve, cfg.quadrature);
  const double theta = cfg.theta_values.front();

  CsvWriter w({"k", "N", "mean_emp", "stderr", "censored_frac", "trials", "mean_pde", "mean_law", "law"});
  for (long long n : cfg.n_values) {
    const long long k_max = std::min(cfg.k_max, n);
    const EmpiricalOrderStats emp = sample_fastest(cfg.model, n, k_max, cfg.sim, opts.jobs);
    const RegimeLabel label = regime_label(cfg, n, theta, mfpt);
    const auto st = short_time(cfg);
    for (long long k = 1; k <= k_max; ++k) {
      const ExtremeQuery q{n, k, std::nullopt};
      std::optional<LimitLaw> law;
      try {
        if (label == RegimeLabel::Exponential) {
          law = small_n_law(mfpt, q);
        } else if (label != RegimeLabel::Indeterminate && st) {
          law = large_n_law(*st, q);
        }
      } catch (const UnsupportedError&) {
      } catch (const DomainError&) {
      }
      const auto i = static_cast<std::size_t>(k - 1);
      w.row({std::to_string(k), std::to_string(n), format_real(emp.mean[i]), format_real(emp.stderr_[i]),
             format_real(emp.censored_fraction()), std::to_string(emp.trials),
             format_real(mean_kth_fastest(curve, n, k, cfg.quadrature).value),
             format_real(law ? mean(*law) : kNaN), law ? type_name(*law) : std::string("none")});
    }
  }
  const auto path = prepare(cfg, "mc_validate.csv");
  write_text_atomic(path, w.str());
  return {path};
}

std::vector<std::filesystem::path> cmd_spectrum(const RunConfig& in, const CommandOptions& opts) {
  const RunConfig cfg = resolve(in, opts);
  const EigenSystem sys = eigenpairs(cfg.model, cfg.n_max, cfg.grid);
  const auto coeffs = expansion_coefficients(sys, initial_condition(cfg.model));
  const auto path = prepare(cfg, "spectrum.csv");
  write_text_atomic(path, spectrum_csv(sys, coeffs));
  return {path};
}

std::string FigureBundle::manifest_text() const {
  std::string out;
  for (const auto& [k, v] : manifest) out += k + "=" + v + "\n";
  return out;
}

std::optional<std::string> FigureBundle::get(const std::string& key) const {
  for (const auto& [k, v] : manifest) {
    if (k == key) return v;
  }
  return std::nullopt;
}

FigureBundle build_figure(const std::string& id, const RunConfig& base, int jobs) {
  if (id == "regime") return to_bundle(figure_regime(base));
  if (id == "zoo_left") return to_bundle(figure_zoo_left(base, jobs));
  if (id == "zoo_right") return to_bundle(figure_zoo_right(base, jobs));
  if (id == "kappa") return to_bundle(figure_kappa(base, jobs));
  throw ConfigError("--figure", "unknown figure id '" + id + "' (expected regime, zoo_left, zoo_right or kappa)");
}

void write_bundle(const FigureBundle& bundle, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, contents] : bundle.files) write_text_atomic(dir / name, contents);
  // The manifest goes last so a complete manifest implies complete series.
  write_text_atomic(dir / "manifest.txt", bundle.manifest_text());
}

std::vector<std::filesystem::path> cmd_figure(const std::string& id, const RunConfig& in,
                                              const CommandOptions& opts) {
  const RunConfig cfg = resolve(in, opts);
  const FigureBundle bundle = build_figure(id, cfg, opts.jobs);
  const auto dir = cfg.output_dir / ("figure_" + id);
  write_bundle(bundle, dir);
  std::vector<std::filesystem::path> out{dir / "manifest.txt"};
  for (const auto& [name, contents] : bundle.files) out.push_back(dir / name);
  return out;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return 2;
  if (dynamic_cast<const DomainError*>(&e)) return 2;
  if (dynamic_cast<const NumericalError*>(&e)) return 3;
  if (dynamic_cast<const UnsupportedError*>(&e)) return 4;
  return 1;
}

}  // namespace xfpt
