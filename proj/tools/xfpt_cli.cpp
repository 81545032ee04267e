// xfpt: extreme first-passage-time statistics from the command line.
//
//   xfpt survival    --config case1.cfg --out results/
//   xfpt fastest     --config case1.cfg --jobs 4
//   xfpt regimes     --config sweep.cfg --theta 0.5
//   xfpt mc-validate --config mc.cfg --seed 7
//   xfpt spectrum    --config ou.cfg
//   xfpt figure      --figure zoo_left --out figures/

#include <cstdlib>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "xfpt/commands.hpp"
#include "xfpt/errors.hpp"

namespace {

int default_jobs() {
  if (const char* env = std::getenv("EXTREME_FPT_JOBS")) {
    try {
      const int j = std::stoi(env);
      if (j >= 1) return j;
    } catch (const std::exception&) {
    }
    std::cerr << "xfpt: ignoring invalid EXTREME_FPT_JOBS='" << env << "'\n";
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extreme first-passage-time statistics of diffusive searchers"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int jobs = 0;
  std::uint64_t seed = 0;
  double theta = 0.0;
  std::string figure;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", config_path, "Run configuration file");
    if (needs_config) c->required();
    sub->add_option("--out", out_dir, "Output directory (overrides [output] dir)");
    sub->add_option("--jobs", jobs, "Worker threads (default: EXTREME_FPT_JOBS or 1)")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Monte Carlo seed (overrides [numerics] seed)");
    sub->add_option("--theta", theta, "Regime tolerance (overrides [sweep] theta)")->check(CLI::PositiveNumber);
  };

  auto* survival = app.add_subcommand("survival", "Solve the survival PDE, write survival.csv");
  auto* fastest = app.add_subcommand("fastest", "Mean fastest FPT per N, write fastest.csv");
  auto* regimes = app.add_subcommand("regimes", "Regime thresholds and labels, write regimes_*.csv");
  auto* mc = app.add_subcommand("mc-validate", "Monte Carlo versus PDE and limit laws, write mc_validate.csv");
  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues and expansion coefficients, write spectrum.csv");
  auto* fig = app.add_subcommand("figure", "Write the CSV bundle behind one figure");
  for (auto* sub : {survival, fastest, regimes, mc, spectrum}) add_common(sub, true);
  add_common(fig, false);
  fig->add_option("--figure", figure, "Figure id")
      ->required()
      ->check(CLI::IsMember(xfpt::figure_ids()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    xfpt::CommandOptions opts;
    opts.jobs = jobs > 0 ? jobs : default_jobs();
    if (!out_dir.empty()) opts.out = out_dir;
    for (auto* sub : app.get_subcommands()) {
      if (sub->count("--seed")) opts.seed = seed;
      if (sub->count("--theta")) opts.theta = theta;
    }
    const xfpt::RunConfig cfg = config_path.empty() ? xfpt::RunConfig{} : xfpt::load_config(config_path);

    std::vector<std::filesystem::path> written;
    if (survival->parsed()) written = xfpt::cmd_survival(cfg, opts);
    if (fastest->parsed()) written = xfpt::cmd_fastest(cfg, opts);
    if (regimes->parsed()) written = xfpt::cmd_regimes(cfg, opts);
    if (mc->parsed()) written = xfpt::cmd_mc_validate(cfg, opts);
    if (spectrum->parsed()) written = xfpt::cmd_spectrum(cfg, opts);
    if (fig->parsed()) written = xfpt::cmd_figure(figure, cfg, opts);
    for (const auto& p : written) std::cout << p.string() << '\n';
    return 0;
  } catch (const xfpt::ConfigError& e) {
    std::cerr << "xfpt: config error [" << e.key() << "]: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "xfpt: " << e.what() << '\n';
    return xfpt::exit_code_for(e);
  }
}
