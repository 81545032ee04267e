#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "approx.hpp"
#include "doctest.h"
#include "xfpt/commands.hpp"
#include "xfpt/csv.hpp"
#include "xfpt/errors.hpp"
#include "xfpt/pde.hpp"

using namespace xfpt;
// relative tolerances throughout

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("xfpt_test_commands_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

RunConfig config(const std::string& file) {
  return load_config(std::filesystem::path(XFPT_SOURCE_DIR) / "configs" / file);
}

CsvTable parse_table(const std::string& text, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text_atomic(dir / "t.csv", text);
  return read_csv(dir / "t.csv");
}

std::size_t count_series(const FigureBundle& b, const std::string& kind) {
  std::size_t n = 0;
  const int total = std::stoi(*b.get("series.count"));
  for (int i = 0; i < total; ++i) n += *b.get("series." + std::to_string(i) + ".kind") == kind;
  return n;
}

}  // namespace

TEST_CASE("survival command") {
  const auto dir = scratch("survival");
  CommandOptions opts;
  opts.out = dir;
  const auto paths = cmd_survival(config("case1.cfg"), opts);
  REQUIRE(paths.size() == 1);
  const auto t = read_csv(paths[0]);
  CHECK(t.header == std::vector<std::string>{"t", "S"});
  CHECK(t.real(0, "S") == 1.0);
  CHECK(t.real(t.rows.size() - 1, "S") < 1e-6);
  for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(t.real(i, "t") > t.real(i - 1, "t"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("fastest table") {
  const auto dir = scratch("fastest");
  auto cfg = config("case4.cfg");
  const auto t = parse_table(fastest_table(cfg, 2), dir);
  CHECK(t.header ==
        std::vector<std::string>{"N", "mean_pde", "mean_small_n", "mean_large_n", "mean_max_approx", "label"});
  REQUIRE(t.rows.size() == 5);
  // the N = 1 row is the mean exit time 1/kappa + 1/3, by two quadrature routes
  CHECK(t.real(0, "mean_pde") == Approx(t.real(0, "mean_small_n")).epsilon(1e-4));
  CHECK(t.real(0, "mean_pde") == Approx(100.0 + 1.0 / 3.0).epsilon(1e-4));
  for (std::size_t i = 3; i < 5; ++i) CHECK(t.rows[i][t.column("label")] == "exponential-extreme");
  CHECK(parse_table(fastest_table(cfg, 1), dir).rows == t.rows);

  cfg.n_values.clear();
  CHECK_THROWS_AS(fastest_table(cfg, 1), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("regimes command") {
  const auto dir = scratch("regimes");
  CommandOptions opts;
  opts.out = dir;
  opts.theta = 0.5;
  auto cfg = config("regimes_sigma.cfg");
  const auto paths = cmd_regimes(cfg, opts);
  REQUIRE(paths.size() >= 2);
  const auto t = read_csv(paths[0]);
  CHECK(t.header == std::vector<std::string>{"sigma", "n_exp", "n_gum", "n_wei"});
  CHECK(t.rows.size() == cfg.sigma_values.size());

  opts.theta = -1.0;
  CHECK_THROWS_AS(cmd_regimes(cfg, opts), ConfigError);
  opts.theta.reset();
  cfg.sigma_values.clear();
  cfg.model = AnnulusModel{1, 0.0, kInfiniteReactivity, DeltaAtOuter{}, 1.0};
  CHECK_THROWS_AS(cmd_regimes(cfg, opts), UnsupportedError);
  cfg.model = OUWellModel{};
  CHECK_THROWS_AS(cmd_regimes(cfg, opts), UnsupportedError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("regime figure bundle") {
  const auto b = build_figure("regime");
  CHECK(b.get("title")->find("theta = 1/2") != std::string::npos);
  CHECK(b.get("title")->find("d = 3") != std::string::npos);
  CHECK(*b.get("panels") == "2");
  CHECK(*b.get("series.count") == "6");
  CHECK(b.files.size() == 6);
  for (const auto& [name, csv] : b.files) CHECK(csv.rfind("x,y\n", 0) == 0);

  const auto dir = scratch("bundle");
  write_bundle(b, dir);
  std::ifstream in(dir / "manifest.txt");
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str() == b.manifest_text());
  CHECK(read_csv(dir / *b.get("series.0.file")).rows.size() == 120);
  std::filesystem::remove_all(dir);

  CHECK_THROWS_AS(build_figure("nope"), ConfigError);
  CHECK(figure_ids().size() == 4);
}

TEST_CASE("zoo and kappa figure bundles") {
  RunConfig base;
  base.grid.num_cells = 1024;
  const auto left = build_figure("zoo_left", base);
  CHECK(count_series(left, "computed") == 2);
  CHECK(count_series(left, "asymptote") == 3);

  const auto right = build_figure("zoo_right", base);
  CHECK(count_series(right, "computed") == 3);
  CHECK(std::stoi(*right.get("markers.count")) >= 3);
  CHECK(*right.get("markers.0.shape") == "square");

  const auto kappa = build_figure("kappa", base);
  CHECK(kappa.get("title")->find("d = 1") != std::string::npos);
  CHECK(kappa.files.count("case2_pde_kappa_0.01.csv") == 0);
  CHECK(kappa.files.count("case2_pde_kappa_0p01.csv") == 1);
  CHECK(kappa.files.count("case4_pde_kappa_100.csv") == 1);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ConfigError("k", "x")) == 2);
  CHECK(exit_code_for(DomainError("x")) == 2);
  CHECK(exit_code_for(NumericalError("x")) == 3);
  CHECK(exit_code_for(UnsupportedError("x")) == 4);
  CHECK(exit_code_for(std::runtime_error("x")) == 1);
}

TEST_CASE("overrides") {
  RunConfig cfg;
  CommandOptions opts;
  opts.out = "elsewhere";
  opts.seed = 9;
  opts.theta = 0.3;
  const auto r = resolve(cfg, opts);
  CHECK(r.output_dir == std::filesystem::path("elsewhere"));
  CHECK(r.sim.seed == 9u);
  CHECK(r.theta_values == std::vector<double>{0.3});
}
