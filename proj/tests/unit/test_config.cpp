#include <cmath>
#include <filesystem>
#include <limits>
#include <string>

#include "approx.hpp"
#include "doctest.h"
#include "xfpt/config.hpp"
#include "xfpt/csv.hpp"
#include "xfpt/errors.hpp"

using namespace xfpt;

namespace {

std::string key_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("xfpt_test_config_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("shipped configs parse") {
  const auto dir = std::filesystem::path(XFPT_SOURCE_DIR) / "configs";
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_config(entry.path()));
  }
  const auto c1 = load_config(dir / "case1.cfg");
  const auto* m = std::get_if<AnnulusModel>(&c1.model);
  REQUIRE(m);
  CHECK(m->dim == 3);
  CHECK(m->sigma == 0.1);
  CHECK(std::isinf(m->kappa));
  CHECK(std::holds_alternative<DeltaAtOuter>(m->initial));
  CHECK(c1.grid.num_cells == 2048);
  CHECK(c1.grid.grading == Grading::Refined);
  CHECK(c1.n_values.front() == 1);
  CHECK(c1.n_values.back() == 1000000);
  CHECK(c1.output_dir == std::filesystem::path("results/case1"));

  const auto c4 = load_config(dir / "case4.cfg");
  CHECK(c4.n_values == std::vector<long long>{1, 10, 100, 1000, 10000});
  REQUIRE(c4.time.dt_initial);
  CHECK(*c4.time.dt_initial == 1e-10);
}

TEST_CASE("errors name the offending key") {
  CHECK(key_of("[model]\nsigma = oops\n") == "model.sigma");
  CHECK(key_of("[model]\nbogus = 1\n") == "model.bogus");
  CHECK(key_of("[numerics]\nnum_cells = 12.5\n") == "numerics.num_cells");
  CHECK(key_of("[numerics]\ngrading = wavy\n") == "numerics.grading");
  CHECK(key_of("[sweep]\nn_log = 1:10\n") == "sweep.n_log");
  CHECK(key_of("[sweep]\nn = 0.5\n") == "sweep.n");
  CHECK(key_of("[sweep]\ntheta = -1\n") == "sweep.theta");
  CHECK(key_of("[model]\ntype = annulus\neps = 0.1\n") == "model.eps");
  CHECK(key_of("[model]\ntype = ou\nsigma = 0.1\n") == "model.sigma");
  CHECK(key_of("[model]\ninitial = sideways\n") == "model.initial");
  CHECK(key_of("[model]\nsigma =\n") == "model.sigma");
  CHECK(key_of("[bogus]\n") == "bogus");
  CHECK(key_of("dim = 3\n") == "dim");
  CHECK(key_of("[model]\ndim = 1\nsigma = 0.2\n") == "model");
  CHECK_THROWS_AS(load_config("/nonexistent/x.cfg"), ConfigError);
}

TEST_CASE("values and ranges") {
  const auto cfg = parse_config(
      "# comment\n[model]\ntype = ou\ndim = 1\neps = 0.25  # trailing\ninitial = center\n"
      "[sweep]\nn_log = 1:1000:4\ntheta = 0.25, 0.5\nsigma_log = 0.01:1:3\n"
      "[numerics]\nextrapolate_tail = no\nseed = 42\n");
  const auto* ou = std::get_if<OUWellModel>(&cfg.model);
  REQUIRE(ou);
  CHECK(ou->eps == 0.25);
  CHECK(std::holds_alternative<DeltaAtCenter>(ou->initial));
  CHECK(cfg.n_values == std::vector<long long>{1, 10, 100, 1000});
  CHECK(cfg.theta_values == std::vector<double>{0.25, 0.5});
  REQUIRE(cfg.sigma_values.size() == 3);
  CHECK(cfg.sigma_values[1] == Approx(0.1).epsilon(1e-14));
  CHECK_FALSE(cfg.quadrature.extrapolate_tail);
  CHECK(cfg.sim.seed == 42u);

  CHECK(log_spaced_counts(1.0, 3.0, 10) == std::vector<long long>{1, 2, 3});
  CHECK(log_spaced(2.0, 2.0, 1) == std::vector<double>{2.0});
  const auto ks = log_spaced_counts(1.0, 1e6, 25);
  for (std::size_t i = 1; i < ks.size(); ++i) CHECK(ks[i] > ks[i - 1]);
  CHECK(ks.size() == 25);
}

TEST_CASE("real formatting round trips") {
  for (double v : {0.0, 1.0, -2.5, 1e-300, 0.1, 1.0 / 3.0, 6.02214076e23}) {
    CHECK(parse_real(format_real(v)) == v);
  }
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(format_real(inf) == "inf");
  CHECK(format_real(-inf) == "-inf");
  CHECK(parse_real("infinity") == inf);
  CHECK(std::isnan(parse_real(format_real(std::nan("")))));
  CHECK_THROWS(parse_real("1.5x"));
  CHECK_THROWS(parse_real(""));
}

TEST_CASE("CSV write and read") {
  const auto dir = scratch("csv");
  CsvWriter w({"t", "S"});
  w.row(std::vector<double>{0.0, 1.0}).row(std::vector<double>{0.5, 1.0 / 3.0});
  w.write(dir / "a.csv");
  const auto table = read_csv(dir / "a.csv");
  CHECK(table.header == std::vector<std::string>{"t", "S"});
  REQUIRE(table.rows.size() == 2);
  CHECK(table.real(1, "S") == 1.0 / 3.0);
  CHECK_THROWS(table.column("nope"));
  CHECK_THROWS(w.row(std::vector<double>{1.0}));
  std::filesystem::remove_all(dir);
}
