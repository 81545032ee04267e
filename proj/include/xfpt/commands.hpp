#pragma once

#include <exception>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xfpt/config.hpp"

namespace xfpt {

/// Command-line overrides shared by every command.
struct CommandOptions {
  std::optional<std::filesystem::path> out;  ///< overrides [output] dir
  int jobs = 1;
  std::optional<std::uint64_t> seed;
  std::optional<double> theta;
};

/// Settings after applying the overrides to a config.
RunConfig resolve(RunConfig cfg, const CommandOptions& opts);

/// Each command writes its CSV files under cfg.output_dir and returns their paths.
std::vector<std::filesystem::path> cmd_survival(const RunConfig& cfg, const CommandOptions& opts);
std::vector<std::filesystem::path> cmd_fastest(const RunConfig& cfg, const CommandOptions& opts);
std::vector<std::filesystem::path> cmd_regimes(const RunConfig& cfg, const CommandOptions& opts);
std::vector<std::filesystem::path> cmd_mc_validate(const RunConfig& cfg, const CommandOptions& opts);
std::vector<std::filesystem::path> cmd_spectrum(const RunConfig& cfg, const CommandOptions& opts);

/// Table behind cmd_fastest: `N,mean_pde,mean_small_n,mean_large_n,mean_max_approx,label`.
std::string fastest_table(const RunConfig& cfg, int jobs);

// Figure bundles -------------------------------------------------------------

inline const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids{"regime", "zoo_left", "zoo_right", "kappa"};
  return ids;
}

/// Data behind one figure: ordered manifest entries plus one CSV (columns x,y)
/// per curve.
struct FigureBundle {
  std::string id;
  std::vector<std::pair<std::string, std::string>> manifest;
  std::map<std::string, std::string> files;  ///< file name -> CSV contents

  std::string manifest_text() const;
  /// First value stored under `key`, or nullopt.
  std::optional<std::string> get(const std::string& key) const;
};

/// Builds a figure's data.  `base` supplies grid settings; the physical
/// parameters are fixed by the figure.
FigureBundle build_figure(const std::string& id, const RunConfig& base = {}, int jobs = 1);

/// Writes the bundle into `dir` (manifest.txt plus the series files).
void write_bundle(const FigureBundle& bundle, const std::filesystem::path& dir);

std::vector<std::filesystem::path> cmd_figure(const std::string& id, const RunConfig& cfg,
                                              const CommandOptions& opts);

/// 2 config error, 3 numerical failure, 4 unsupported request, 1 otherwise.
int exit_code_for(const std::exception& e);

}  // namespace xfpt
