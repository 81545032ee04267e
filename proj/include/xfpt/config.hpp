#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "xfpt/mc.hpp"
#include "xfpt/pde.hpp"
#include "xfpt/radial.hpp"

namespace xfpt {

/// Parsed run configuration.  Text format:
///
///   [model]
///   type = annulus        # or ou
///   dim = 3
///   sigma = 0.1
///   kappa = inf
///   initial = outer       # outer | uniform | quasi_stationary | center
///   t_diff = 1
///
///   [sweep]
///   n_log = 1:1e6:25      # start:stop:count, log-spaced and rounded
///   theta = 0.5
///
/// Unknown sections or keys raise ConfigError naming the key.
struct RunConfig {
  RadialModel model = AnnulusModel{};
  GridSpec grid;
  TimeSpec time;
  QuadratureOptions quadrature;
  int n_max = 64;
  SimConfig sim;

  std::vector<long long> n_values;
  std::vector<double> theta_values{0.5};
  std::vector<double> sigma_values;
  long long k_max = 1;

  std::filesystem::path output_dir = ".";
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Integer N values log-spaced over [start, stop], rounded and de-duplicated.
std::vector<long long> log_spaced_counts(double start, double stop, int count);
std::vector<double> log_spaced(double start, double stop, int count);

}  // namespace xfpt
