#include "xfpt/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "xfpt/csv.hpp"
#include "xfpt/errors.hpp"

namespace xfpt {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double to_real(const std::string& key, const std::string& value) {
  try {
    return parse_real(value);
  } catch (const std::exception&) {
    throw ConfigError(key, "config key '" + key + "': expected a number, got '" + value + "'");
  }
}

long long to_integer(const std::string& key, const std::string& value) {
  const double v = to_real(key, value);
  if (!std::isfinite(v) || v != std::floor(v) || std::fabs(v) > 9.0e15) {
    throw ConfigError(key, "config key '" + key + "': expected an integer, got '" + value + "'");
  }
  return static_cast<long long>(v);
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(key, "config key '" + key + "': expected true or false, got '" + value + "'");
}

std::vector<double> to_reals(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& item : split(value, ',')) {
    if (!item.empty()) out.push_back(to_real(key, item));
  }
  if (out.empty()) throw ConfigError(key, "config key '" + key + "': empty list");
  return out;
}

// "start:stop:count"
struct LogRange {
  double start, stop;
  int count;
};

LogRange to_log_range(const std::string& key, const std::string& value) {
  const auto parts = split(value, ':');
  if (parts.size() != 3) {
    throw ConfigError(key, "config key '" + key + "': expected start:stop:count, got '" + value + "'");
  }
  LogRange r{to_real(key, parts[0]), to_real(key, parts[1]),
             static_cast<int>(to_integer(key, parts[2]))};
  if (!(r.start > 0.0) || !(r.stop >= r.start) || !std::isfinite(r.stop) || r.count < 1) {
    throw ConfigError(key, "config key '" + key + "': need 0 < start <= stop and count >= 1");
  }
  return r;
}

InitialCondition to_initial(const std::string& key, const std::string& value) {
  if (value == "outer") return DeltaAtOuter{};
  if (value == "uniform") return Uniform{};
  if (value == "quasi_stationary") return QuasiStationary{};
  if (value == "center") return DeltaAtCenter{};
  throw ConfigError(key, "config key '" + key + "': unknown initial condition '" + value + "'");
}

using Entries = std::map<std::string, std::pair<std::string, int>>;  // key -> (value, line)

void build_model(const Entries& entries, RunConfig& cfg) {
  std::string type = "annulus";
  if (auto it = entries.find("model.type"); it != entries.end()) type = it->second.first;
  if (type != "annulus" && type != "ou") {
    throw ConfigError("model.type", "config key 'model.type': expected annulus or ou, got '" + type + "'");
  }
  const auto get = [&](const char* name) -> const std::string* {
    auto it = entries.find(std::string("model.") + name);
    return it == entries.end() ? nullptr : &it->second.first;
  };
  const auto reject = [&](const char* name) {
    if (get(name)) {
      const std::string key = std::string("model.") + name;
      throw ConfigError(key, "config key '" + key + "' does not apply to model type '" + type + "'");
    }
  };

  if (type == "annulus") {
    reject("eps");
    AnnulusModel m;
    if (auto v = get("dim")) m.dim = static_cast<int>(to_integer("model.dim", *v));
    if (auto v = get("sigma")) m.sigma = to_real("model.sigma", *v);
    if (auto v = get("kappa")) m.kappa = to_real("model.kappa", *v);
    if (auto v = get("initial")) m.initial = to_initial("model.initial", *v);
    if (auto v = get("t_diff")) m.t_diff = to_real("model.t_diff", *v);
    cfg.model = m;
  } else {
    reject("sigma");
    reject("kappa");
    OUWellModel m;
    if (auto v = get("dim")) m.dim = static_cast<int>(to_integer("model.dim", *v));
    if (auto v = get("eps")) m.eps = to_real("model.eps", *v);
    if (auto v = get("initial")) m.initial = to_initial("model.initial", *v);
    if (auto v = get("t_diff")) m.t_diff = to_real("model.t_diff", *v);
    cfg.model = m;
  }
  try {
    validate(cfg.model);
  } catch (const DomainError& e) {
    throw ConfigError("model", std::string("invalid [model] section: ") + e.what());
  }
}

void apply(const std::string& key, const std::string& value, RunConfig& cfg) {
  if (key == "numerics.num_cells") {
    cfg.grid.num_cells = static_cast<int>(to_integer(key, value));
  } else if (key == "numerics.grading") {
    if (value == "uniform") cfg.grid.grading = Grading::Uniform;
    else if (value == "refined") cfg.grid.grading = Grading::Refined;
    else throw ConfigError(key, "config key '" + key + "': expected uniform or refined");
  } else if (key == "numerics.dt_initial") {
    cfg.time.dt_initial = to_real(key, value);
  } else if (key == "numerics.t_final") {
    cfg.time.t_final = to_real(key, value);
  } else if (key == "numerics.dt_max") {
    cfg.time.dt_max = to_real(key, value);
  } else if (key == "numerics.growth") {
    cfg.time.growth = to_real(key, value);
  } else if (key == "numerics.startup_steps") {
    cfg.time.startup_steps = static_cast<int>(to_integer(key, value));
  } else if (key == "numerics.n_max") {
    cfg.n_max = static_cast<int>(to_integer(key, value));
  } else if (key == "numerics.extrapolate_tail") {
    cfg.quadrature.extrapolate_tail = to_bool(key, value);
  } else if (key == "numerics.mc_dt") {
    cfg.sim.dt = to_real(key, value);
  } else if (key == "numerics.mc_max_time") {
    cfg.sim.max_time = to_real(key, value);
  } else if (key == "numerics.mc_trials") {
    cfg.sim.trials = to_integer(key, value);
  } else if (key == "numerics.seed") {
    const long long s = to_integer(key, value);
    if (s < 0) throw ConfigError(key, "config key '" + key + "': seed must be non-negative");
    cfg.sim.seed = static_cast<std::uint64_t>(s);
  } else if (key == "sweep.n") {
    cfg.n_values.clear();
    for (double v : to_reals(key, value)) {
      if (v < 1.0 || v != std::floor(v)) {
        throw ConfigError(key, "config key '" + key + "': N values must be positive integers");
      }
      cfg.n_values.push_back(static_cast<long long>(v));
    }
  } else if (key == "sweep.n_log") {
    const auto r = to_log_range(key, value);
    if (r.start < 1.0) throw ConfigError(key, "config key '" + key + "': start must be >= 1");
    cfg.n_values = log_spaced_counts(r.start, r.stop, r.count);
  } else if (key == "sweep.theta") {
    cfg.theta_values = to_reals(key, value);
    for (double t : cfg.theta_values) {
      if (!(t > 0.0) || !std::isfinite(t)) {
        throw ConfigError(key, "config key '" + key + "': theta must be positive");
      }
    }
  } else if (key == "sweep.sigma") {
    cfg.sigma_values = to_reals(key, value);
  } else if (key == "sweep.sigma_log") {
    const auto r = to_log_range(key, value);
    cfg.sigma_values = log_spaced(r.start, r.stop, r.count);
  } else if (key == "sweep.k_max") {
    cfg.k_max = to_integer(key, value);
    if (cfg.k_max < 1) throw ConfigError(key, "config key '" + key + "': k_max must be >= 1");
  } else if (key == "output.dir") {
    cfg.output_dir = value;
  } else {
    throw ConfigError(key, "unknown config key '" + key + "'");
  }
}

const char* const kModelKeys[] = {"type", "dim", "sigma", "kappa", "initial", "t_diff", "eps"};

}  // namespace

std::vector<double> log_spaced(double start, double stop, int count) {
  std::vector<double> out;
  if (count == 1) return {start};
  const double a = std::log(start), b = std::log(stop);
  for (int i = 0; i < count; ++i) {
    out.push_back(i + 1 == count ? stop : std::exp(a + (b - a) * i / (count - 1)));
  }
  return out;
}

std::vector<long long> log_spaced_counts(double start, double stop, int count) {
  std::vector<long long> out;
  for (double v : log_spaced(start, stop, count)) {
    const long long n = std::max(1LL, std::llround(v));
    if (out.empty() || n != out.back()) out.push_back(n);
  }
  return out;
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  Entries model_entries;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(line, "line " + std::to_string(line_no) + ": malformed section header '" + line + "'");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section != "model" && section != "numerics" && section != "sweep" && section != "output") {
        throw ConfigError(section, "unknown config section '[" + section + "]'");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(line, "line " + std::to_string(line_no) + ": expected key = value, got '" + line + "'");
    }
    const std::string name = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      throw ConfigError(name, "config key '" + name + "' appears before any [section]");
    }
    const std::string key = section + "." + name;
    if (value.empty()) throw ConfigError(key, "config key '" + key + "' has no value");
    if (section == "model") {
      if (std::find(std::begin(kModelKeys), std::end(kModelKeys), name) == std::end(kModelKeys)) {
        throw ConfigError(key, "unknown config key '" + key + "'");
      }
      model_entries[key] = {value, line_no};
    } else {
      apply(key, value, cfg);
    }
  }
  build_model(model_entries, cfg);

  try {
    cfg.grid.validate();
  } catch (const DomainError& e) {
    throw ConfigError("numerics.num_cells", e.what());
  }
  try {
    cfg.sim.validate();
  } catch (const DomainError& e) {
    throw ConfigError("numerics", e.what());
  }
  if (!(cfg.time.growth >= 1.0)) throw ConfigError("numerics.growth", "config key 'numerics.growth' must be >= 1");
  if (cfg.time.startup_steps < 0) {
    throw ConfigError("numerics.startup_steps", "config key 'numerics.startup_steps' must be >= 0");
  }
  if (cfg.n_max < 0) throw ConfigError("numerics.n_max", "config key 'numerics.n_max' must be >= 0");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace xfpt
