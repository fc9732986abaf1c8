#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "traindesign/experiments.hpp"

namespace traindesign {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse '" + value +
                      "' as a number");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse '" + value +
                      "' as an integer");
  }
}

std::vector<double> parse_grid(const std::string& key,
                               const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_double(key, item));
  }
  if (out.empty()) {
    throw ConfigError("config key '" + key + "': empty grid");
  }
  return out;
}

std::vector<std::string> parse_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool rho_equal(cplx a, cplx b) { return std::abs(a - b) <= 1e-12; }

}  // namespace

cplx parse_correlation(const std::string& value) {
  std::size_t at = value.find('@');
  std::string mag_s = trim(at == std::string::npos ? value : value.substr(0, at));
  double mag = parse_double("correlation", mag_s);
  double deg = 0.0;
  if (at != std::string::npos) {
    deg = parse_double("correlation", trim(value.substr(at + 1)));
  }
  double rad = deg * M_PI / 180.0;
  return mag * cplx(std::cos(rad), std::sin(rad));
}

ExperimentConfig default_config(const std::string& experiment) {
  ExperimentConfig cfg;
  cfg.experiment = experiment;
  cfg.gamma_grid_db = {-5.0, 0.0, 5.0, 10.0, 15.0, 20.0};
  cfg.power_grid_db = {10.0, 11.0, 12.0, 13.0, 14.0, 15.0};
  if (experiment == "nmse") {
    cfg.n_t = 4;
    cfg.n_r = 2;
    cfg.b = 6;
    cfg.trials = 2000;
  } else if (experiment == "lopt") {
    cfg.n_t = 6;
    cfg.n_r = 6;
    cfg.b = 8;
    cfg.trials = 2000;
  } else if (experiment == "eq") {
    cfg.n_t = 4;
    cfg.n_r = 2;
    cfg.b = 6;
    cfg.trials = 200;
    cfg.blocks = 10;
    cfg.rho_sr = parse_correlation("0.9@180");
    cfg.estimator = "mmse";
  } else if (experiment == "zf") {
    cfg.n_t = 4;
    cfg.n_r = 4;
    cfg.b = 6;
    cfg.trials = 100;
    cfg.blocks = 10;
    cfg.data_symbols = 50;
    cfg.gamma_grid_db = {-10.0, -5.0, 0.0, 5.0, 10.0};
    cfg.estimator = "mmse";
  } else if (experiment == "outage") {
    cfg.n_t = 6;
    cfg.n_r = 6;
    cfg.b = 8;
    cfg.trials = 10000;
  } else {
    throw ConfigError("unknown experiment '" + experiment +
                      "'; expected nmse, lopt, eq, zf, or outage");
  }
  return cfg;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value', got '" + line + "'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": empty key");
    }
    kv[key] = value;
  }
  return kv;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void apply_overrides(ExperimentConfig& cfg,
                     const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "experiment") {
      cfg.experiment = value;
    } else if (key == "n_t") {
      cfg.n_t = static_cast<int>(parse_int(key, value));
    } else if (key == "n_r") {
      cfg.n_r = static_cast<int>(parse_int(key, value));
    } else if (key == "b") {
      cfg.b = static_cast<int>(parse_int(key, value));
    } else if (key == "rho_rt") {
      cfg.rho_rt = parse_correlation(value);
    } else if (key == "rho_rr") {
      cfg.rho_rr = parse_correlation(value);
    } else if (key == "rho_sq") {
      cfg.rho_sq = parse_correlation(value);
    } else if (key == "rho_sr") {
      cfg.rho_sr = parse_correlation(value);
    } else if (key == "snr_db") {
      cfg.snr_db = parse_double(key, value);
    } else if (key == "mu") {
      cfg.mu = parse_double(key, value);
    } else if (key == "alpha") {
      cfg.alpha = parse_double(key, value);
    } else if (key == "gamma") {
      cfg.gamma = parse_double(key, value);
    } else if (key == "ar_noise") {
      cfg.ar_noise = parse_double(key, value);
    } else if (key == "gamma_grid_db") {
      cfg.gamma_grid_db = parse_grid(key, value);
    } else if (key == "power_grid_db") {
      cfg.power_grid_db = parse_grid(key, value);
    } else if (key == "trials") {
      cfg.trials = static_cast<int>(parse_int(key, value));
    } else if (key == "blocks") {
      cfg.blocks = static_cast<int>(parse_int(key, value));
    } else if (key == "data_symbols") {
      cfg.data_symbols = static_cast<int>(parse_int(key, value));
    } else if (key == "threads") {
      cfg.threads = static_cast<int>(parse_int(key, value));
    } else if (key == "estimator") {
      cfg.estimator = value;
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "schemes") {
      cfg.schemes = parse_list(value);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
}

std::vector<std::string> scheme_names(const ExperimentConfig& cfg) {
  std::vector<std::string> all;
  if (cfg.experiment == "nmse") {
    all = {"asgpp", "cmse", "white"};
  } else if (cfg.experiment == "lopt") {
    if (cfg.estimator == "mvu") {
      all = {"adgpp", "avg_app", "cmse", "white"};
    } else {
      all = {"asgpp", "cmse", "white"};
    }
  } else if (cfg.experiment == "eq") {
    all = {"adgpp", "avg_app", "cmse", "white"};
  } else if (cfg.experiment == "zf") {
    all = {"asgpp", "avg_app", "cmse", "white", "clairvoyant"};
  } else if (cfg.experiment == "outage") {
    all = {"asgpp", "avg_app"};
  }
  if (cfg.schemes.empty()) return all;
  std::vector<std::string> out;
  for (const std::string& s : all) {
    if (std::find(cfg.schemes.begin(), cfg.schemes.end(), s) !=
        cfg.schemes.end()) {
      out.push_back(s);
    }
  }
  return out;
}

void validate_config(const ExperimentConfig& cfg) {
  static const std::set<std::string> known = {"nmse", "lopt", "eq", "zf",
                                              "outage"};
  if (known.find(cfg.experiment) == known.end()) {
    throw ConfigError("unknown experiment '" + cfg.experiment +
                      "'; expected nmse, lopt, eq, zf, or outage");
  }
  if (cfg.n_t < 1 || cfg.n_r < 1) {
    throw ConfigError("antenna counts must be positive");
  }
  if (cfg.b < cfg.n_t) {
    throw ConfigError("training length b must be at least n_t (b = " +
                      std::to_string(cfg.b) + ", n_t = " +
                      std::to_string(cfg.n_t) + ")");
  }
  if (cfg.trials < 1) throw ConfigError("trials must be at least 1");
  if (cfg.blocks < 1) throw ConfigError("blocks must be at least 1");
  if (cfg.data_symbols < 1) {
    throw ConfigError("data_symbols must be at least 1");
  }
  if (cfg.threads < 1) throw ConfigError("threads must be at least 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    throw ConfigError("alpha must lie in (0, 1)");
  }
  if (!(cfg.gamma > 0.0)) throw ConfigError("gamma must be positive");
  if (!(cfg.mu >= 0.0)) throw ConfigError("mu must be nonnegative");
  for (cplx r : {cfg.rho_rt, cfg.rho_rr, cfg.rho_sq, cfg.rho_sr}) {
    if (!(std::abs(r) < 1.0)) {
      throw ConfigError("correlation magnitudes must be below 1");
    }
  }
  if (!(std::abs(cfg.ar_noise) < 1.0)) {
    throw ConfigError("ar_noise magnitude must be below 1");
  }
  const std::vector<double>& grid =
      cfg.experiment == "outage" ? cfg.power_grid_db : cfg.gamma_grid_db;
  if (grid.empty()) throw ConfigError("the x-axis grid is empty");
  for (double x : grid) {
    if (!std::isfinite(x)) throw ConfigError("grid values must be finite");
  }
  if (cfg.experiment == "lopt" && cfg.estimator != "mvu" &&
      cfg.estimator != "mmse") {
    throw ConfigError("estimator must be 'mvu' or 'mmse'");
  }
  if (cfg.experiment == "zf" && cfg.n_t != cfg.n_r) {
    throw ConfigError("the zf study needs n_t = n_r");
  }
  bool needs_matched = cfg.experiment == "nmse" || cfg.experiment == "zf" ||
                       cfg.experiment == "outage" ||
                       (cfg.experiment == "lopt" && cfg.estimator == "mmse");
  if (needs_matched && !rho_equal(cfg.rho_rr, cfg.rho_sr)) {
    throw ConfigError(
        "this experiment requires matched receive factors (rho_sr == "
        "rho_rr) for the prior-aware guaranteed design");
  }
  std::vector<std::string> avail = scheme_names(cfg);
  if (!cfg.schemes.empty()) {
    for (const std::string& s : cfg.schemes) {
      bool ok = false;
      ExperimentConfig probe = cfg;
      probe.schemes.clear();
      for (const std::string& a : scheme_names(probe)) {
        if (a == s) ok = true;
      }
      if (!ok) {
        throw ConfigError("scheme '" + s +
                          "' is not available in this experiment");
      }
    }
    if (avail.empty()) {
      throw ConfigError("the scheme filter excludes every scheme");
    }
  }
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  if (cfg.experiment == "nmse") return run_nmse_vs_gamma(cfg);
  if (cfg.experiment == "lopt") return run_l_optimality(cfg);
  if (cfg.experiment == "eq") return run_equalization(cfg);
  if (cfg.experiment == "zf") return run_zf(cfg);
  return run_outage(cfg);
}

}  // namespace traindesign
