#include "fracdiff/config.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <sstream>

namespace fracdiff {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  const auto last = s.find_last_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  return std::string(s.substr(first, last - first + 1));
}

double parse_double(int line, const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(line, key,
                      "line " + std::to_string(line) + ": key '" + key +
                          "': expected a number, got '" + text + "'");
  }
}

long long parse_int(int line, const std::string& key, const std::string& text) {
  long long v = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(line, key,
                      "line " + std::to_string(line) + ": key '" + key +
                          "': expected an integer, got '" + text + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(trim(item));
  return parts;
}

void fail_range(const std::string& key, const std::string& requirement) {
  throw ConfigError(0, key, "key '" + key + "' out of range: " + requirement);
}

}  // namespace

void RunConfig::validate() const {
  if (initial_condition != "example1" && initial_condition != "example2" &&
      initial_condition.rfind("coeffs:", 0) != 0) {
    fail_range("initial_condition", "must be example1, example2 or coeffs:...");
  }
  if (initial_condition.rfind("coeffs:", 0) == 0 && coefficients.empty()) {
    fail_range("initial_condition", "coeffs list must not be empty");
  }
  if (!(horizon > 0.0)) fail_range("horizon", "must be > 0");
  if (observation_count < 2) fail_range("observation_count", "must be >= 2");
  if (truncation < 0) fail_range("truncation", "must be 'auto' or >= 1");
  if (!(quad_tol > 0.0)) fail_range("quad_tol", "must be > 0");
  if (!(tail_target > 0.0)) fail_range("tail_target", "must be > 0");
  if (!(a_star.beta > 0.0 && a_star.beta < 1.0)) {
    fail_range("beta_star", "must lie in the open interval (0, 1)");
  }
  if (!(a_star.alpha > 0.0 && a_star.alpha < 2.0)) {
    fail_range("alpha_star", "must lie in the open interval (0, 2)");
  }
  if (!(a_star.gamma > 0.0 && a_star.gamma < 2.0)) {
    fail_range("gamma_star", "must lie in the open interval (0, 2)");
  }
  if (delta < 0.0) fail_range("delta", "must be >= 0");
  if (!(box.beta_lo > 0.0 && box.beta_lo <= box.beta_hi && box.beta_hi < 1.0)) {
    fail_range("beta_lo/beta_hi", "need 0 < beta_lo <= beta_hi < 1");
  }
  if (!(box.alpha_lo > 0.0 && box.alpha_lo <= box.alpha_hi &&
        box.alpha_hi < 2.0)) {
    fail_range("alpha_lo/alpha_hi", "need 0 < alpha_lo <= alpha_hi < 2");
  }
  if (!(box.gamma_lo > 0.0 && box.gamma_lo <= box.gamma_hi &&
        box.gamma_hi < 2.0)) {
    fail_range("gamma_lo/gamma_hi", "need 0 < gamma_lo <= gamma_hi < 2");
  }
  try {
    solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, "solver", e.what());
  }
  if (lambda < 0.0) fail_range("lambda", "must be >= 0");
  for (double h : fd_steps) {
    if (!(h > 0.0)) fail_range("fd_step", "must be > 0");
  }
  if (!box.contains(a0)) fail_range("a0", "must lie inside the parameter box");
  if (t_count < 1) fail_range("t_count", "must be >= 1");
  if (x_count < 0) fail_range("x_count", "must be >= 0");
  if (starts < 1) fail_range("starts", "must be >= 1");
  if (levels.empty()) fail_range("levels", "must not be empty");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 1 || (i > 0 && levels[i] <= levels[i - 1])) {
      fail_range("levels", "must be increasing and >= 1");
    }
  }
}

RunConfig parse_config_text(std::string_view text) {
  RunConfig config;
  std::vector<std::string> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string line(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(line_no, "",
                        "line " + std::to_string(line_no) +
                            ": expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError(line_no, key,
                        "line " + std::to_string(line_no) +
                            ": empty key or value");
    }
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
      throw ConfigError(line_no, key,
                        "line " + std::to_string(line_no) + ": duplicate key '" +
                            key + "'");
    }
    seen.push_back(key);

    const auto num = [&](double& field) {
      field = parse_double(line_no, key, value);
    };
    const auto integer = [&](int& field) {
      field = static_cast<int>(parse_int(line_no, key, value));
    };

    if (key == "initial_condition") {
      config.initial_condition = value;
      if (value.rfind("coeffs:", 0) == 0) {
        config.coefficients.clear();
        for (const std::string& c : split(value.substr(7), ',')) {
          if (!c.empty()) {
            config.coefficients.push_back(parse_double(line_no, key, c));
          }
        }
      }
    } else if (key == "horizon") {
      num(config.horizon);
    } else if (key == "observation_count") {
      integer(config.observation_count);
    } else if (key == "truncation") {
      if (value == "auto") {
        config.truncation = 0;
      } else {
        integer(config.truncation);
        if (config.truncation < 1) {
          throw ConfigError(line_no, key,
                            "line " + std::to_string(line_no) +
                                ": truncation must be 'auto' or >= 1");
        }
      }
    } else if (key == "quad_tol") {
      num(config.quad_tol);
    } else if (key == "tail_target") {
      num(config.tail_target);
    } else if (key == "beta_star") {
      num(config.a_star.beta);
    } else if (key == "alpha_star") {
      num(config.a_star.alpha);
    } else if (key == "gamma_star") {
      num(config.a_star.gamma);
    } else if (key == "delta") {
      num(config.delta);
    } else if (key == "seed") {
      config.seed = static_cast<std::uint64_t>(parse_int(line_no, key, value));
    } else if (key == "beta_lo") {
      num(config.box.beta_lo);
    } else if (key == "beta_hi") {
      num(config.box.beta_hi);
    } else if (key == "alpha_lo") {
      num(config.box.alpha_lo);
    } else if (key == "alpha_hi") {
      num(config.box.alpha_hi);
    } else if (key == "gamma_lo") {
      num(config.box.gamma_lo);
    } else if (key == "gamma_hi") {
      num(config.box.gamma_hi);
    } else if (key == "initial_radius") {
      num(config.solver.initial_radius);
    } else if (key == "max_radius") {
      num(config.solver.max_radius);
    } else if (key == "eta") {
      num(config.solver.eta);
    } else if (key == "max_iterations") {
      integer(config.solver.max_iterations);
    } else if (key == "gradient_tolerance") {
      num(config.solver.gradient_tolerance);
    } else if (key == "lambda") {
      num(config.lambda);
    } else if (key == "fd_step_beta") {
      num(config.fd_steps[0]);
    } else if (key == "fd_step_alpha") {
      num(config.fd_steps[1]);
    } else if (key == "fd_step_gamma") {
      num(config.fd_steps[2]);
    } else if (key == "a0_beta") {
      num(config.a0.beta);
    } else if (key == "a0_alpha") {
      num(config.a0.alpha);
    } else if (key == "a0_gamma") {
      num(config.a0.gamma);
    } else if (key == "t_count") {
      integer(config.t_count);
    } else if (key == "x_count") {
      integer(config.x_count);
    } else if (key == "starts") {
      integer(config.starts);
    } else if (key == "levels") {
      config.levels.clear();
      for (const std::string& item : split(value, ',')) {
        if (!item.empty()) {
          config.levels.push_back(
              static_cast<int>(parse_int(line_no, key, item)));
        }
      }
    } else {
      throw ConfigError(line_no, key,
                        "line " + std::to_string(line_no) + ": unknown key '" +
                            key + "'");
    }
  }
  config.validate();
  return config;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(0, "", "cannot open config file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string render_config(const RunConfig& config) {
  char buf[64];
  const auto g = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::ostringstream out;
  out << "initial_condition = " << config.initial_condition << "\n";
  out << "horizon = " << g(config.horizon) << "\n";
  out << "observation_count = " << config.observation_count << "\n";
  out << "truncation = ";
  if (config.truncation == 0) {
    out << "auto\n";
  } else {
    out << config.truncation << "\n";
  }
  out << "quad_tol = " << g(config.quad_tol) << "\n";
  out << "tail_target = " << g(config.tail_target) << "\n";
  out << "beta_star = " << g(config.a_star.beta) << "\n";
  out << "alpha_star = " << g(config.a_star.alpha) << "\n";
  out << "gamma_star = " << g(config.a_star.gamma) << "\n";
  out << "delta = " << g(config.delta) << "\n";
  out << "seed = " << config.seed << "\n";
  out << "beta_lo = " << g(config.box.beta_lo) << "\n";
  out << "beta_hi = " << g(config.box.beta_hi) << "\n";
  out << "alpha_lo = " << g(config.box.alpha_lo) << "\n";
  out << "alpha_hi = " << g(config.box.alpha_hi) << "\n";
  out << "gamma_lo = " << g(config.box.gamma_lo) << "\n";
  out << "gamma_hi = " << g(config.box.gamma_hi) << "\n";
  out << "initial_radius = " << g(config.solver.initial_radius) << "\n";
  out << "max_radius = " << g(config.solver.max_radius) << "\n";
  out << "eta = " << g(config.solver.eta) << "\n";
  out << "max_iterations = " << config.solver.max_iterations << "\n";
  out << "gradient_tolerance = " << g(config.solver.gradient_tolerance) << "\n";
  out << "lambda = " << g(config.lambda) << "\n";
  out << "fd_step_beta = " << g(config.fd_steps[0]) << "\n";
  out << "fd_step_alpha = " << g(config.fd_steps[1]) << "\n";
  out << "fd_step_gamma = " << g(config.fd_steps[2]) << "\n";
  out << "a0_beta = " << g(config.a0.beta) << "\n";
  out << "a0_alpha = " << g(config.a0.alpha) << "\n";
  out << "a0_gamma = " << g(config.a0.gamma) << "\n";
  out << "t_count = " << config.t_count << "\n";
  out << "x_count = " << config.x_count << "\n";
  out << "starts = " << config.starts << "\n";
  out << "levels = ";
  for (std::size_t i = 0; i < config.levels.size(); ++i) {
    if (i) out << ",";
    out << config.levels[i];
  }
  out << "\n";
  return out.str();
}

double initial_condition_value(const RunConfig& config, double x) {
  if (config.initial_condition == "example1") {
    return eigenfunction(1, x) + 0.5 * eigenfunction(5, x);
  }
  if (config.initial_condition == "example2") {
    return std::exp(-x * x) - std::exp(-1.0);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < config.coefficients.size(); ++i) {
    sum += config.coefficients[i] * eigenfunction(static_cast<int>(i) + 1, x);
  }
  return sum;
}

SpectralExpansion build_expansion(const RunConfig& config) {
  if (config.initial_condition == "example1") {
    // Hard-coded coefficient list: no quadrature variance.
    return SpectralExpansion::from_coefficients(
        std::vector<double>{1.0, 0.0, 0.0, 0.0, 0.5});
  }
  if (config.initial_condition.rfind("coeffs:", 0) == 0) {
    return SpectralExpansion::from_coefficients(config.coefficients);
  }
  const auto f = [&config](double x) {
    return initial_condition_value(config, x);
  };
  if (config.truncation > 0) {
    return SpectralExpansion::expand(f, config.truncation, config.quad_tol);
  }
  return SpectralExpansion::expand_auto(f, config.quad_tol, config.tail_target);
}

ObservationSet build_observations(const RunConfig& config,
                                  const SpectralExpansion& expansion) {
  return make_observations(expansion, config.a_star, config.observation_count,
                           config.horizon, config.delta, config.seed);
}

ResidualModel build_model(const RunConfig& config,
                          const SpectralExpansion& expansion,
                          ObservationSet observations) {
  ResidualModel model;
  model.observations = std::move(observations);
  model.expansion = expansion;
  model.box = config.box;
  model.lambda = config.lambda;
  model.fd_steps = config.fd_steps;
  return model;
}

}  // namespace fracdiff
