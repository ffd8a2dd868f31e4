// Flat key = value run configuration: strict parsing (unknown keys fail),
// range validation naming the offending field, and builders for the pieces
// the pipeline needs (expansion, observations, residual model).
#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fracdiff/inverse.hpp"
#include "fracdiff/trust_region.hpp"

namespace fracdiff {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& key, const std::string& message)
      : std::runtime_error(message), line_(line), key_(key) {}
  int line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  int line_;
  std::string key_;
};

struct RunConfig {
  // initial condition: "example1", "example2", or "coeffs:c1,c2,..."
  std::string initial_condition = "example1";
  std::vector<double> coefficients;  // filled for coeffs:

  double horizon = 1.0;        // T
  int observation_count = 200;  // m
  int truncation = 0;          // 0 = auto
  double quad_tol = 1e-8;
  double tail_target = 1e-8;

  FractionalTriple a_star{0.4, 0.6, 1.2};
  double delta = 0.0;
  std::uint64_t seed = 1;

  ParameterBox box = ParameterBox::standard();

  TrustRegionConfig solver;
  double lambda = 1e-7;
  std::array<double, 3> fd_steps{1e-7, 1e-7, 1e-7};
  FractionalTriple a0{0.05, 0.1, 1.7};

  int t_count = 200;  // forward output nodes
  int x_count = 0;    // 0 = center trace only
  int starts = 24;
  std::vector<int> levels{5, 10, 20, 40, 80};

  void validate() const;  // throws ConfigError naming the field
};

// Strict parse; empty input yields all defaults.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(std::string_view text);

// Echo of the fully resolved configuration, parseable by parse_config_text.
std::string render_config(const RunConfig& config);

// The configured initial condition and its spectral expansion.
double initial_condition_value(const RunConfig& config, double x);
SpectralExpansion build_expansion(const RunConfig& config);
ObservationSet build_observations(const RunConfig& config,
                                  const SpectralExpansion& expansion);
ResidualModel build_model(const RunConfig& config,
                          const SpectralExpansion& expansion,
                          ObservationSet observations);

}  // namespace fracdiff
