#include "fracdiff/observations.hpp"

#include <cmath>
#include <random>

namespace fracdiff {

void ObservationSet::validate() const {
  if (times.size() < 2 || weights.size() != times.size() ||
      values.size() != times.size()) {
    throw std::invalid_argument(
        "observations: need m >= 2 nodes with matching weights and values");
  }
  if (times.front() <= 0.0) {
    throw std::invalid_argument("observations: nodes must be positive");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (times[i] <= times[i - 1]) {
      throw std::invalid_argument("observations: nodes must be increasing");
    }
  }
  for (double w : weights) {
    if (!(w >= 0.0)) {
      throw std::invalid_argument("observations: weights must be >= 0");
    }
  }
}

std::vector<double> trapezoid_weights(std::span<const double> times) {
  const std::size_t m = times.size();
  if (m < 2) {
    throw std::invalid_argument("trapezoid_weights: need at least two nodes");
  }
  std::vector<double> w(m);
  w[0] = 0.5 * (times[1] - times[0]);
  for (std::size_t i = 1; i + 1 < m; ++i) {
    w[i] = 0.5 * (times[i + 1] - times[i - 1]);
  }
  w[m - 1] = 0.5 * (times[m - 1] - times[m - 2]);
  return w;
}

ObservationSet make_observations(const SpectralExpansion& exp,
                                 const FractionalTriple& a_star, int m,
                                 double horizon, double delta,
                                 std::uint64_t seed) {
  if (m < 2) throw std::invalid_argument("make_observations: need m >= 2");
  if (!(horizon > 0.0)) {
    throw std::invalid_argument("make_observations: horizon must be > 0");
  }
  if (delta < 0.0) {
    throw std::invalid_argument("make_observations: delta must be >= 0");
  }

  ObservationSet obs;
  obs.noise_level = delta;
  obs.seed = seed;
  obs.times.resize(static_cast<std::size_t>(m));
  for (int i = 1; i <= m; ++i) {
    obs.times[static_cast<std::size_t>(i) - 1] = horizon * i / m;
  }
  obs.weights = trapezoid_weights(obs.times);
  obs.values = trace_at_center(exp, a_star, obs.times);

  double energy = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    energy += obs.weights[i] * obs.values[i] * obs.values[i];
  }
  obs.signal_norm = std::sqrt(energy);

  if (delta > 0.0) {
    if (obs.signal_norm == 0.0) {
      throw DegenerateSignalError(
          "make_observations: zero signal norm with delta > 0");
    }
    std::mt19937_64 gen(seed);
    const double scale = delta / obs.signal_norm;
    for (double& v : obs.values) {
      const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      v += scale * (2.0 * u - 1.0);
    }
  }
  return obs;
}

}  // namespace fracdiff
