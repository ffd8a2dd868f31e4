// Reproduction presets and run orchestration: the two builtin experiments,
// seeded multi-start, and the worker-thread cap (FRACDIFF_THREADS).
#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "fracdiff/config.hpp"
#include "fracdiff/io.hpp"
#include "fracdiff/sweep.hpp"

namespace fracdiff {

// Worker cap for fan-out runs: FRACDIFF_THREADS, else hardware concurrency.
int worker_threads();

// Starts drawn uniformly over the box: mt19937_64(seed), three u53 draws per
// start in (beta, alpha, gamma) order. Runs execute concurrently (capped by
// worker_threads()); results are ordered by start index.
std::vector<EstimateReport> run_multi_start(const ResidualModel& model,
                                            const TrustRegionConfig& config,
                                            int start_count,
                                            std::uint64_t seed);

struct Example1Result {
  RunConfig config;
  ObservationSet observations;
  EstimateReport report;                 // run at config.lambda
  std::optional<SweepResult> sweep;      // present when delta > 0
  double epsilon = 0.0;                  // realized I(a*) on the noisy data
  // Reconstruction rows behind the discrepancy-curve figure: the center
  // trace u(a_k)(t, 0) at each accepted iterate against phi(t).
  std::vector<double> reconstruction_times;
  std::vector<double> reconstruction_phi;
  std::vector<std::vector<double>> reconstruction_per_iterate;
};
Example1Result run_example1(double delta, std::uint64_t seed);

struct Example2Result {
  RunConfig config;
  TruncationStudy study;
  // Max |u_N(a*)(t_i,0) - phi(t_i)| per level, and where it occurs.
  std::vector<double> reconstruction_max_error;
  std::vector<double> reconstruction_argmax_t;
  // Full per-level reconstruction error rows (t, err_N1, err_N2, ...).
  std::vector<std::vector<double>> reconstruction_rows;
};
Example2Result run_example2(std::span<const int> levels, double delta,
                            std::uint64_t seed);

}  // namespace fracdiff
