// Tikhonov parameter sweep over a dyadic grid with warm starts, Morozov
// discrepancy selection, and the truncation-level study.
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fracdiff/trust_region.hpp"

namespace fracdiff {

struct SweepEntry {
  double lambda = 0.0;
  FractionalTriple minimizer;  // canonical
  double discrepancy = 0.0;    // I(a_lambda)
  bool converged = false;
};

struct SweepResult {
  std::vector<SweepEntry> entries;        // lambdas strictly decreasing
  double selected_lambda = 0.0;           // set by morozov_select
  bool selection_flagged = false;         // nearest-match fallback used
  double epsilon = 0.0;                   // noise level used for selection
  bool has_selection = false;
};

// lambda = 2^from down to 2^to (defaults: 1 .. 2^-12, 13 entries).
std::vector<double> dyadic_lambda_grid(int from_exp = 0, int to_exp = -12);

// Runs estimate per lambda, warm-starting each run from the previous
// minimizer (the first from a0). Per-entry failures are recorded as
// non-converged entries, never thrown.
SweepResult run_sweep(const ResidualModel& base, std::span<const double> lambdas,
                      const FractionalTriple& a0, const TrustRegionConfig& config);

// Largest grid lambda with I(a_lambda) <= epsilon; if none qualifies, the
// grid lambda minimizing |I - epsilon|, flagged. Records the choice in the
// result and returns it.
double morozov_select(SweepResult& result, double epsilon);

struct TruncationRow {
  int level = 0;
  FractionalTriple minimizer;  // canonical
  double discrepancy = 0.0;
  bool converged = false;
};

struct TruncationStudy {
  std::vector<TruncationRow> rows;
  int reference_level = 0;       // 4 x max(levels)
  ObservationSet observations;   // generated from the reference expansion
  SpectralExpansion reference;   // full reference expansion
};

// For each level N: estimate against observations generated from a
// high-accuracy reference expansion (N_ref = 4 max(levels)) using the
// N-term model.
TruncationStudy truncation_study(const std::function<double(double)>& f,
                                 const FractionalTriple& a_star,
                                 std::span<const int> levels, double delta,
                                 std::uint64_t seed, int observation_count,
                                 double horizon, double lambda, double quad_tol,
                                 const ParameterBox& box,
                                 const FractionalTriple& a0,
                                 const TrustRegionConfig& config);

}  // namespace fracdiff
