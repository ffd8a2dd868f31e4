#include "fracdiff/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fracdiff {

std::vector<double> dyadic_lambda_grid(int from_exp, int to_exp) {
  if (to_exp > from_exp) {
    throw std::invalid_argument("dyadic grid: exponents must decrease");
  }
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(from_exp - to_exp) + 1);
  for (int e = from_exp; e >= to_exp; --e) {
    grid.push_back(std::ldexp(1.0, e));
  }
  return grid;
}

SweepResult run_sweep(const ResidualModel& base, std::span<const double> lambdas,
                      const FractionalTriple& a0,
                      const TrustRegionConfig& config) {
  if (lambdas.empty()) {
    throw std::invalid_argument("sweep: lambda grid must be nonempty");
  }
  for (std::size_t i = 1; i < lambdas.size(); ++i) {
    if (lambdas[i] >= lambdas[i - 1]) {
      throw std::invalid_argument("sweep: lambda grid must be decreasing");
    }
  }
  SweepResult out;
  out.entries.reserve(lambdas.size());
  FractionalTriple start = a0;
  for (double lambda : lambdas) {
    ResidualModel model = base;
    model.lambda = lambda;
    SweepEntry entry;
    entry.lambda = lambda;
    try {
      const EstimateReport report = estimate(model, start, config);
      entry.minimizer = report.final_triple;
      entry.discrepancy = report.final_discrepancy;
      entry.converged = report.converged;
      start = model.box.project(report.final_triple);  // warm start
    } catch (const std::exception&) {
      entry.minimizer = start;
      entry.discrepancy = std::numeric_limits<double>::quiet_NaN();
      entry.converged = false;
    }
    out.entries.push_back(entry);
  }
  return out;
}

double morozov_select(SweepResult& result, double epsilon) {
  if (result.entries.empty()) {
    throw std::invalid_argument("morozov: empty sweep result");
  }
  if (!(epsilon >= 0.0)) {
    throw std::invalid_argument("morozov: epsilon must be >= 0");
  }
  result.epsilon = epsilon;
  result.selection_flagged = false;
  // Entries are ordered by decreasing lambda; the first qualifying entry is
  // the largest lambda with I(a_lambda) <= epsilon.
  for (const SweepEntry& e : result.entries) {
    if (std::isfinite(e.discrepancy) && e.discrepancy <= epsilon) {
      result.selected_lambda = e.lambda;
      result.has_selection = true;
      return e.lambda;
    }
  }
  double best_gap = std::numeric_limits<double>::infinity();
  double best_lambda = result.entries.front().lambda;
  for (const SweepEntry& e : result.entries) {
    if (!std::isfinite(e.discrepancy)) continue;
    const double gap = std::fabs(e.discrepancy - epsilon);
    if (gap < best_gap) {
      best_gap = gap;
      best_lambda = e.lambda;
    }
  }
  result.selected_lambda = best_lambda;
  result.selection_flagged = true;
  result.has_selection = true;
  return best_lambda;
}

TruncationStudy truncation_study(const std::function<double(double)>& f,
                                 const FractionalTriple& a_star,
                                 std::span<const int> levels, double delta,
                                 std::uint64_t seed, int observation_count,
                                 double horizon, double lambda, double quad_tol,
                                 const ParameterBox& box,
                                 const FractionalTriple& a0,
                                 const TrustRegionConfig& config) {
  if (levels.empty()) {
    throw std::invalid_argument("truncation study: levels must be nonempty");
  }
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 1 || (i > 0 && levels[i] <= levels[i - 1])) {
      throw std::invalid_argument("truncation study: levels must be increasing");
    }
  }
  TruncationStudy study;
  study.reference_level = 4 * levels.back();
  study.reference = SpectralExpansion::expand(f, study.reference_level, quad_tol);
  study.observations = make_observations(study.reference, a_star,
                                         observation_count, horizon, delta, seed);
  for (int level : levels) {
    TruncationRow row;
    row.level = level;
    try {
      ResidualModel model;
      model.observations = study.observations;
      model.expansion = study.reference.truncated(level);
      model.box = box;
      model.lambda = lambda;
      const EstimateReport report = estimate(model, a0, config);
      row.minimizer = report.final_triple;
      row.discrepancy = report.final_discrepancy;
      row.converged = report.converged;
    } catch (const std::exception&) {
      row.minimizer = a0;
      row.discrepancy = std::numeric_limits<double>::quiet_NaN();
      row.converged = false;
    }
    study.rows.push_back(row);
  }
  return study;
}

}  // namespace fracdiff
