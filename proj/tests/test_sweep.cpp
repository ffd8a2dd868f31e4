#include "fracdiff/sweep.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

using namespace fracdiff;

namespace {
const FractionalTriple kTruth{0.4, 0.6, 1.2};
const FractionalTriple kStart{0.05, 0.1, 1.7};

ResidualModel example1_model(double delta, std::uint64_t seed, int m = 100) {
  ResidualModel model;
  model.expansion = SpectralExpansion::from_coefficients(
      std::vector<double>{1.0, 0.0, 0.0, 0.0, 0.5});
  model.observations =
      make_observations(model.expansion, kTruth, m, 1.0, delta, seed);
  return model;
}

TrustRegionConfig fast_config() {
  TrustRegionConfig config;
  config.max_iterations = 40;
  return config;
}

double example2_f(double x) { return std::exp(-x * x) - std::exp(-1.0); }
}  // namespace

TEST_CASE("dyadic grid: default spans 1 .. 2^-12 with 13 entries") {
  const auto grid = dyadic_lambda_grid();
  REQUIRE(grid.size() == 13);
  CHECK(grid.front() == 1.0);
  CHECK(grid.back() == std::ldexp(1.0, -12));
  for (std::size_t i = 1; i < grid.size(); ++i) {
    CHECK(grid[i] == 0.5 * grid[i - 1]);
  }
}

TEST_CASE("sweep: noiseless discrepancy decreases as lambda decreases") {
  const auto model = example1_model(0.0, 1);
  const auto grid = dyadic_lambda_grid(0, -12);
  const auto result = run_sweep(model, grid, kStart, fast_config());
  REQUIRE(result.entries.size() == 13);
  for (std::size_t i = 1; i < result.entries.size(); ++i) {
    // within solver tolerance: allow a hair of slack on the comparison
    CHECK(result.entries[i].discrepancy <=
          result.entries[i - 1].discrepancy * (1.0 + 1e-6) + 1e-14);
    CHECK(result.entries[i].converged);
  }
  // the grid floor 2^-12 still carries its own bias; the separately checked
  // lambda = 1e-7 run is the near-zero reference (see trust-region tests)
  CHECK(result.entries.back().discrepancy < 1e-4);
  CHECK(result.entries.back().discrepancy <
        1e-3 * result.entries.front().discrepancy);
}

TEST_CASE("sweep: determinism and warm-start consistency") {
  const auto model = example1_model(0.0, 7);
  const auto grid = dyadic_lambda_grid(0, -6);
  const auto r1 = run_sweep(model, grid, kStart, fast_config());
  const auto r2 = run_sweep(model, grid, kStart, fast_config());
  REQUIRE(r1.entries.size() == r2.entries.size());
  for (std::size_t i = 0; i < r1.entries.size(); ++i) {
    CHECK(r1.entries[i].discrepancy == r2.entries[i].discrepancy);  // bitwise
    CHECK(r1.entries[i].minimizer.beta == r2.entries[i].minimizer.beta);
  }
  // cold re-run of a single lambda lands on the warm-started minimizer
  for (std::size_t pick : {std::size_t{2}, std::size_t{5}}) {
    ResidualModel cold = model;
    cold.lambda = r1.entries[pick].lambda;
    const auto report = estimate(cold, kStart, fast_config());
    CHECK(std::fabs(report.final_triple.beta - r1.entries[pick].minimizer.beta) <
          1e-4);
    CHECK(std::fabs(report.final_triple.alpha -
                    r1.entries[pick].minimizer.alpha) < 1e-4);
    CHECK(std::fabs(report.final_triple.gamma -
                    r1.entries[pick].minimizer.gamma) < 1e-4);
  }
}

TEST_CASE("sweep: validation") {
  const auto model = example1_model(0.0, 1);
  CHECK_THROWS_AS(run_sweep(model, std::vector<double>{}, kStart, fast_config()),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      run_sweep(model, std::vector<double>{0.5, 0.5}, kStart, fast_config()),
      std::invalid_argument);
}

TEST_CASE("morozov: qualifying, fallback and monotonicity") {
  SweepResult result;
  const double lambdas[] = {1.0, 0.5, 0.25, 0.125};
  const double discrepancies[] = {0.9, 0.5, 0.4, 0.45};
  for (int i = 0; i < 4; ++i) {
    result.entries.push_back(
        SweepEntry{lambdas[i], FractionalTriple{0.5, 0.5, 0.5},
                   discrepancies[i], true});
  }
  // epsilon above all entries -> largest lambda
  CHECK(morozov_select(result, 2.0) == 1.0);
  CHECK_FALSE(result.selection_flagged);
  // interior epsilon -> largest qualifying lambda
  CHECK(morozov_select(result, 0.47) == 0.25);
  CHECK_FALSE(result.selection_flagged);
  // epsilon below all entries -> flagged nearest match
  CHECK(morozov_select(result, 0.0) == 0.25);
  CHECK(result.selection_flagged);
  // nonincreasing selection over a decreasing epsilon sequence
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {2.0, 0.9, 0.6, 0.47, 0.41, 0.2, 0.0}) {
    const double sel = morozov_select(result, eps);
    CHECK(sel <= prev);
    prev = sel;
  }
}

TEST_CASE("truncation study: shape and reference level") {
  const std::vector<int> levels{5, 10, 20};
  TrustRegionConfig config = fast_config();
  const auto study = truncation_study(
      example2_f, kTruth, levels, 0.0, 1, 100, 1.0, 1e-7, 1e-8,
      ParameterBox::standard(), FractionalTriple{0.5, 1.0, 1.0}, config);
  REQUIRE(study.rows.size() == 3);
  CHECK(study.reference_level == 80);
  CHECK(study.reference.max_mode() == 80);
  for (const auto& row : study.rows) {
    CHECK(row.converged);
    CHECK(row.minimizer.alpha <= row.minimizer.gamma);
    // beta is identified well at every level
    CHECK(std::fabs(row.minimizer.beta - kTruth.beta) < 0.02);
  }
  // discrepancy is nonincreasing in the truncation level down to the lambda
  // floor; below the floor (bias-dominated regime) ordering is not promised
  const double lambda_floor = 1e-9;
  for (std::size_t i = 1; i < study.rows.size(); ++i) {
    CHECK(study.rows[i].discrepancy <=
          std::max(study.rows[i - 1].discrepancy * (1.0 + 1e-6), lambda_floor));
  }
  CHECK(study.rows.back().discrepancy <= 10.0 * 1e-7);
  CHECK_THROWS_AS(
      truncation_study(example2_f, kTruth, std::vector<int>{10, 5}, 0.0, 1, 50,
                       1.0, 1e-7, 1e-8, ParameterBox::standard(),
                       FractionalTriple{0.5, 1.0, 1.0}, config),
      std::invalid_argument);
}
