#include "fracdiff/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <future>
#include <random>
#include <thread>

namespace fracdiff {

int worker_threads() {
  if (const char* env = std::getenv("FRACDIFF_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

std::vector<EstimateReport> run_multi_start(const ResidualModel& model,
                                            const TrustRegionConfig& config,
                                            int start_count,
                                            std::uint64_t seed) {
  if (start_count < 1) {
    throw std::invalid_argument("multi-start: start_count must be >= 1");
  }
  std::mt19937_64 gen(seed);
  const auto u01 = [&gen]() {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
  };
  std::vector<FractionalTriple> starts;
  starts.reserve(static_cast<std::size_t>(start_count));
  const ParameterBox& box = model.box;
  for (int i = 0; i < start_count; ++i) {
    FractionalTriple a;
    a.beta = box.beta_lo + (box.beta_hi - box.beta_lo) * u01();
    a.alpha = box.alpha_lo + (box.alpha_hi - box.alpha_lo) * u01();
    a.gamma = box.gamma_lo + (box.gamma_hi - box.gamma_lo) * u01();
    starts.push_back(a);
  }

  std::vector<EstimateReport> reports(starts.size());
  const int workers = std::min<int>(worker_threads(), start_count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < starts.size(); ++i) {
      reports[i] = estimate(model, starts[i], config);
    }
    return reports;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= starts.size()) return;
        reports[i] = estimate(model, starts[i], config);
      }
    });
  }
  for (std::thread& t : pool) t.join();
  return reports;
}

Example1Result run_example1(double delta, std::uint64_t seed) {
  Example1Result out;
  out.config = RunConfig{};  // defaults wire Example 1 exactly
  out.config.delta = delta;
  out.config.seed = seed;
  out.config.validate();

  const SpectralExpansion expansion = build_expansion(out.config);
  out.observations = build_observations(out.config, expansion);
  ResidualModel model = build_model(out.config, expansion, out.observations);

  out.report = estimate(model, out.config.a0, out.config.solver);

  // Reconstruction data: model trace at every accepted iterate (plus the
  // final one) against the observations.
  out.reconstruction_times = out.observations.times;
  out.reconstruction_phi = out.observations.values;
  for (const IterationRecord& rec : out.report.trace) {
    if (!rec.accepted && rec.iteration != out.report.total_iterations) continue;
    out.reconstruction_per_iterate.push_back(
        trace_at_center(expansion, rec.iterate, out.observations.times));
  }

  if (delta > 0.0) {
    out.epsilon = discrepancy(model, out.config.a_star);
    SweepResult sweep =
        run_sweep(model, dyadic_lambda_grid(), out.config.a0, out.config.solver);
    morozov_select(sweep, out.epsilon);
    out.sweep = std::move(sweep);
  }
  return out;
}

Example2Result run_example2(std::span<const int> levels, double delta,
                            std::uint64_t seed) {
  Example2Result out;
  out.config = RunConfig{};
  out.config.initial_condition = "example2";
  out.config.delta = delta;
  out.config.seed = seed;
  out.config.levels.assign(levels.begin(), levels.end());
  out.config.a0 = FractionalTriple{0.5, 1.0, 1.0};  // box center
  out.config.validate();

  const auto f = [&](double x) { return initial_condition_value(out.config, x); };
  out.study = truncation_study(
      f, out.config.a_star, levels, delta, seed, out.config.observation_count,
      out.config.horizon, out.config.lambda, out.config.quad_tol,
      out.config.box, out.config.a0, out.config.solver);

  // Reconstruction error at the true parameters for each truncation level:
  // |u_N(a*)(t_i, 0) - phi(t_i)| over the observation grid.
  const ObservationSet& obs = out.study.observations;
  std::vector<std::vector<double>> errors;
  for (int level : levels) {
    const SpectralExpansion truncated = out.study.reference.truncated(level);
    const std::vector<double> trace =
        trace_at_center(truncated, out.config.a_star, obs.times);
    std::vector<double> err(obs.size());
    double max_err = -1.0;
    double argmax = obs.times.front();
    for (std::size_t i = 0; i < obs.size(); ++i) {
      err[i] = std::fabs(trace[i] - obs.values[i]);
      if (err[i] > max_err) {
        max_err = err[i];
        argmax = obs.times[i];
      }
    }
    out.reconstruction_max_error.push_back(max_err);
    out.reconstruction_argmax_t.push_back(argmax);
    errors.push_back(std::move(err));
  }
  out.reconstruction_rows.resize(obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    out.reconstruction_rows[i].push_back(obs.times[i]);
    for (const auto& err : errors) {
      out.reconstruction_rows[i].push_back(err[i]);
    }
  }
  return out;
}

}  // namespace fracdiff
