// File formats: CSV series with a one-line header (UTF-8, LF, full-precision
// numerals) and the estimate report (key = value header, config echo,
// per-iteration table).
#pragma once

#include <string>
#include <vector>

#include "fracdiff/config.hpp"
#include "fracdiff/sweep.hpp"

namespace fracdiff {

std::string format_full(double v);  // %.17g

// Sidecar echo of the resolved config next to an artifact ("<path>.config").
void write_config_echo(const std::string& artifact_path, const RunConfig& config);

// rows: t,w,phi
void write_observations_csv(const std::string& path, const ObservationSet& obs);
ObservationSet read_observations_csv(const std::string& path);

// rows: t,u_center or t,x,u
void write_forward_csv(const std::string& path,
                       const std::vector<std::array<double, 2>>& center_rows);
void write_forward_grid_csv(const std::string& path,
                            const std::vector<std::array<double, 3>>& rows);

// rows: iter,F,I,grad_norm,R,rho,beta,alpha,gamma
void write_trace_csv(const std::string& path, const EstimateReport& report);

// rows: lambda,beta,alpha,gamma,I,converged
void write_sweep_csv(const std::string& path, const SweepResult& result);

// rows: N,beta,alpha,gamma,I
void write_truncation_csv(const std::string& path, const TruncationStudy& study);

// Reconstruction series behind the figures: the model trace at successive
// iterates against the observations (t, phi, u_0, u_1, ...).
void write_reconstruction_csv(const std::string& path,
                              const std::vector<double>& times,
                              const std::vector<double>& phi,
                              const std::vector<std::vector<double>>& traces);

// Per-level reconstruction error at the true parameters (t, err_N1, ...).
void write_truncation_reconstruction_csv(const std::string& path,
                                         const std::vector<int>& levels,
                                         const std::vector<std::vector<double>>& rows);

// Estimate report: flat header, "[config]" echo section, "[trace]" table,
// and an optional "[starts]" table for multi-start runs.
struct StartSummary {
  int index = 0;
  FractionalTriple start;
  FractionalTriple result;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};
void write_report(const std::string& path, const EstimateReport& report,
                  const RunConfig& config,
                  const std::vector<StartSummary>& starts = {});

struct LoadedReport {
  FractionalTriple final_triple;
  double final_discrepancy = 0.0;
  double final_objective = 0.0;
  double lambda = 0.0;
  bool converged = false;
  std::string termination;
  int total_iterations = 0;
  int accepted_iterations = 0;
  RunConfig config;  // parsed back from the echo section
};
LoadedReport read_report(const std::string& path);

}  // namespace fracdiff
