#include "fracdiff/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fracdiff {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings
  if (!out) {
    throw std::runtime_error("cannot open output file '" + path + "'");
  }
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open input file '" + path + "'");
  }
  return in;
}

std::vector<double> parse_csv_row(const std::string& line) {
  std::vector<double> row;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    row.push_back(std::stod(cell));
  }
  return row;
}

}  // namespace

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_config_echo(const std::string& artifact_path,
                       const RunConfig& config) {
  auto out = open_out(artifact_path + ".config");
  out << render_config(config);
}

void write_observations_csv(const std::string& path, const ObservationSet& obs) {
  auto out = open_out(path);
  out << "t,w,phi\n";
  for (std::size_t i = 0; i < obs.size(); ++i) {
    out << format_full(obs.times[i]) << ',' << format_full(obs.weights[i])
        << ',' << format_full(obs.values[i]) << '\n';
  }
}

ObservationSet read_observations_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,w,phi", 0) != 0) {
    throw std::runtime_error("observations csv '" + path +
                             "': missing t,w,phi header");
  }
  ObservationSet obs;
  obs.noise_level = std::nan("");  // unknown for loaded data
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<double> row = parse_csv_row(line);
    if (row.size() != 3) {
      throw std::runtime_error("observations csv '" + path +
                               "': expected 3 columns");
    }
    obs.times.push_back(row[0]);
    obs.weights.push_back(row[1]);
    obs.values.push_back(row[2]);
  }
  obs.validate();
  return obs;
}

void write_forward_csv(const std::string& path,
                       const std::vector<std::array<double, 2>>& center_rows) {
  auto out = open_out(path);
  out << "t,u_center\n";
  for (const auto& r : center_rows) {
    out << format_full(r[0]) << ',' << format_full(r[1]) << '\n';
  }
}

void write_forward_grid_csv(const std::string& path,
                            const std::vector<std::array<double, 3>>& rows) {
  auto out = open_out(path);
  out << "t,x,u\n";
  for (const auto& r : rows) {
    out << format_full(r[0]) << ',' << format_full(r[1]) << ','
        << format_full(r[2]) << '\n';
  }
}

void write_trace_csv(const std::string& path, const EstimateReport& report) {
  auto out = open_out(path);
  out << "iter,F,I,grad_norm,R,rho,beta,alpha,gamma\n";
  for (const IterationRecord& rec : report.trace) {
    out << rec.iteration << ',' << format_full(rec.objective_value) << ','
        << format_full(rec.discrepancy_value) << ','
        << format_full(rec.projected_gradient_norm) << ','
        << format_full(rec.radius) << ',' << format_full(rec.rho) << ','
        << format_full(rec.iterate.beta) << ',' << format_full(rec.iterate.alpha)
        << ',' << format_full(rec.iterate.gamma) << '\n';
  }
}

void write_sweep_csv(const std::string& path, const SweepResult& result) {
  auto out = open_out(path);
  out << "lambda,beta,alpha,gamma,I,converged\n";
  for (const SweepEntry& e : result.entries) {
    out << format_full(e.lambda) << ',' << format_full(e.minimizer.beta) << ','
        << format_full(e.minimizer.alpha) << ','
        << format_full(e.minimizer.gamma) << ',' << format_full(e.discrepancy)
        << ',' << (e.converged ? 1 : 0) << '\n';
  }
}

void write_truncation_csv(const std::string& path,
                          const TruncationStudy& study) {
  auto out = open_out(path);
  out << "N,beta,alpha,gamma,I\n";
  for (const TruncationRow& r : study.rows) {
    out << r.level << ',' << format_full(r.minimizer.beta) << ','
        << format_full(r.minimizer.alpha) << ','
        << format_full(r.minimizer.gamma) << ',' << format_full(r.discrepancy)
        << '\n';
  }
}

void write_reconstruction_csv(const std::string& path,
                              const std::vector<double>& times,
                              const std::vector<double>& phi,
                              const std::vector<std::vector<double>>& traces) {
  auto out = open_out(path);
  out << "t,phi";
  for (std::size_t k = 0; k < traces.size(); ++k) out << ",u_" << k;
  out << '\n';
  for (std::size_t i = 0; i < times.size(); ++i) {
    out << format_full(times[i]) << ',' << format_full(phi[i]);
    for (const auto& trace : traces) out << ',' << format_full(trace[i]);
    out << '\n';
  }
}

void write_truncation_reconstruction_csv(
    const std::string& path, const std::vector<int>& levels,
    const std::vector<std::vector<double>>& rows) {
  auto out = open_out(path);
  out << "t";
  for (int level : levels) out << ",err_N" << level;
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_full(row[i]);
    }
    out << '\n';
  }
}

void write_report(const std::string& path, const EstimateReport& report,
                  const RunConfig& config,
                  const std::vector<StartSummary>& starts) {
  auto out = open_out(path);
  out << "# fracdiff estimate report\n";
  out << "beta = " << format_full(report.final_triple.beta) << '\n';
  out << "alpha = " << format_full(report.final_triple.alpha) << '\n';
  out << "gamma = " << format_full(report.final_triple.gamma) << '\n';
  out << "I_final = " << format_full(report.final_discrepancy) << '\n';
  out << "F_final = " << format_full(report.final_objective) << '\n';
  out << "lambda = " << format_full(report.lambda) << '\n';
  out << "converged = " << (report.converged ? 1 : 0) << '\n';
  out << "termination = " << report.termination << '\n';
  out << "iterations_total = " << report.total_iterations << '\n';
  out << "iterations_accepted = " << report.accepted_iterations << '\n';
  out << "wall_seconds = " << format_full(report.wall_seconds) << '\n';
  if (!starts.empty()) {
    out << "[starts]\n";
    out << "index,beta0,alpha0,gamma0,beta,alpha,gamma,F,iterations,converged\n";
    for (const StartSummary& s : starts) {
      out << s.index << ',' << format_full(s.start.beta) << ','
          << format_full(s.start.alpha) << ',' << format_full(s.start.gamma)
          << ',' << format_full(s.result.beta) << ','
          << format_full(s.result.alpha) << ',' << format_full(s.result.gamma)
          << ',' << format_full(s.objective) << ',' << s.iterations << ','
          << (s.converged ? 1 : 0) << '\n';
    }
  }
  out << "[config]\n";
  out << render_config(config);
  out << "[trace]\n";
  out << "iter,F,I,grad_norm,R,rho,beta,alpha,gamma\n";
  for (const IterationRecord& rec : report.trace) {
    out << rec.iteration << ',' << format_full(rec.objective_value) << ','
        << format_full(rec.discrepancy_value) << ','
        << format_full(rec.projected_gradient_norm) << ','
        << format_full(rec.radius) << ',' << format_full(rec.rho) << ','
        << format_full(rec.iterate.beta) << ','
        << format_full(rec.iterate.alpha) << ','
        << format_full(rec.iterate.gamma) << '\n';
  }
}

LoadedReport read_report(const std::string& path) {
  auto in = open_in(path);
  LoadedReport loaded;
  std::string line;
  std::ostringstream config_text;
  enum { Header, Config, Trace } section = Header;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "[config]") {
      section = Config;
      continue;
    }
    if (line == "[trace]") {
      section = Trace;
      continue;
    }
    if (section == Config) {
      config_text << line << '\n';
      continue;
    }
    if (section == Trace) continue;
    if (line.empty() || line[0] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, line.find(" ="));
    const std::string value = line.substr(eq + 1).substr(1);
    if (key == "beta") loaded.final_triple.beta = std::stod(value);
    if (key == "alpha") loaded.final_triple.alpha = std::stod(value);
    if (key == "gamma") loaded.final_triple.gamma = std::stod(value);
    if (key == "I_final") loaded.final_discrepancy = std::stod(value);
    if (key == "F_final") loaded.final_objective = std::stod(value);
    if (key == "lambda") loaded.lambda = std::stod(value);
    if (key == "converged") loaded.converged = value == "1";
    if (key == "termination") loaded.termination = value;
    if (key == "iterations_total") loaded.total_iterations = std::stoi(value);
    if (key == "iterations_accepted") {
      loaded.accepted_iterations = std::stoi(value);
    }
  }
  loaded.config = parse_config_text(config_text.str());
  return loaded;
}

}  // namespace fracdiff
