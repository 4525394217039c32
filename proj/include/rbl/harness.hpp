#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rbl/geometry.hpp"
#include "rbl/measurements.hpp"
#include "rbl/solvers.hpp"

namespace rbl {

/// 8 log-spaced points from 0.1 m to 2.0 m.
std::vector<double> default_sigma_grid();
double degrees_to_radians(double degrees);

struct ExperimentConfig {
  SceneConfig scene;
  std::vector<double> sigma_grid = default_sigma_grid();
  /// Angular error bound; ignored when `rho` is set.
  double zeta = degrees_to_radians(5.0);
  std::optional<double> rho;
  int trials = 1000;
  std::vector<SolverMethod> methods = all_solver_methods();
  std::uint64_t master_seed = 1;
  /// Keep the base scene's pose for every trial instead of resampling it.
  bool fixed_pose = false;
  bool noisy_tt = false;
  SolverConfig solver;
  /// Worker threads; 0 picks the hardware concurrency.
  int workers = 1;
  std::string output_path = "results.csv";

  void validate() const;
  double concentration() const;
};

struct ResultRow {
  std::string method;
  double sigma = 0.0;
  double mse_t = 0.0;
  double rmse_t = 0.0;
  double mse_q = 0.0;
  double conv_rate = 0.0;
  double crlb_t = 0.0;
  double crlb_q = 0.0;
  int trials = 0;

  // Not written to CSV.
  double se_mse_t = 0.0;
  double se_mse_q = 0.0;
  int failures = 0;
  bool warning = false;
};

struct TrialOutcome {
  /// Solver returned a converged estimate.
  bool ok = false;
  double err_t = 0.0;
  double err_q = 0.0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  /// Per-row trial outcomes, parallel to `rows`.
  std::vector<std::vector<TrialOutcome>> outcomes;
};

/// Squared errors of one solver run on one measurement realisation.
TrialOutcome run_trial(const Scene& scene, const MeasurementSet& meas, const SolverConfig& solver);

/// Averages the successful trials. `crlb_t` and `crlb_q` are copied through.
ResultRow aggregate_trials(std::string method, double sigma, const std::vector<TrialOutcome>& outcomes,
                           double crlb_t, double crlb_q);

/// Seed of trial `trial` at grid point `grid_point`.
Rng trial_rng(std::uint64_t master_seed, std::size_t grid_point, std::size_t trial);

ExperimentResult run_experiment_detailed(const ExperimentConfig& config);
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

inline constexpr const char* kResultsHeader = "method,sigma,mse_t,rmse_t,mse_Q,conv_rate,crlb_t,crlb_Q,trials";

std::string format_results(const std::vector<ResultRow>& rows);
void write_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path);
std::vector<ResultRow> read_results(const std::filesystem::path& path);

}  // namespace rbl
