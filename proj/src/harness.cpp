#include "rbl/harness.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <locale>
#include <numbers>
#include <sstream>
#include <thread>

#include "rbl/crlb.hpp"
#include "rbl/errors.hpp"
#include "rbl/procrustes.hpp"

namespace rbl {

std::vector<double> default_sigma_grid() {
  constexpr int kPoints = 8;
  const double lo = std::log(0.1);
  const double hi = std::log(2.0);
  std::vector<double> grid;
  for (int i = 0; i < kPoints; ++i) grid.push_back(std::exp(lo + (hi - lo) * i / (kPoints - 1)));
  return grid;
}

double degrees_to_radians(double degrees) { return degrees * std::numbers::pi / 180.0; }

void ExperimentConfig::validate() const {
  scene.validate();
  solver.validate();
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (sigma_grid.empty()) throw ConfigError("sigma grid is empty");
  for (double s : sigma_grid)
    if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("sigma grid entries must be positive");
  if (methods.empty()) throw ConfigError("no solver methods selected");
  if (workers < 0) throw ConfigError("workers must be non-negative");
  if (rho) {
    if (!(*rho >= 0.0)) throw ConfigError("rho must be non-negative");
  } else if (!(zeta > 0.0) || zeta > 0.9 * std::numbers::pi) {
    throw ConfigError("zeta must lie in (0, 0.9 pi]");
  }
}

double ExperimentConfig::concentration() const { return rho ? *rho : zeta_to_rho(zeta); }

Rng trial_rng(std::uint64_t master_seed, std::size_t grid_point, std::size_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(grid_point), static_cast<std::uint32_t>(trial),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(trial) >> 32)};
  return Rng(seq);
}

TrialOutcome run_trial(const Scene& scene, const MeasurementSet& meas, const SolverConfig& solver) {
  TrialOutcome out;
  try {
    const LandmarkEstimate est = solve_landmarks(meas, scene.anchors(), scene.conformation(), solver);
    if (!est.converged || !est.coordinates.allFinite()) return out;
    const PoseEstimate pose = estimate_pose(est.coordinates, scene.conformation());
    out.err_t = (pose.translation - scene.pose().translation).squaredNorm();
    out.err_q = rotation_mse(pose.rotation, scene.pose().rotation);
    out.ok = std::isfinite(out.err_t) && std::isfinite(out.err_q);
  } catch (const Error&) {
    out.ok = false;
  }
  return out;
}

ResultRow aggregate_trials(std::string method, double sigma, const std::vector<TrialOutcome>& outcomes,
                           double crlb_t, double crlb_q) {
  ResultRow row;
  row.method = std::move(method);
  row.sigma = sigma;
  row.crlb_t = crlb_t;
  row.crlb_q = crlb_q;
  row.trials = static_cast<int>(outcomes.size());

  double sum_t = 0.0, sum_q = 0.0;
  int ok = 0;
  for (const auto& o : outcomes) {
    if (!o.ok) continue;
    sum_t += o.err_t;
    sum_q += o.err_q;
    ++ok;
  }
  row.failures = row.trials - ok;
  row.conv_rate = row.trials > 0 ? static_cast<double>(ok) / row.trials : 0.0;
  row.warning = 2 * row.failures > row.trials;
  if (ok == 0) {
    row.mse_t = row.rmse_t = row.mse_q = std::numeric_limits<double>::quiet_NaN();
    row.se_mse_t = row.se_mse_q = std::numeric_limits<double>::quiet_NaN();
    return row;
  }
  row.mse_t = sum_t / ok;
  row.mse_q = sum_q / ok;
  row.rmse_t = std::sqrt(row.mse_t);

  if (ok > 1) {
    double var_t = 0.0, var_q = 0.0;
    for (const auto& o : outcomes) {
      if (!o.ok) continue;
      var_t += (o.err_t - row.mse_t) * (o.err_t - row.mse_t);
      var_q += (o.err_q - row.mse_q) * (o.err_q - row.mse_q);
    }
    row.se_mse_t = std::sqrt(var_t / (ok - 1) / ok);
    row.se_mse_q = std::sqrt(var_q / (ok - 1) / ok);
  }
  return row;
}

namespace {

struct TrialJob {
  std::vector<TrialOutcome> per_method;
  double crlb_t = 0.0;
  double crlb_q = 0.0;
};

template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  std::size_t threads = workers > 0 ? static_cast<std::size_t>(workers) : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
}

}  // namespace

ExperimentResult run_experiment_detailed(const ExperimentConfig& config) {
  config.validate();
  const double rho = config.concentration();
  const Scene base = random_scene(config.scene, config.master_seed);

  const std::size_t grid = config.sigma_grid.size();
  const auto k_trials = static_cast<std::size_t>(config.trials);
  std::vector<TrialJob> jobs(grid * k_trials);

  // Trials never throw: solver failures are recorded in the outcome.
  parallel_for(jobs.size(), config.workers, [&](std::size_t job) {
    const std::size_t g = job / k_trials;
    const std::size_t k = job % k_trials;
    Rng rng = trial_rng(config.master_seed, g, k);
    const Scene scene = config.fixed_pose
                            ? base
                            : base.with_pose(sample_pose(config.scene, base.conformation(), base.anchors(), rng));
    NoiseConfig noise;
    noise.sigma = config.sigma_grid[g];
    noise.rho = rho;
    noise.noisy_tt = config.noisy_tt;
    const MeasurementSet meas = generate_measurements(scene, noise, rng);

    TrialJob& out = jobs[job];
    const FisherInformation fim = compute_fim(scene, noise);
    out.crlb_t = fim.crlb_t;
    out.crlb_q = fim.crlb_q;
    for (SolverMethod method : config.methods) {
      SolverConfig solver = config.solver;
      solver.method = method;
      out.per_method.push_back(run_trial(scene, meas, solver));
    }
  });

  ExperimentResult result;
  for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
    for (std::size_t g = 0; g < grid; ++g) {
      std::vector<TrialOutcome> outcomes;
      outcomes.reserve(k_trials);
      double crlb_t = 0.0, crlb_q = 0.0;
      for (std::size_t k = 0; k < k_trials; ++k) {
        const TrialJob& job = jobs[g * k_trials + k];
        outcomes.push_back(job.per_method[mi]);
        crlb_t += job.crlb_t;
        crlb_q += job.crlb_q;
      }
      ResultRow row = aggregate_trials(std::string(to_string(config.methods[mi])), config.sigma_grid[g], outcomes,
                                       crlb_t / static_cast<double>(k_trials), crlb_q / static_cast<double>(k_trials));
      if (row.warning) {
        std::cerr << "warning: " << row.method << " failed in " << row.failures << " of " << row.trials
                  << " trials at sigma=" << row.sigma << "\n";
      }
      result.rows.push_back(std::move(row));
      result.outcomes.push_back(std::move(outcomes));
    }
  }
  return result;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  return run_experiment_detailed(config).rows;
}

std::string format_results(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << std::setprecision(9);
  out << kResultsHeader << '\n';
  for (const auto& r : rows) {
    out << r.method << ',' << r.sigma << ',' << r.mse_t << ',' << r.rmse_t << ',' << r.mse_q << ',' << r.conv_rate
        << ',' << r.crlb_t << ',' << r.crlb_q << ',' << r.trials << '\n';
  }
  return out.str();
}

void write_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
  if (rows.empty()) throw InvalidInputError("refusing to write an empty result set");
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path.string() + "' for writing");
  file << format_results(rows);
  file.flush();
  if (!file) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<ResultRow> read_results(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(file, line) || line != kResultsHeader) throw IoError("unexpected results header");

  std::vector<ResultRow> rows;
  while (std::getline(file, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 9) throw IoError("malformed results row: " + line);
    ResultRow r;
    r.method = cells[0];
    r.sigma = std::stod(cells[1]);
    r.mse_t = std::stod(cells[2]);
    r.rmse_t = std::stod(cells[3]);
    r.mse_q = std::stod(cells[4]);
    r.conv_rate = std::stod(cells[5]);
    r.crlb_t = std::stod(cells[6]);
    r.crlb_q = std::stod(cells[7]);
    r.trials = std::stoi(cells[8]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace rbl
