// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "rbl/crlb.hpp"
#include "rbl/edges.hpp"
#include "rbl/harness.hpp"
#include "rbl/measurements.hpp"
#include "rbl/procrustes.hpp"
#include "rbl/solvers.hpp"

using namespace rbl;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Verdict noiseless_exactness() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Scene s = random_scene(SceneConfig{}, 1000 + seed);
    const MeasurementSet m = exact_measurements(s);
    for (SolverMethod method : all_solver_methods()) {
      SolverConfig cfg;
      cfg.method = method;
      const LandmarkEstimate est = solve_landmarks(m, s.anchors(), s.conformation(), cfg);
      const PoseEstimate pose = estimate_pose(est.coordinates, s.conformation());
      worst = std::max({worst, (est.coordinates - s.landmarks()).cwiseAbs().maxCoeff(),
                        (pose.translation - s.pose().translation).norm(),
                        (pose.rotation.matrix() - s.pose().rotation.matrix()).norm()});
    }
  }
  const double elapsed = seconds_since(start);
  return {worst < 1e-9 && elapsed < 10.0, fmt("max error %.3g over 100 scenes x 3 methods, %.2f s", worst, elapsed)};
}

Verdict turbo_fixed_point() {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Scene s = random_scene(SceneConfig{}, 2000 + seed);
    const EdgeSet e = edges_from_coordinates(
        s.node_coordinates(), build_pair_index(static_cast<int>(s.num_anchors()), static_cast<int>(s.num_landmarks())));
    SolverConfig cfg;
    cfg.max_iterations = 1;
    const TurboResult r = turbo_iterate(extract_minor(build_kernel(e)), e.aa(), e.tt(), e.at(), cfg);
    worst = std::max(worst, r.residual);
  }
  return {worst < 1e-12, fmt("max relative update at the true AT edges %.3g", worst)};
}

// Method ordering at fixed sigma, each gap judged against the combined standard error.
Verdict method_ordering(const ExperimentResult& r, double runtime) {
  bool pass = runtime < 300.0;
  std::ostringstream detail;
  const auto find = [&](const std::string& method, double sigma) -> const ResultRow& {
    for (const auto& row : r.rows)
      if (row.method == method && row.sigma == sigma) return row;
    throw std::runtime_error("missing row");
  };
  for (double sigma : {0.5, 1.0}) {
    const ResultRow& full = find("smds_full", sigma);
    const ResultRow& dist = find("smds_distance_only", sigma);
    const ResultRow& mds = find("mds", sigma);
    const auto gap_ok = [](const ResultRow& lo, const ResultRow& hi, double ResultRow::*mse, double ResultRow::*se) {
      return (hi.*mse - lo.*mse) > 2.0 * std::hypot(lo.*se, hi.*se);
    };
    const bool t_ok = gap_ok(full, dist, &ResultRow::mse_t, &ResultRow::se_mse_t) &&
                      gap_ok(dist, mds, &ResultRow::mse_t, &ResultRow::se_mse_t);
    const bool q_ok = gap_ok(full, dist, &ResultRow::mse_q, &ResultRow::se_mse_q) &&
                      gap_ok(dist, mds, &ResultRow::mse_q, &ResultRow::se_mse_q);
    pass = pass && t_ok && q_ok;
    detail << fmt("sigma=%.1f rmse_t %.4f/%.4f/%.4f mse_Q %.3g/%.3g/%.3g (full/dist/mds)%s; ", sigma, full.rmse_t,
                  dist.rmse_t, mds.rmse_t, full.mse_q, dist.mse_q, mds.mse_q, t_ok && q_ok ? "" : " GAP TOO SMALL");
  }
  detail << fmt("%.1f s", runtime);
  return {pass, detail.str()};
}

Verdict small_noise_smoke() {
  ExperimentConfig cfg;
  cfg.sigma_grid = {0.05};
  cfg.trials = 200;
  cfg.workers = 0;
  const auto rows = run_experiment(cfg);
  bool pass = rows.size() == 3;
  std::ostringstream detail;
  for (const auto& row : rows) {
    pass = pass && row.conv_rate == 1.0 && std::isfinite(row.mse_t) && std::isfinite(row.mse_q);
    detail << row.method << fmt(" conv %.3f rmse_t %.4f; ", row.conv_rate, row.rmse_t);
  }
  return {pass, detail.str()};
}

Verdict crlb_proximity(const ExperimentResult& r) {
  bool pass = true;
  std::ostringstream detail;
  for (const auto& row : r.rows) {
    if (row.method != "smds_full") continue;
    const double ratio = row.mse_t / row.crlb_t;
    const bool ok = ratio <= 2.0 && ratio >= 0.5;
    pass = pass && ok;
    detail << fmt("sigma=%.2f mse_t/crlb_t=%.3f%s; ", row.sigma, ratio, ok ? "" : " (out of range)");
  }
  return {pass, detail.str()};
}

Verdict fim_checks(const std::vector<const ExperimentResult*>& runs) {
  const double rho = zeta_to_rho(degrees_to_radians(5.0));
  const double lambda_psi = rho * bessel_ratio(rho);
  double worst_rel = 0.0, min_eig = std::numeric_limits<double>::infinity();
  Rng rng(77);
  std::uniform_int_distribution<int> count(3, 9);
  for (int trial = 0; trial < 100; ++trial) {
    SceneConfig sc;
    sc.num_anchors = count(rng);
    sc.num_landmarks = count(rng);
    const Scene s = random_scene(sc, rng);
    const double sigma = 0.25 + 0.01 * trial;
    NoiseConfig noise;
    noise.sigma = sigma;
    noise.rho = rho;
    const FisherInformation fim = compute_fim(s, noise);

    const Eigen::Vector2d t = s.pose().translation;
    const double alpha = std::atan2(s.pose().rotation.matrix()(1, 0), s.pose().rotation.matrix()(0, 0));
    const double h = 1e-6;
    Eigen::Matrix3d oracle = Eigen::Matrix3d::Zero();
    for (Eigen::Index m = 0; m < s.num_anchors(); ++m) {
      const Eigen::Vector2d a = s.anchors().positions().col(m);
      for (Eigen::Index n = 0; n < s.num_landmarks(); ++n) {
        const Eigen::Vector2d c = s.conformation().points().col(n);
        const auto offset = [&](Eigen::Vector3d d) {
          return Eigen::Vector2d(rotation_from_angle(alpha + d(2)).matrix() * c + t + d.head<2>() - a);
        };
        Eigen::Vector3d gd, gp;
        for (int k = 0; k < 3; ++k) {
          const Eigen::Vector2d up = offset(h * Eigen::Vector3d::Unit(k));
          const Eigen::Vector2d dn = offset(-h * Eigen::Vector3d::Unit(k));
          gd(k) = (up.norm() - dn.norm()) / (2 * h);
          gp(k) = wrap_angle(std::atan2(up.y(), up.x()) - std::atan2(dn.y(), dn.x())) / (2 * h);
        }
        oracle += gd * gd.transpose() / (sigma * sigma) + lambda_psi * gp * gp.transpose();
      }
    }
    worst_rel = std::max(worst_rel, (fim.matrix - oracle).norm() / oracle.norm());
    min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(fim.matrix).eigenvalues().minCoeff());
  }

  double worst_ratio = 0.0;
  for (const ExperimentResult* r : runs)
    for (const auto& row : r->rows) {
      worst_ratio = std::max(worst_ratio, row.crlb_t / (1.1 * row.mse_t));
      worst_ratio = std::max(worst_ratio, row.crlb_q / (1.1 * row.mse_q));
    }
  const bool pass = worst_rel < 1e-6 && min_eig >= -1e-10 && worst_ratio <= 1.0;
  return {pass, fmt("max relative FIM error %.3g, min eigenvalue %.3g, max crlb/(1.1 mse) %.3f", worst_rel, min_eig,
                    worst_ratio)};
}

Verdict noise_statistics() {
  constexpr int kSamples = 1'000'000;
  Rng rng(2024);
  double worst_gamma = 0.0;
  for (auto [d, sigma] : {std::pair{5.0, 0.5}, {3.0, 1.0}, {8.0, 2.0}}) {
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < kSamples; ++i) {
      const double x = sample_distance(d, sigma, rng);
      sum += x;
      sum_sq += x * x;
    }
    const double mean = sum / kSamples;
    const double sd = std::sqrt(sum_sq / kSamples - mean * mean);
    worst_gamma = std::max({worst_gamma, std::abs(mean / d - 1.0), std::abs(sd / sigma - 1.0)});
  }

  double worst_mass = 0.0;
  for (double zeta_deg : {2.0, 5.0, 20.0, 60.0}) {
    const double zeta = degrees_to_radians(zeta_deg);
    const double rho = zeta_to_rho(zeta);
    int inside = 0;
    for (int i = 0; i < kSamples; ++i) inside += std::abs(wrap_angle(sample_angle(0.3, rho, rng) - 0.3)) <= zeta;
    worst_mass = std::max(worst_mass, std::abs(static_cast<double>(inside) / kSamples - kAngularPercentile));
  }

  double worst_trip = 0.0;
  for (double zeta : {0.01, 0.05, 0.1, 0.5, 1.0, 2.0}) worst_trip = std::max(worst_trip, std::abs(rho_to_zeta(zeta_to_rho(zeta)) - zeta));

  const bool pass = worst_gamma < 0.01 && worst_mass <= 0.005 && worst_trip < 1e-8;
  return {pass, fmt("gamma rel. error %.2e, percentile mass error %.2e, round trip error %.2e", worst_gamma,
                    worst_mass, worst_trip)};
}

Verdict procrustes_optimality() {
  Rng rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> a(-kPi, kPi);
  std::normal_distribution<double> n(0.0, 0.3);
  double worst_gap = -std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 100; ++trial) {
    Points2d body(2, 8);
    for (Eigen::Index i = 0; i < 8; ++i) body.col(i) << u(rng), u(rng);
    const Conformation c(body);
    const Pose pose{rotation_from_angle(a(rng)), {5 * u(rng), 5 * u(rng)}};
    Points2d s = apply_pose(c, pose);
    for (Eigen::Index i = 0; i < 8; ++i) s.col(i) += Eigen::Vector2d(n(rng), n(rng));

    const WeightSpec w = WeightSpec::uniform(8);
    const auto [s_bar, c_bar] = weighted_means(s, c.points(), w);
    double grid_best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3600; ++k) {
      const Eigen::Matrix2d q = rotation_from_angle(k * kPi / 1800.0).matrix();
      grid_best = std::min(grid_best, pose_objective(s, c.points(), w, q, s_bar - q * c_bar));
    }
    worst_gap = std::max(worst_gap, estimate_pose(s, c).objective - grid_best);
  }
  return {worst_gap <= 1e-8, fmt("max objective excess over the 0.1 deg grid %.3g", worst_gap)};
}

Verdict worker_invariance() {
  ExperimentConfig cfg;
  cfg.trials = 100;
  cfg.master_seed = 5;
  std::vector<std::string> csv;
  for (int workers : {1, 2, 4, 7}) {
    cfg.workers = workers;
    csv.push_back(format_results(run_experiment(cfg)));
  }
  bool same = true;
  for (const auto& c : csv) same = same && c == csv.front();
  return {same, fmt("%zu-byte CSV compared across 1, 2, 4 and 7 workers", csv.front().size())};
}

}  // namespace

int main() {
  int failures = 0;
  const auto report = [&](int id, const char* name, const std::function<Verdict()>& check) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %d (%s): %s\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.c_str());
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
  };

  ExperimentConfig ordering;
  ordering.sigma_grid = {0.5, 1.0};
  ordering.trials = 1000;
  ordering.workers = 0;
  auto start = Clock::now();
  const ExperimentResult ordering_run = run_experiment_detailed(ordering);
  const double ordering_time = seconds_since(start);

  ExperimentConfig proximity;
  proximity.sigma_grid = {0.25, 0.5, 0.75, 1.0};
  proximity.trials = 1000;
  proximity.methods = {SolverMethod::kSmdsFull};
  proximity.master_seed = 2;
  proximity.workers = 0;
  const ExperimentResult proximity_run = run_experiment_detailed(proximity);

  report(1, "noiseless exactness", noiseless_exactness);
  report(2, "turbo fixed point", turbo_fixed_point);
  report(3, "method ordering", [&] { return method_ordering(ordering_run, ordering_time); });
  report(4, "small-noise smoke run", small_noise_smoke);
  report(5, "CRLB proximity", [&] { return crlb_proximity(proximity_run); });
  report(6, "FIM correctness", [&] { return fim_checks({&ordering_run, &proximity_run}); });
  report(7, "noise statistics", noise_statistics);
  report(8, "Procrustes optimality", procrustes_optimality);
  report(9, "worker-count invariance", worker_invariance);

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
