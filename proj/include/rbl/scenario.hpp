#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "rbl/harness.hpp"

namespace rbl {

/// Reads an experiment description from `key = value` lines. Unknown keys
/// are rejected; missing keys keep their defaults.
///
///   room_width = 10            room_height = 10
///   num_anchors = 8            num_landmarks = 8
///   anchor_layout = perimeter  # or explicit, with anchors = "x y; x y; ..."
///   conformation = "x y; ..."  # optional, otherwise polygon_radius
///   polygon_radius = 1         wall_margin = 0.5
///   seed = 1                   trials = 1000
///   sigma_grid = 0.1, 0.5, 1   zeta_theta_degrees = 5   # or rho = ...
///   noisy_tt = false           fixed_pose = false
///   methods = mds, smds_distance_only, smds_full
///   max_iterations = 100       rel_tolerance = 1e-9
///   workers = 1                output = results.csv
ExperimentConfig parse_scenario(std::istream& in);
ExperimentConfig load_scenario(const std::filesystem::path& path);

std::vector<double> parse_number_list(std::string_view text);
std::vector<SolverMethod> parse_method_list(std::string_view text);
Points2d parse_points(std::string_view text);

}  // namespace rbl
