#include "rbl/scenario.hpp"

#include <fstream>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/program_options.hpp>

#include "rbl/errors.hpp"

namespace po = boost::program_options;

namespace rbl {

namespace {

std::vector<std::string> split_trimmed(std::string_view text, const char* delims) {
  std::vector<std::string> parts;
  const std::string s(text);
  boost::split(parts, s, boost::is_any_of(delims));
  for (auto& p : parts) boost::trim(p);
  std::erase_if(parts, [](const std::string& p) { return p.empty(); });
  return parts;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

std::string unquote(std::string s) {
  boost::trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

}  // namespace

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  for (const auto& p : split_trimmed(text, ", \t")) out.push_back(to_double(p));
  if (out.empty()) throw ConfigError("empty number list");
  return out;
}

std::vector<SolverMethod> parse_method_list(std::string_view text) {
  std::vector<SolverMethod> out;
  for (const auto& p : split_trimmed(text, ", \t")) out.push_back(parse_solver_method(p));
  if (out.empty()) throw ConfigError("empty method list");
  return out;
}

Points2d parse_points(std::string_view text) {
  const auto rows = split_trimmed(text, ";");
  Points2d pts(2, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto xy = split_trimmed(rows[i], ", \t");
    if (xy.size() != 2) throw ConfigError("point '" + rows[i] + "' must have two coordinates");
    pts.col(static_cast<Eigen::Index>(i)) << to_double(xy[0]), to_double(xy[1]);
  }
  return pts;
}

ExperimentConfig parse_scenario(std::istream& in) {
  po::options_description desc;
  // clang-format off
  desc.add_options()
      ("room_width", po::value<double>())
      ("room_height", po::value<double>())
      ("num_anchors", po::value<int>())
      ("num_landmarks", po::value<int>())
      ("anchor_layout", po::value<std::string>())
      ("anchors", po::value<std::string>())
      ("conformation", po::value<std::string>())
      ("polygon_radius", po::value<double>())
      ("wall_margin", po::value<double>())
      ("seed", po::value<std::uint64_t>())
      ("trials", po::value<int>())
      ("sigma_grid", po::value<std::string>())
      ("sigma", po::value<std::string>())
      ("zeta_theta_degrees", po::value<double>())
      ("rho", po::value<double>())
      ("noisy_tt", po::value<bool>())
      ("fixed_pose", po::value<bool>())
      ("methods", po::value<std::string>())
      ("max_iterations", po::value<int>())
      ("rel_tolerance", po::value<double>())
      ("workers", po::value<int>())
      ("output", po::value<std::string>());
  // clang-format on

  po::variables_map vm;
  try {
    po::store(po::parse_config_file(in, desc, false), vm);
    po::notify(vm);
  } catch (const po::error& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }

  ExperimentConfig cfg;
  auto& sc = cfg.scene;
  if (vm.count("room_width")) sc.room_width = vm["room_width"].as<double>();
  if (vm.count("room_height")) sc.room_height = vm["room_height"].as<double>();
  if (vm.count("num_anchors")) sc.num_anchors = vm["num_anchors"].as<int>();
  if (vm.count("num_landmarks")) sc.num_landmarks = vm["num_landmarks"].as<int>();
  if (vm.count("anchor_layout")) {
    const std::string mode = unquote(vm["anchor_layout"].as<std::string>());
    if (mode == "perimeter") {
      sc.anchor_layout = AnchorLayout::kPerimeter;
    } else if (mode == "explicit") {
      sc.anchor_layout = AnchorLayout::kExplicit;
    } else {
      throw ConfigError("anchor_layout must be 'perimeter' or 'explicit'");
    }
  }
  if (vm.count("anchors")) {
    sc.anchor_positions = parse_points(unquote(vm["anchors"].as<std::string>()));
    if (!vm.count("anchor_layout")) sc.anchor_layout = AnchorLayout::kExplicit;
    if (!vm.count("num_anchors")) sc.num_anchors = static_cast<int>(sc.anchor_positions->cols());
  }
  if (vm.count("conformation")) {
    sc.conformation_points = parse_points(unquote(vm["conformation"].as<std::string>()));
    if (!vm.count("num_landmarks")) sc.num_landmarks = static_cast<int>(sc.conformation_points->cols());
  }
  if (vm.count("polygon_radius")) sc.polygon_radius = vm["polygon_radius"].as<double>();
  if (vm.count("wall_margin")) sc.wall_margin = vm["wall_margin"].as<double>();

  if (vm.count("seed")) cfg.master_seed = vm["seed"].as<std::uint64_t>();
  if (vm.count("trials")) cfg.trials = vm["trials"].as<int>();
  if (vm.count("sigma_grid") && vm.count("sigma")) throw ConfigError("use either sigma_grid or sigma, not both");
  if (vm.count("sigma_grid")) cfg.sigma_grid = parse_number_list(unquote(vm["sigma_grid"].as<std::string>()));
  if (vm.count("sigma")) cfg.sigma_grid = parse_number_list(unquote(vm["sigma"].as<std::string>()));
  if (vm.count("zeta_theta_degrees") && vm.count("rho"))
    throw ConfigError("use either zeta_theta_degrees or rho, not both");
  if (vm.count("zeta_theta_degrees")) cfg.zeta = degrees_to_radians(vm["zeta_theta_degrees"].as<double>());
  if (vm.count("rho")) cfg.rho = vm["rho"].as<double>();
  if (vm.count("noisy_tt")) cfg.noisy_tt = vm["noisy_tt"].as<bool>();
  if (vm.count("fixed_pose")) cfg.fixed_pose = vm["fixed_pose"].as<bool>();
  if (vm.count("methods")) cfg.methods = parse_method_list(unquote(vm["methods"].as<std::string>()));
  if (vm.count("max_iterations")) cfg.solver.max_iterations = vm["max_iterations"].as<int>();
  if (vm.count("rel_tolerance")) cfg.solver.rel_tolerance = vm["rel_tolerance"].as<double>();
  if (vm.count("workers")) cfg.workers = vm["workers"].as<int>();
  if (vm.count("output")) cfg.output_path = unquote(vm["output"].as<std::string>());

  cfg.validate();
  return cfg;
}

ExperimentConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw IoError("cannot open scenario file '" + path.string() + "'");
  return parse_scenario(file);
}

}  // namespace rbl
