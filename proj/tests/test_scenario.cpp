#include <sstream>

#include <doctest.h>

#include "rbl/errors.hpp"
#include "rbl/scenario.hpp"

using namespace rbl;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

}  // namespace

TEST_CASE("list parsing") {
  CHECK(parse_number_list("0.1, 0.5,1") == std::vector<double>{0.1, 0.5, 1.0});
  CHECK(parse_number_list("2 3") == std::vector<double>{2.0, 3.0});
  CHECK_THROWS_AS(parse_number_list("0.1, x"), ConfigError);
  CHECK_THROWS_AS(parse_number_list("1.5m"), ConfigError);
  CHECK_THROWS_AS(parse_number_list(" , "), ConfigError);

  const auto methods = parse_method_list("smds_full, mds");
  REQUIRE(methods.size() == 2);
  CHECK(methods[0] == SolverMethod::kSmdsFull);
  CHECK(methods[1] == SolverMethod::kMds);
  CHECK_THROWS_AS(parse_method_list("smds_full, bogus"), ConfigError);

  const Points2d p = parse_points("0 0; 1, 2 ;3 4");
  REQUIRE(p.cols() == 3);
  CHECK(p(0, 1) == 1.0);
  CHECK(p(1, 2) == 4.0);
  CHECK_THROWS_AS(parse_points("0 0; 1"), ConfigError);
}

TEST_CASE("parse_scenario") {
  SUBCASE("empty input keeps the defaults") {
    const ExperimentConfig cfg = parse("");
    CHECK(cfg.trials == 1000);
    CHECK(cfg.scene.num_anchors == 8);
    CHECK(cfg.sigma_grid == default_sigma_grid());
    CHECK(cfg.zeta == doctest::Approx(degrees_to_radians(5.0)));
  }
  SUBCASE("all keys") {
    const ExperimentConfig cfg = parse(
        "# comment\n"
        "room_width = 12\nroom_height = 8\n"
        "anchors = \"0 0; 12 0; 12 8; 0 8\"\n"
        "conformation = \"0 0; 1 0; 0 1\"\n"
        "wall_margin = 0.25\n"
        "seed = 99\ntrials = 20\n"
        "sigma_grid = 0.2, 0.4\n"
        "rho = 300\n"
        "noisy_tt = true\nfixed_pose = true\n"
        "methods = smds_full\n"
        "max_iterations = 50\nrel_tolerance = 1e-10\n"
        "workers = 2\noutput = out.csv\n");
    CHECK(cfg.scene.room_width == 12.0);
    CHECK(cfg.scene.room_height == 8.0);
    CHECK(cfg.scene.anchor_layout == AnchorLayout::kExplicit);
    CHECK(cfg.scene.num_anchors == 4);
    CHECK(cfg.scene.num_landmarks == 3);
    CHECK(cfg.scene.wall_margin == 0.25);
    CHECK(cfg.master_seed == 99);
    CHECK(cfg.trials == 20);
    CHECK(cfg.sigma_grid == std::vector<double>{0.2, 0.4});
    REQUIRE(cfg.rho.has_value());
    CHECK(*cfg.rho == 300.0);
    CHECK(cfg.noisy_tt);
    CHECK(cfg.fixed_pose);
    CHECK(cfg.methods == std::vector<SolverMethod>{SolverMethod::kSmdsFull});
    CHECK(cfg.solver.max_iterations == 50);
    CHECK(cfg.solver.rel_tolerance == 1e-10);
    CHECK(cfg.workers == 2);
    CHECK(cfg.output_path == "out.csv");
  }
  SUBCASE("zeta in degrees") { CHECK(parse("zeta_theta_degrees = 10").zeta == doctest::Approx(0.174532925)); }
  SUBCASE("single sigma") { CHECK(parse("sigma = 0.7").sigma_grid == std::vector<double>{0.7}); }
  SUBCASE("errors") {
    CHECK_THROWS_AS(parse("unknown_key = 1"), ConfigError);
    CHECK_THROWS_AS(parse("trials = many"), ConfigError);
    CHECK_THROWS_AS(parse("trials = 0"), ConfigError);
    CHECK_THROWS_AS(parse("room_width = -3"), ConfigError);
    CHECK_THROWS_AS(parse("sigma_grid = 0.5, -1"), ConfigError);
    CHECK_THROWS_AS(parse("sigma = 1\nsigma_grid = 2"), ConfigError);
    CHECK_THROWS_AS(parse("rho = 1\nzeta_theta_degrees = 2"), ConfigError);
    CHECK_THROWS_AS(parse("zeta_theta_degrees = 170"), ConfigError);
    CHECK_THROWS_AS(parse("anchor_layout = circle"), ConfigError);
    CHECK_THROWS_AS(parse("methods = newton"), ConfigError);
  }
}

TEST_CASE("load_scenario") {
  const ExperimentConfig cfg = load_scenario(RBL_SCENARIO_DIR "/default.cfg");
  CHECK(cfg.trials == 1000);
  CHECK(cfg.sigma_grid.size() == 8);
  CHECK(cfg.methods.size() == 3);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.cfg"), IoError);
}
