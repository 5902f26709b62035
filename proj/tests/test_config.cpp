#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "shiplab/config.hpp"

using namespace shiplab;

TEST_CASE("defaults reproduce the stock hyperparameters and gains") {
  const RunConfig cfg = parse_run_config("{\"schema_version\": 1}");
  CHECK(cfg.training.lr == 0.0008);
  CHECK(cfg.training.gamma == 0.97);
  CHECK(cfg.training.batch == 32);
  CHECK(cfg.training.tau == 0.02);
  CHECK(cfg.training.noise_sigma == doctest::Approx(0.0698));
  CHECK(cfg.training.total_steps == 1280000);
  CHECK(cfg.training.warmup_steps == 10000);
  CHECK(cfg.training.actor_lr == 0.0);
  CHECK(cfg.training.action_l2 == 0.0);
  CHECK(cfg.training.buffer_capacity == 100000);
  CHECK(cfg.training.hidden == std::vector<int>{64, 64});
  CHECK(cfg.controller.gains.kp == 2.5);
  CHECK(cfg.controller.gains.kd == 4.0);
  CHECK(cfg.controller.lookahead == 2.0);
  CHECK(cfg.controller.integral_gain == 0.05);
  CHECK(cfg.controller.kind == "pd-ilos");
  CHECK_FALSE(cfg.normalize_r3);
  CHECK_FALSE(cfg.wind_enabled);
  CHECK(cfg.master_seed == 42);
}

TEST_CASE("schema violations are rejected") {
  CHECK_THROWS_AS(parse_run_config("not json"), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config("[1,2]"), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config("{}"), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config("{\"schema_version\": 2}"),
                  std::invalid_argument);

  SUBCASE("unknown keys at every level") {
    CHECK_THROWS_AS(
        parse_run_config("{\"schema_version\": 1, \"shpi_file\": \"x\"}"),
        std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config("{\"schema_version\": 1, \"controller\":"
                                     " {\"KP\": 1.0}}"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config("{\"schema_version\": 1, \"training\":"
                                     " {\"learning_rate\": 0.1}}"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config("{\"schema_version\": 1, \"wind\":"
                                     " {\"dir\": 0.3}}"),
                    std::invalid_argument);
  }

  SUBCASE("type errors") {
    CHECK_THROWS_AS(parse_run_config("{\"schema_version\": 1, \"training\":"
                                     " {\"lr\": \"fast\"}}"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config("{\"schema_version\": 1, \"controller\":"
                                     " \"pd\"}"),
                    std::invalid_argument);
  }

  SUBCASE("value errors reach the domain validators") {
    CHECK_THROWS_AS(parse_run_config("{\"schema_version\": 1, \"training\":"
                                     " {\"gamma\": 1.5}}"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config("{\"schema_version\": 1, \"controller\":"
                                     " {\"kind\": \"fuzzy\"}}"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config("{\"schema_version\": 1, \"scenarios\":"
                                     " [\"moebius\"]}"),
                    std::invalid_argument);
  }
}

TEST_CASE("dump and parse round-trip, and the hash tracks content") {
  RunConfig cfg;
  cfg.master_seed = 7;
  cfg.training.total_steps = 1234;
  cfg.normalize_r3 = true;
  cfg.scenarios = {"ellipse"};
  cfg.wind_enabled = true;
  cfg.wind.speed = 0.3;
  cfg.wind.direction = 0.7853981633974483;
  cfg.controller.kind = "ddpg";
  cfg.controller.checkpoint = "p.ckpt";

  const RunConfig back = parse_run_config(dump_run_config(cfg));
  CHECK(back == cfg);
  CHECK(config_hash(back) == config_hash(cfg));

  RunConfig other = cfg;
  other.master_seed = 8;
  CHECK(config_hash(other) != config_hash(cfg));
}

TEST_CASE("scenario names resolve with the config's wind applied") {
  RunConfig cfg;
  cfg.scenarios = {"quadrants", "ellipse", "figure8"};
  cfg.wind_enabled = true;
  cfg.wind.speed = 0.25;
  const std::vector<Scenario> all = resolve_scenarios(cfg);
  REQUIRE(all.size() == 6);
  CHECK(all[0].name == "quadrant-ne");
  CHECK(all[4].name == "ellipse");
  CHECK(all[5].name == "figure8");
  for (const Scenario& s : all) {
    CHECK(s.wind_enabled);
    CHECK(s.wind.speed == 0.25);
  }
}

TEST_CASE("load_run_config reads files and reports missing ones") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "shiplab_config_test";
  fs::create_directories(dir);
  const fs::path file = dir / "run.json";
  {
    std::ofstream out(file);
    out << "{\"schema_version\": 1, \"master_seed\": 99}";
  }
  CHECK(load_run_config(file.string()).master_seed == 99);
  CHECK_THROWS_AS(load_run_config((dir / "absent.json").string()),
                  std::runtime_error);
  fs::remove_all(dir);
}
