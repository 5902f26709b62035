#pragma once

#include <string>
#include <vector>

#include "shiplab/ddpg.hpp"
#include "shiplab/guidance.hpp"
#include "shiplab/scenario.hpp"
#include "shiplab/wind.hpp"

namespace shiplab {

/// Everything a run needs, loaded from one JSON file. Unknown keys are
/// rejected at every level so a typo cannot silently fall back to a
/// default; defaults reproduce the stock hyperparameters and gains.
struct RunConfig {
  std::string ship_file;  ///< empty = built-in coefficients
  std::uint64_t master_seed = 42;
  std::string output_dir = "out";

  struct ControllerSection {
    std::string kind = "pd-ilos";  ///< "pd-ilos" or "ddpg"
    PdGains gains;
    double lookahead = 2.0;       ///< [L]
    double integral_gain = 0.05;
    std::string checkpoint;        ///< policy file for kind == "ddpg"

    bool operator==(const ControllerSection&) const = default;
  } controller;

  DdpgConfig training;
  bool normalize_r3 = false;  ///< distance reward relative to spawn distance
  long checkpoint_every = 100000;  ///< env steps between periodic saves

  /// Scenario names: "quadrants" (expands to four), "ellipse", "figure8".
  std::vector<std::string> scenarios = {"quadrants", "ellipse", "figure8"};

  WindField wind;
  bool wind_enabled = false;

  void validate() const;  ///< throws std::invalid_argument

  bool operator==(const RunConfig&) const = default;
};

/// Parses and validates a config document. Throws std::invalid_argument on
/// schema violations (wrong version, unknown key, wrong type, bad value).
RunConfig parse_run_config(const std::string& json_text);

/// Reads the file and delegates to parse_run_config. Throws
/// std::runtime_error when the file cannot be read.
RunConfig load_run_config(const std::string& path);

/// Canonical JSON rendering (sorted keys, full precision); parsing it
/// yields an equal RunConfig. Also the input to config_hash.
std::string dump_run_config(const RunConfig& cfg);

/// FNV-1a 64 over the canonical rendering, as a fixed-width hex string.
std::string config_hash(const RunConfig& cfg);

/// Expands scenario names to concrete scenarios with the config's wind
/// applied. Throws std::invalid_argument on an unknown name.
std::vector<Scenario> resolve_scenarios(const RunConfig& cfg);

/// Loads the ship described by the config (file, or built-in when the
/// path is empty).
ShipModel load_ship(const RunConfig& cfg);

}  // namespace shiplab
