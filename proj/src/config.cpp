#include "shiplab/config.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace shiplab {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const char* where) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key()))
      throw std::invalid_argument(std::string("config: unknown key \"") +
                                  item.key() + "\" in " + where);
  }
}

template <typename T>
void read_if(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("config: bad type for \"") + key +
                                "\"");
  }
}

}  // namespace

void RunConfig::validate() const {
  training.validate();
  if (controller.kind != "pd-ilos" && controller.kind != "ddpg")
    throw std::invalid_argument("config: controller.kind must be \"pd-ilos\" "
                                "or \"ddpg\"");
  if (controller.lookahead <= 0.0)
    throw std::invalid_argument("config: controller.lookahead must be > 0");
  if (controller.integral_gain < 0.0)
    throw std::invalid_argument("config: controller.integral_gain must be "
                                ">= 0");
  if (checkpoint_every <= 0)
    throw std::invalid_argument("config: checkpoint_every must be > 0");
  if (output_dir.empty())
    throw std::invalid_argument("config: output_dir must not be empty");
  if (wind.speed < 0.0)
    throw std::invalid_argument("config: wind.speed must be >= 0");
  for (const std::string& name : scenarios)
    if (name != "quadrants" && name != "ellipse" && name != "figure8")
      throw std::invalid_argument("config: unknown scenario \"" + name +
                                  "\"");
}

RunConfig parse_run_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: not valid JSON: ") +
                                e.what());
  }
  if (!doc.is_object())
    throw std::invalid_argument("config: top level must be an object");
  reject_unknown(doc,
                 {"schema_version", "ship_file", "master_seed", "output_dir",
                  "controller", "training", "checkpoint_every", "scenarios",
                  "wind"},
                 "top level");
  if (!doc.contains("schema_version") ||
      !doc.at("schema_version").is_number_integer() ||
      doc.at("schema_version").get<int>() != 1)
    throw std::invalid_argument("config: schema_version must be 1");

  RunConfig cfg;
  read_if(doc, "ship_file", cfg.ship_file);
  read_if(doc, "master_seed", cfg.master_seed);
  read_if(doc, "output_dir", cfg.output_dir);

  if (doc.contains("controller")) {
    const json& c = doc.at("controller");
    if (!c.is_object())
      throw std::invalid_argument("config: controller must be an object");
    reject_unknown(c,
                   {"kind", "kp", "kd", "lookahead", "integral_gain",
                    "checkpoint"},
                   "controller");
    read_if(c, "kind", cfg.controller.kind);
    read_if(c, "kp", cfg.controller.gains.kp);
    read_if(c, "kd", cfg.controller.gains.kd);
    read_if(c, "lookahead", cfg.controller.lookahead);
    read_if(c, "integral_gain", cfg.controller.integral_gain);
    read_if(c, "checkpoint", cfg.controller.checkpoint);
  }

  if (doc.contains("training")) {
    const json& t = doc.at("training");
    if (!t.is_object())
      throw std::invalid_argument("config: training must be an object");
    reject_unknown(t,
                   {"lr", "gamma", "batch", "tau", "noise_sigma", "noise_mu",
                    "update_every", "total_steps", "warmup_steps",
                    "actor_lr", "action_l2", "buffer_capacity",
                    "hidden", "normalize_r3"},
                   "training");
    read_if(t, "lr", cfg.training.lr);
    read_if(t, "gamma", cfg.training.gamma);
    read_if(t, "batch", cfg.training.batch);
    read_if(t, "tau", cfg.training.tau);
    read_if(t, "noise_sigma", cfg.training.noise_sigma);
    read_if(t, "noise_mu", cfg.training.noise_mu);
    read_if(t, "update_every", cfg.training.update_every);
    read_if(t, "total_steps", cfg.training.total_steps);
    read_if(t, "warmup_steps", cfg.training.warmup_steps);
    read_if(t, "actor_lr", cfg.training.actor_lr);
    read_if(t, "action_l2", cfg.training.action_l2);
    read_if(t, "buffer_capacity", cfg.training.buffer_capacity);
    read_if(t, "hidden", cfg.training.hidden);
    read_if(t, "normalize_r3", cfg.normalize_r3);
  }

  read_if(doc, "checkpoint_every", cfg.checkpoint_every);
  read_if(doc, "scenarios", cfg.scenarios);

  if (doc.contains("wind")) {
    const json& w = doc.at("wind");
    if (!w.is_object())
      throw std::invalid_argument("config: wind must be an object");
    reject_unknown(w, {"enabled", "speed", "direction"}, "wind");
    read_if(w, "enabled", cfg.wind_enabled);
    read_if(w, "speed", cfg.wind.speed);
    read_if(w, "direction", cfg.wind.direction);
  }

  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("config: cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

std::string dump_run_config(const RunConfig& cfg) {
  json doc;
  doc["schema_version"] = 1;
  doc["ship_file"] = cfg.ship_file;
  doc["master_seed"] = cfg.master_seed;
  doc["output_dir"] = cfg.output_dir;
  doc["controller"] = {{"kind", cfg.controller.kind},
                       {"kp", cfg.controller.gains.kp},
                       {"kd", cfg.controller.gains.kd},
                       {"lookahead", cfg.controller.lookahead},
                       {"integral_gain", cfg.controller.integral_gain},
                       {"checkpoint", cfg.controller.checkpoint}};
  doc["training"] = {{"lr", cfg.training.lr},
                     {"gamma", cfg.training.gamma},
                     {"batch", cfg.training.batch},
                     {"tau", cfg.training.tau},
                     {"noise_sigma", cfg.training.noise_sigma},
                     {"noise_mu", cfg.training.noise_mu},
                     {"update_every", cfg.training.update_every},
                     {"total_steps", cfg.training.total_steps},
                     {"warmup_steps", cfg.training.warmup_steps},
                     {"actor_lr", cfg.training.actor_lr},
                     {"action_l2", cfg.training.action_l2},
                     {"buffer_capacity", cfg.training.buffer_capacity},
                     {"hidden", cfg.training.hidden},
                     {"normalize_r3", cfg.normalize_r3}};
  doc["checkpoint_every"] = cfg.checkpoint_every;
  doc["scenarios"] = cfg.scenarios;
  doc["wind"] = {{"enabled", cfg.wind_enabled},
                 {"speed", cfg.wind.speed},
                 {"direction", cfg.wind.direction}};
  return doc.dump(2) + "\n";
}

std::string config_hash(const RunConfig& cfg) {
  const std::string text = dump_run_config(cfg);
  const std::uint64_t h = RngStream::fnv1a64(text);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::vector<Scenario> resolve_scenarios(const RunConfig& cfg) {
  std::vector<Scenario> out;
  for (const std::string& name : cfg.scenarios) {
    if (name == "quadrants") {
      for (Scenario& s : build_quadrant_scenarios())
        out.push_back(std::move(s));
    } else if (name == "ellipse") {
      out.push_back(build_ellipse_scenario());
    } else if (name == "figure8") {
      out.push_back(build_figure8_scenario());
    } else {
      throw std::invalid_argument("config: unknown scenario \"" + name +
                                  "\"");
    }
  }
  for (Scenario& s : out) {
    s.wind = cfg.wind;
    s.wind_enabled = cfg.wind_enabled;
  }
  return out;
}

ShipModel load_ship(const RunConfig& cfg) {
  if (cfg.ship_file.empty()) return ShipModel::kcs();
  return load_ship_model(cfg.ship_file);
}

}  // namespace shiplab
