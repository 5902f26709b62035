#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "shiplab/checkpoint.hpp"
#include "shiplab/config.hpp"
#include "shiplab/hydrodynamics.hpp"
#include "shiplab/plot.hpp"
#include "shiplab/trajectory_io.hpp"

namespace fs = std::filesystem;
using namespace shiplab;

namespace {

// 0 ok; CLI11 usage errors exit 2 via the option below; 3 invalid config;
// 4 checkpoint problem; 5 file I/O; 1 anything else.
constexpr int kExitConfig = 3;
constexpr int kExitCheckpoint = 4;
constexpr int kExitIo = 5;

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.output_dir) / name).string();
}

void ensure_output_dir(const RunConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory " +
                             cfg.output_dir + ": " + ec.message());
}

EpisodeConfig episode_config(const RunConfig& cfg) {
  EpisodeConfig ecfg;
  ecfg.normalize_r3 = cfg.normalize_r3;
  return ecfg;
}

std::unique_ptr<Controller> make_controller(const RunConfig& cfg,
                                            const std::string& checkpoint) {
  if (cfg.controller.kind == "pd-ilos") {
    EpisodeConfig ecfg;
    return std::make_unique<PdIlosController>(
        cfg.controller.gains, cfg.controller.lookahead,
        cfg.controller.integral_gain, ecfg.control_interval);
  }
  const std::string path =
      checkpoint.empty() ? cfg.controller.checkpoint : checkpoint;
  if (path.empty())
    throw CheckpointError("controller.kind is \"ddpg\" but no checkpoint "
                          "was given");
  return std::make_unique<DdpgController>(load_checkpoint(path));
}

void write_scenario_outputs(const RunConfig& cfg, const Scenario& scenario,
                            const std::vector<PlotTrack>& tracks,
                            const std::string& stem) {
  write_svg(trajectory_svg(scenario.path, tracks, scenario.name),
            out_path(cfg, stem + ".svg"));
}

int cmd_train(const RunConfig& cfg, const std::string& resume) {
  ensure_output_dir(cfg);
  DdpgAgent agent = resume.empty()
                        ? DdpgAgent::make(cfg.training, cfg.master_seed)
                        : load_checkpoint(resume);
  if (!resume.empty()) agent.config = cfg.training;

  WaypointEnv env(load_ship(cfg), episode_config(cfg));
  env.set_wind(cfg.wind, cfg.wind_enabled);
  RngStream env_rng = RngStream::named(cfg.master_seed, "env");

  TrainOptions opts;
  opts.checkpoint_every = cfg.checkpoint_every;
  opts.checkpoint_sink = [&](const DdpgAgent& a, const TrainingLog& log) {
    save_checkpoint(a, out_path(cfg, "checkpoint_" +
                                         std::to_string(a.step_count) +
                                         ".ckpt"));
    write_training_log(log, out_path(cfg, "training_log.jsonl"));
  };
  opts.progress_every = 10000;
  opts.progress = [&](const TrainingLog& log, long step) {
    double mean = 0.0;
    int n = 0;
    for (std::size_t i = log.episodes.size() >= 50 ? log.episodes.size() - 50
                                                   : 0;
         i < log.episodes.size(); ++i, ++n)
      mean += log.episodes[i].episode_return;
    std::printf("step %8ld  episodes %5zu  mean return (last 50) %9.2f\n",
                step, log.episodes.size(), n ? mean / n : 0.0);
    std::fflush(stdout);
  };

  const TrainingLog log = train(agent, env, env_rng, opts);
  save_checkpoint(agent, out_path(cfg, "checkpoint_final.ckpt"));
  write_training_log(log, out_path(cfg, "training_log.jsonl"));
  write_svg(learning_curve_svg(log, "training history"),
            out_path(cfg, "learning_curve.svg"));
  write_manifest(out_path(cfg, "manifest.json"), cfg, "train");
  std::printf("trained to step %ld (%zu episodes); wrote %s\n",
              agent.step_count, log.episodes.size(),
              out_path(cfg, "checkpoint_final.ckpt").c_str());
  return 0;
}

int cmd_evaluate(const RunConfig& cfg, const std::string& checkpoint) {
  ensure_output_dir(cfg);
  const ShipModel ship = load_ship(cfg);
  std::unique_ptr<Controller> controller = make_controller(cfg, checkpoint);

  std::vector<EpisodeRecord> records;
  for (const Scenario& scenario : resolve_scenarios(cfg)) {
    const EpisodeRecord rec =
        run_scenario(ship, scenario, *controller, episode_config(cfg));
    write_trajectory(rec, out_path(cfg, "trajectory_" + scenario.name +
                                            ".csv"));
    write_scenario_outputs(cfg, scenario,
                           {{controller->name(), rec.rows}},
                           "trajectory_" + scenario.name);
    records.push_back(std::move(rec));
  }
  write_metrics_csv(records, out_path(cfg, "metrics.csv"));
  write_manifest(out_path(cfg, "manifest.json"), cfg, "evaluate");

  std::printf("scenario            | success | steps | rms_d_c [L] | "
              "rms_delta [rad]\n");
  for (const EpisodeRecord& r : records)
    std::printf("%-19s | %-7s | %5d | %11.4f | %14.4f\n",
                r.scenario_name.c_str(), r.metrics.success ? "yes" : "no",
                r.metrics.steps_used, r.metrics.rms_cross_track,
                r.metrics.effort_rms);
  return 0;
}

int cmd_compare(const RunConfig& cfg, const std::string& checkpoint) {
  ensure_output_dir(cfg);
  const ShipModel ship = load_ship(cfg);

  const std::string path =
      checkpoint.empty() ? cfg.controller.checkpoint : checkpoint;
  if (path.empty())
    throw CheckpointError("compare needs a trained policy; pass "
                          "--checkpoint or set controller.checkpoint");
  DdpgController ddpg(load_checkpoint(path));
  EpisodeConfig ecfg_ctl;
  PdIlosController pd(cfg.controller.gains, cfg.controller.lookahead,
                      cfg.controller.integral_gain,
                      ecfg_ctl.control_interval);

  std::vector<EpisodeRecord> a, b;
  for (const Scenario& scenario : resolve_scenarios(cfg)) {
    EpisodeRecord ra =
        run_scenario(ship, scenario, ddpg, episode_config(cfg));
    EpisodeRecord rb = run_scenario(ship, scenario, pd, episode_config(cfg));
    write_trajectory(ra, out_path(cfg, "trajectory_" + scenario.name +
                                           "_ddpg.csv"));
    write_trajectory(rb, out_path(cfg, "trajectory_" + scenario.name +
                                           "_pd.csv"));
    write_scenario_outputs(
        cfg, scenario, {{"ddpg", ra.rows}, {"pd-ilos", rb.rows}},
        "compare_" + scenario.name);
    a.push_back(std::move(ra));
    b.push_back(std::move(rb));
  }
  const std::string report = compare_report(a, b, "ddpg", "pd-ilos");
  std::fputs(report.c_str(), stdout);
  std::ofstream out(out_path(cfg, "compare.txt"),
                    std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot open " + out_path(cfg, "compare.txt"));
  out << report;
  write_metrics_csv(a, out_path(cfg, "metrics_ddpg.csv"));
  write_metrics_csv(b, out_path(cfg, "metrics_pd.csv"));
  write_manifest(out_path(cfg, "manifest.json"), cfg, "compare");
  return 0;
}

int cmd_simulate(const RunConfig& cfg, double rudder_deg, int steps) {
  ensure_output_dir(cfg);
  const ShipModel ship = load_ship(cfg);
  const double n_prop = self_propulsion_rate(ship);
  const double delta_c = rudder_deg * M_PI / 180.0;
  const EpisodeConfig ecfg;

  VesselState st;
  st.u = 1.0;
  EpisodeRecord rec;
  rec.scenario_name = "simulate";
  const int substeps =
      int(std::lround(ecfg.control_interval / ecfg.substep));
  for (int i = 0; i < steps; ++i) {
    for (int k = 0; k < substeps; ++k) {
      BodyLoads external{};
      if (cfg.wind_enabled && cfg.wind.speed > 0.0)
        external = wind_loads(relative_wind(st, cfg.wind), ship.wind);
      st = rk4_step(ship, st, ControlInput{delta_c, n_prop}, external,
                    ecfg.substep);
    }
    rec.rows.push_back({(i + 1) * ecfg.control_interval, st.x, st.y, st.psi,
                        st.u, st.v, st.r, st.delta, clamp_rudder(delta_c),
                        0.0, 0.0, 0.0});
  }
  rec.metrics = metrics_from_rows(rec.rows);

  write_trajectory(rec, out_path(cfg, "trajectory_simulate.csv"));
  WaypointPath no_path;
  write_svg(trajectory_svg(no_path, {{"fixed rudder", rec.rows}},
                           "open-loop run"),
            out_path(cfg, "trajectory_simulate.svg"));
  write_manifest(out_path(cfg, "manifest.json"), cfg, "simulate");
  std::printf("simulated %d steps at %.1f deg rudder; final psi %.3f rad, "
              "u %.3f\n",
              steps, rudder_deg, st.psi, st.u);
  return 0;
}

int cmd_plot(const std::string& trajectory, const std::string& log,
             const std::string& output) {
  if (trajectory.empty() == log.empty())
    throw std::invalid_argument(
        "plot: pass exactly one of --trajectory or --log");
  if (!trajectory.empty()) {
    PlotTrack track{fs::path(trajectory).stem().string(),
                    read_trajectory(trajectory)};
    WaypointPath no_path;
    write_svg(trajectory_svg(no_path, {track}, track.label), output);
  } else {
    write_svg(learning_curve_svg(read_training_log(log), "training history"),
              output);
  }
  std::printf("wrote %s\n", output.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ship autopilot laboratory: maneuvering model, baseline "
               "autopilot, and reinforcement-learning agent"};
  app.require_subcommand(1);

  std::string config_path, checkpoint, resume;
  std::string plot_trajectory, plot_log, plot_output;
  std::string output_dir_override, controller_override;
  long steps_override = -1;
  double rudder_deg = 20.0;
  int sim_steps = 300;

  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path,
                    "run configuration JSON (defaults used when omitted)");
    cmd->add_option("--output-dir", output_dir_override,
                    "override the config's output directory");
  };

  CLI::App* train = app.add_subcommand("train", "train the DDPG agent");
  add_config(train);
  train->add_option("--steps", steps_override,
                    "override training.total_steps");
  train->add_option("--resume", resume, "continue from a checkpoint");

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "run the configured scenarios");
  add_config(evaluate);
  evaluate->add_option("--controller", controller_override,
                       "pd-ilos or ddpg (overrides the config)");
  evaluate->add_option("--checkpoint", checkpoint,
                       "policy file for the ddpg controller");

  CLI::App* compare = app.add_subcommand(
      "compare", "run both controllers on the configured scenarios");
  add_config(compare);
  compare->add_option("--checkpoint", checkpoint,
                      "policy file for the ddpg controller");

  CLI::App* simulate = app.add_subcommand(
      "simulate", "open-loop fixed-rudder run for dynamics inspection");
  add_config(simulate);
  simulate->add_option("--rudder-deg", rudder_deg,
                       "constant rudder command [deg]");
  simulate->add_option("--steps", sim_steps, "control steps to run");

  CLI::App* plot = app.add_subcommand(
      "plot", "render an SVG from a trajectory CSV or a training log");
  plot->add_option("--trajectory", plot_trajectory, "trajectory CSV path");
  plot->add_option("--log", plot_log, "training log JSONL path");
  plot->add_option("--output", plot_output, "output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (plot->parsed()) return cmd_plot(plot_trajectory, plot_log, plot_output);

    RunConfig cfg;
    if (!config_path.empty()) cfg = load_run_config(config_path);
    if (!output_dir_override.empty()) cfg.output_dir = output_dir_override;
    if (!controller_override.empty()) {
      cfg.controller.kind = controller_override;
      cfg.validate();
    }
    if (steps_override >= 0) {
      cfg.training.total_steps = steps_override;
      cfg.training.validate();
    }

    if (train->parsed()) return cmd_train(cfg, resume);
    if (evaluate->parsed()) return cmd_evaluate(cfg, checkpoint);
    if (compare->parsed()) return cmd_compare(cfg, checkpoint);
    if (simulate->parsed()) return cmd_simulate(cfg, rudder_deg, sim_steps);
    std::fprintf(stderr, "unknown subcommand\n");
    return 2;
  } catch (const CheckpointError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitCheckpoint;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
