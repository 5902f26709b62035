#include "shiplab/trajectory_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"

namespace shiplab {

using nlohmann::json;

namespace {

void append_double(std::string& out, double v) {
  char buf[32];
  const std::to_chars_result res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

double parse_double(std::string_view field, int line_no) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const std::from_chars_result res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw std::runtime_error("trajectory: bad number on line " +
                             std::to_string(line_no));
  return v;
}

void write_text(const std::string& text, const std::string& path,
                const char* what) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error(std::string(what) + ": cannot open " + path);
  out.write(text.data(), std::streamsize(text.size()));
  out.flush();
  if (!out)
    throw std::runtime_error(std::string(what) + ": write failed for " +
                             path);
}

std::string read_text(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error(std::string(what) + ": cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::string trajectory_csv(const EpisodeRecord& record) {
  std::string out = kTrajectoryHeader;
  out += '\n';
  for (const TraceRow& row : record.rows) {
    const double cols[12] = {row.t,     row.x,       row.y,   row.psi,
                             row.u,     row.v,       row.r,   row.delta,
                             row.delta_c, row.d_c,   row.chi_e, row.reward};
    for (int i = 0; i < 12; ++i) {
      if (i) out += ',';
      append_double(out, cols[i]);
    }
    out += '\n';
  }
  return out;
}

void write_trajectory(const EpisodeRecord& record, const std::string& path) {
  write_text(trajectory_csv(record), path, "trajectory");
}

std::vector<TraceRow> parse_trajectory_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader)
    throw std::runtime_error("trajectory: missing or wrong header");
  std::vector<TraceRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    double cols[12];
    std::size_t begin = 0;
    for (int i = 0; i < 12; ++i) {
      std::size_t end = line.find(',', begin);
      if (i < 11 && end == std::string::npos)
        throw std::runtime_error("trajectory: too few columns on line " +
                                 std::to_string(line_no));
      // An extra column would leave a comma inside the last field, which
      // parse_double rejects.
      if (i == 11) end = line.size();
      cols[i] = parse_double(
          std::string_view(line).substr(begin, end - begin), line_no);
      begin = end + 1;
    }
    rows.push_back({cols[0], cols[1], cols[2], cols[3], cols[4], cols[5],
                    cols[6], cols[7], cols[8], cols[9], cols[10], cols[11]});
  }
  return rows;
}

std::vector<TraceRow> read_trajectory(const std::string& path) {
  return parse_trajectory_csv(read_text(path, "trajectory"));
}

std::string metrics_csv(const std::vector<EpisodeRecord>& records) {
  std::string out =
      "scenario,success,steps_used,rms_cross_track,effort_rms,rudder_travel";
  out += '\n';
  for (const EpisodeRecord& r : records) {
    out += r.scenario_name;
    out += ',';
    out += r.metrics.success ? '1' : '0';
    out += ',';
    out += std::to_string(r.metrics.steps_used);
    out += ',';
    append_double(out, r.metrics.rms_cross_track);
    out += ',';
    append_double(out, r.metrics.effort_rms);
    out += ',';
    append_double(out, r.metrics.rudder_travel);
    out += '\n';
  }
  return out;
}

void write_metrics_csv(const std::vector<EpisodeRecord>& records,
                       const std::string& path) {
  write_text(metrics_csv(records), path, "metrics");
}

std::string training_log_jsonl(const TrainingLog& log) {
  // Merge the two series into one stream ordered by lifetime step, episodes
  // first on ties, so the file reads chronologically.
  std::string out;
  std::size_t ie = 0, iu = 0;
  while (ie < log.episodes.size() || iu < log.updates.size()) {
    const bool take_episode =
        iu == log.updates.size() ||
        (ie < log.episodes.size() &&
         log.episodes[ie].end_step <= log.updates[iu].step);
    if (take_episode) {
      const TrainingLog::EpisodeEntry& e = log.episodes[ie++];
      json j{{"episode", e.index},
             {"return", e.episode_return},
             {"steps", e.steps},
             {"outcome", int(e.outcome)},
             {"end_step", e.end_step}};
      out += j.dump();
      out += '\n';
    } else {
      const TrainingLog::UpdateEntry& u = log.updates[iu++];
      json j{{"update", u.step},
             {"critic_loss", u.critic_loss},
             {"actor_objective", u.actor_objective}};
      out += j.dump();
      out += '\n';
    }
  }
  return out;
}

void write_training_log(const TrainingLog& log, const std::string& path) {
  write_text(training_log_jsonl(log), path, "training log");
}

TrainingLog read_training_log(const std::string& path) {
  const std::string text = read_text(path, "training log");
  TrainingLog log;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception&) {
      // A crash can leave a half-written last line; anything after it is
      // unreachable anyway, so stop here.
      break;
    }
    try {
      if (j.contains("episode")) {
        log.episodes.push_back({j.at("episode").get<int>(),
                                j.at("return").get<double>(),
                                j.at("steps").get<int>(),
                                Outcome(j.at("outcome").get<int>()),
                                j.at("end_step").get<long>()});
      } else if (j.contains("update")) {
        log.updates.push_back({j.at("update").get<long>(),
                               j.at("critic_loss").get<double>(),
                               j.at("actor_objective").get<double>()});
      } else {
        throw std::runtime_error("training log: line is neither an episode "
                                 "nor an update");
      }
    } catch (const json::exception& e) {
      throw std::runtime_error(std::string("training log: bad record: ") +
                               e.what());
    }
  }
  return log;
}

void write_manifest(const std::string& path, const RunConfig& cfg,
                    const std::string& subcommand) {
  json j{{"tool_version", kToolVersion},
         {"command", subcommand},
         {"config_hash", config_hash(cfg)},
         {"master_seed", cfg.master_seed}};
  write_text(j.dump(2) + "\n", path, "manifest");
}

}  // namespace shiplab
