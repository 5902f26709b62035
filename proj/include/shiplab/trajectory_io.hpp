#pragma once

#include <string>
#include <vector>

#include "shiplab/config.hpp"
#include "shiplab/ddpg.hpp"
#include "shiplab/scenario.hpp"

namespace shiplab {

/// Fixed trace schema shared by the writer, the reader, and the plotter.
inline constexpr const char* kTrajectoryHeader =
    "t,x,y,psi,u,v,r,delta,delta_c,d_c,chi_e,reward";

/// Renders one row per control step under kTrajectoryHeader. Numbers use
/// shortest round-trip formatting (locale independent); reading the text
/// back reproduces every double bit for bit.
std::string trajectory_csv(const EpisodeRecord& record);

/// Writes trajectory_csv to path. Throws std::runtime_error on I/O failure.
void write_trajectory(const EpisodeRecord& record, const std::string& path);

/// Parses trajectory_csv output. Throws std::runtime_error on a wrong
/// header, a malformed number, or a wrong column count.
std::vector<TraceRow> read_trajectory(const std::string& path);
std::vector<TraceRow> parse_trajectory_csv(const std::string& text);

/// Per-scenario metrics table, CSV with a header row.
std::string metrics_csv(const std::vector<EpisodeRecord>& records);
void write_metrics_csv(const std::vector<EpisodeRecord>& records,
                       const std::string& path);

/// Training log as JSON lines: one object per episode or update, written in
/// step order ("episode" or "update" key tells them apart). Line-buffered
/// readers can consume a log cut short by a crash; the reader ignores a
/// trailing partial line.
std::string training_log_jsonl(const TrainingLog& log);
void write_training_log(const TrainingLog& log, const std::string& path);
TrainingLog read_training_log(const std::string& path);

/// Run provenance: tool version, subcommand, config hash, master seed.
/// Deliberately no timestamp, so identical runs produce identical bytes.
void write_manifest(const std::string& path, const RunConfig& cfg,
                    const std::string& subcommand);

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace shiplab
