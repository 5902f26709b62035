#pragma once

#include <string>
#include <vector>

#include "shiplab/ddpg.hpp"
#include "shiplab/scenario.hpp"

namespace shiplab {

/// One labelled track for the trajectory plot.
struct PlotTrack {
  std::string label;
  std::vector<TraceRow> rows;
};

/// Static SVG of one or more vessel tracks over the waypoint path: the
/// waypoints with their acceptance circles, the start point, and each track
/// as a polyline. Equal axis scaling, x east / y north.
std::string trajectory_svg(const WaypointPath& path,
                           const std::vector<PlotTrack>& tracks,
                           const std::string& title);

/// Static SVG of training history: per-episode return (with a moving
/// average) over episodes, and critic loss over updates below it.
std::string learning_curve_svg(const TrainingLog& log,
                               const std::string& title);

/// Writes an SVG string to path. Throws std::runtime_error on I/O failure.
void write_svg(const std::string& svg, const std::string& path);

}  // namespace shiplab
