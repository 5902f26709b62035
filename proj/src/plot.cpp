#include "shiplab/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace shiplab {

namespace {

const char* kTrackColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                              "#ff7f0e", "#8c564b"};

struct Bounds {
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -std::numeric_limits<double>::infinity();
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -std::numeric_limits<double>::infinity();

  void add(double x, double y) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }

  void pad(double fraction, double minimum) {
    const double px = std::max((xmax - xmin) * fraction, minimum);
    const double py = std::max((ymax - ymin) * fraction, minimum);
    xmin -= px;
    xmax += px;
    ymin -= py;
    ymax += py;
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

/// Maps data coordinates to pixel coordinates; for maps, y grows north so
/// the pixel y axis is flipped.
struct Viewport {
  Bounds b;
  double px0, py0, pw, ph;  ///< pixel origin and extent of the plot area

  double x(double v) const { return px0 + (v - b.xmin) / (b.xmax - b.xmin) * pw; }
  double y(double v) const {
    return py0 + ph - (v - b.ymin) / (b.ymax - b.ymin) * ph;
  }
};

void axes(std::ostringstream& os, const Viewport& vp, const char* xlabel,
          const char* ylabel) {
  os << "<rect x='" << fmt(vp.px0) << "' y='" << fmt(vp.py0) << "' width='"
     << fmt(vp.pw) << "' height='" << fmt(vp.ph)
     << "' fill='white' stroke='#444'/>\n";
  // Four round-values ticks per axis are plenty for inspection plots.
  for (int i = 0; i <= 4; ++i) {
    const double fx = vp.b.xmin + (vp.b.xmax - vp.b.xmin) * i / 4.0;
    const double fy = vp.b.ymin + (vp.b.ymax - vp.b.ymin) * i / 4.0;
    os << "<text x='" << fmt(vp.x(fx)) << "' y='" << fmt(vp.py0 + vp.ph + 14)
       << "' font-size='10' text-anchor='middle' fill='#333'>" << fmt(fx)
       << "</text>\n";
    os << "<text x='" << fmt(vp.px0 - 4) << "' y='" << fmt(vp.y(fy) + 3)
       << "' font-size='10' text-anchor='end' fill='#333'>" << fmt(fy)
       << "</text>\n";
  }
  os << "<text x='" << fmt(vp.px0 + vp.pw / 2) << "' y='"
     << fmt(vp.py0 + vp.ph + 30) << "' font-size='11' text-anchor='middle'>"
     << xlabel << "</text>\n";
  os << "<text x='" << fmt(vp.px0 - 40) << "' y='" << fmt(vp.py0 + vp.ph / 2)
     << "' font-size='11' text-anchor='middle' transform='rotate(-90 "
     << fmt(vp.px0 - 40) << " " << fmt(vp.py0 + vp.ph / 2) << ")'>" << ylabel
     << "</text>\n";
}

template <typename Iter, typename GetX, typename GetY>
void polyline(std::ostringstream& os, const Viewport& vp, Iter begin,
              Iter end, GetX gx, GetY gy, const char* color, double width) {
  os << "<polyline fill='none' stroke='" << color << "' stroke-width='"
     << width << "' points='";
  for (Iter it = begin; it != end; ++it)
    os << fmt(vp.x(gx(*it))) << "," << fmt(vp.y(gy(*it))) << " ";
  os << "'/>\n";
}

}  // namespace

std::string trajectory_svg(const WaypointPath& path,
                           const std::vector<PlotTrack>& tracks,
                           const std::string& title) {
  Bounds b;
  b.add(path.start.x(), path.start.y());
  for (const Eigen::Vector2d& wp : path.waypoints) b.add(wp.x(), wp.y());
  for (const PlotTrack& t : tracks)
    for (const TraceRow& row : t.rows) b.add(row.x, row.y);
  b.pad(0.08, 1.0);

  // Equal scale: stretch the smaller span so 1 L measures the same length
  // on both axes.
  const double span = std::max(b.xmax - b.xmin, b.ymax - b.ymin);
  const double cx = (b.xmin + b.xmax) / 2, cy = (b.ymin + b.ymax) / 2;
  b.xmin = cx - span / 2;
  b.xmax = cx + span / 2;
  b.ymin = cy - span / 2;
  b.ymax = cy + span / 2;

  const double W = 640, H = 640;
  Viewport vp{b, 60, 40, W - 80, H - 90};

  std::ostringstream os;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W
     << "' height='" << H << "' viewBox='0 0 " << W << " " << H << "'>\n";
  os << "<rect width='" << W << "' height='" << H << "' fill='#fafaf8'/>\n";
  os << "<text x='" << W / 2
     << "' y='24' font-size='14' text-anchor='middle'>" << title
     << "</text>\n";
  axes(os, vp, "x [L]", "y [L]");

  const double r_px = path.acceptance_radius / span * vp.pw;
  for (const Eigen::Vector2d& wp : path.waypoints) {
    os << "<circle cx='" << fmt(vp.x(wp.x())) << "' cy='" << fmt(vp.y(wp.y()))
       << "' r='" << fmt(r_px)
       << "' fill='none' stroke='#bbb' stroke-dasharray='3 2'/>\n";
    os << "<circle cx='" << fmt(vp.x(wp.x())) << "' cy='" << fmt(vp.y(wp.y()))
       << "' r='2.5' fill='#555'/>\n";
  }
  os << "<circle cx='" << fmt(vp.x(path.start.x())) << "' cy='"
     << fmt(vp.y(path.start.y())) << "' r='4' fill='none' stroke='#000'/>\n";

  for (std::size_t i = 0; i < tracks.size(); ++i) {
    const char* color = kTrackColors[i % std::size(kTrackColors)];
    polyline(os, vp, tracks[i].rows.begin(), tracks[i].rows.end(),
             [](const TraceRow& r) { return r.x; },
             [](const TraceRow& r) { return r.y; }, color, 1.5);
    os << "<text x='" << fmt(vp.px0 + 8) << "' y='"
       << fmt(vp.py0 + 16 + 16 * double(i)) << "' font-size='11' fill='"
       << color << "'>" << tracks[i].label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string learning_curve_svg(const TrainingLog& log,
                               const std::string& title) {
  const double W = 720, H = 560;
  std::ostringstream os;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W
     << "' height='" << H << "' viewBox='0 0 " << W << " " << H << "'>\n";
  os << "<rect width='" << W << "' height='" << H << "' fill='#fafaf8'/>\n";
  os << "<text x='" << W / 2
     << "' y='24' font-size='14' text-anchor='middle'>" << title
     << "</text>\n";

  if (!log.episodes.empty()) {
    Bounds b;
    for (std::size_t i = 0; i < log.episodes.size(); ++i)
      b.add(double(i), log.episodes[i].episode_return);
    b.pad(0.05, 1.0);
    Viewport vp{b, 70, 40, W - 100, (H - 130) / 2};
    axes(os, vp, "episode", "return");
    polyline(os, vp, log.episodes.begin(), log.episodes.end(),
             [&](const TrainingLog::EpisodeEntry& e) {
               return double(&e - log.episodes.data());
             },
             [](const TrainingLog::EpisodeEntry& e) {
               return e.episode_return;
             },
             "#9ecae1", 1.0);
    // 50-episode trailing mean makes the trend visible through the noise.
    std::vector<std::pair<double, double>> avg;
    double acc = 0.0;
    for (std::size_t i = 0; i < log.episodes.size(); ++i) {
      acc += log.episodes[i].episode_return;
      if (i >= 50) acc -= log.episodes[i - 50].episode_return;
      const double n = double(std::min<std::size_t>(i + 1, 50));
      avg.emplace_back(double(i), acc / n);
    }
    polyline(os, vp, avg.begin(), avg.end(),
             [](const std::pair<double, double>& p) { return p.first; },
             [](const std::pair<double, double>& p) { return p.second; },
             "#1f77b4", 1.8);
  }

  if (!log.updates.empty()) {
    Bounds b;
    for (const TrainingLog::UpdateEntry& u : log.updates)
      b.add(double(u.step), u.critic_loss);
    b.pad(0.05, 1.0);
    Viewport vp{b, 70, 40 + (H - 130) / 2 + 50, W - 100, (H - 130) / 2};
    axes(os, vp, "environment step", "critic loss");
    polyline(os, vp, log.updates.begin(), log.updates.end(),
             [](const TrainingLog::UpdateEntry& u) { return double(u.step); },
             [](const TrainingLog::UpdateEntry& u) { return u.critic_loss; },
             "#d62728", 1.0);
  }
  os << "</svg>\n";
  return os.str();
}

void write_svg(const std::string& svg, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("plot: cannot open " + path);
  out.write(svg.data(), std::streamsize(svg.size()));
  out.flush();
  if (!out) throw std::runtime_error("plot: write failed for " + path);
}

}  // namespace shiplab
