#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "seek/env.hpp"

namespace seek {

struct PlotOptions {
  double pixels_per_meter = 60.0;
  double margin_px = 20.0;
  double success_radius = 1.0;
};

/// Renders one episode as a standalone SVG: arena, obstacles, source disc,
/// path, a blue start dot and a green source dot. Without a scene the
/// canvas fits the path.
inline std::string render_svg(const std::vector<TrajectoryRow>& rows, const std::optional<Scenario>& scene,
                              const PlotOptions& opt = {}) {
  double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;
  if (scene) {
    max_x = scene->arena.width;
    max_y = scene->arena.height;
  } else if (!rows.empty()) {
    min_x = max_x = rows.front().pose.position.x;
    min_y = max_y = rows.front().pose.position.y;
    for (const auto& r : rows) {
      min_x = std::min(min_x, r.pose.position.x);
      max_x = std::max(max_x, r.pose.position.x);
      min_y = std::min(min_y, r.pose.position.y);
      max_y = std::max(max_y, r.pose.position.y);
    }
    min_x -= 0.5, min_y -= 0.5, max_x += 0.5, max_y += 0.5;
  }
  const double k = opt.pixels_per_meter;
  const double m = opt.margin_px;
  const double w = (max_x - min_x) * k + 2 * m;
  const double h = (max_y - min_y) * k + 2 * m;
  const auto px = [&](double x) { return m + (x - min_x) * k; };
  const auto py = [&](double y) { return m + (max_y - y) * k; };  // y up

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" viewBox=\"0 0 {:.2f} {:.2f}\">\n",
      w, h, w, h);
  svg += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"white\" stroke=\"black\" stroke-width=\"2\"/>\n",
                     px(min_x), py(max_y), (max_x - min_x) * k, (max_y - min_y) * k);
  if (scene) {
    for (const auto& o : scene->arena.obstacles)
      svg += fmt::format("<rect class=\"obstacle\" x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"#888888\"/>\n",
                         px(o.min_x()), py(o.max_y()), 2 * o.half_extents.x * k, 2 * o.half_extents.y * k);
    svg += fmt::format("<circle class=\"success\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{:.2f}\" fill=\"#2ca02c\" fill-opacity=\"0.15\" stroke=\"#2ca02c\"/>\n",
                       px(scene->source.x), py(scene->source.y), opt.success_radius * k);
    svg += fmt::format("<circle class=\"source\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"6\" fill=\"#2ca02c\"/>\n",
                       px(scene->source.x), py(scene->source.y));
  }
  if (!rows.empty()) {
    svg += "<polyline class=\"path\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < rows.size(); ++i)
      svg += fmt::format("{}{:.2f},{:.2f}", i ? " " : "", px(rows[i].pose.position.x), py(rows[i].pose.position.y));
    svg += "\"/>\n";
    svg += fmt::format("<circle class=\"start\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"6\" fill=\"#1f77b4\"/>\n",
                       px(rows.front().pose.position.x), py(rows.front().pose.position.y));
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace seek
