#pragma once

#include <optional>
#include <string>

#include "walkplan/floorplan.hpp"

namespace walkplan {

struct SvgStyle {
  double px_per_cell = 8.0;
};

/// Top-down drawing: interior fill, closed wall polyline through the loop
/// corners, one polyline per door run, furniture rectangles and an optional
/// trajectory overlay.
std::string render_svg(const FloorPlan& plan, const std::optional<Trajectory>& traj = std::nullopt,
                       const SvgStyle& style = {});

}  // namespace walkplan
