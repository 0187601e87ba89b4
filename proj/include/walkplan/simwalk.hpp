#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "walkplan/dfpg.hpp"
#include "walkplan/rng.hpp"

namespace walkplan {

struct SimConfig {
  std::uint64_t seed = 0;
  double strat_cell_m = 2.0;
  int wall_buffer_cells = 1;
  int loop_points = 4;

  void validate() const;
};

class SimulationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Cells whose Chebyshev neighborhood of the given radius is entirely set in `mask`.
CellMap erode(const CellMap& mask, int radius);

/// Exact Euclidean distance (in cells) from every cell center to the nearest
/// occupied cell center; cells beyond the grid count as occupied.
CellMap distance_to_occupied(const CellMap& occupied);

/// One waypoint per strat_cell_m block holding eligible (`free` set) cells,
/// drawn with probability proportional to the distance to `occupied`.
/// Returns cell centers in meters.
std::vector<Point> stratified_samples(const CellMap& free, const CellMap& occupied, double cell_size_m,
                                      const SimConfig& cfg, Rng& rng);

/// Open tour: nearest neighbor from a random start, then 2-opt (including
/// end reversals) until no swap shortens it.
std::vector<Point> order_tsp(const std::vector<Point>& points, Rng& rng);

double path_length(const std::vector<Point>& points);

/// Minimum-cost 8-connected path (steps 1 and sqrt 2) through passable cells.
/// Diagonal steps need both adjacent orthogonal cells passable.
/// Throws SimulationError("disconnected").
std::vector<Cell> grid_shortest_path(const CellMap& passable, const Cell& a, const Cell& b);
double cell_path_cost(const std::vector<Cell>& path);

/// Per 4-connected FURN region, one point per bounding-box side one cell
/// outside it (top, right, bottom, left). Loops with a point outside the free
/// space are dropped. Points are cells.
std::vector<std::vector<Cell>> furniture_loops(const Dfpg& gt, const SimConfig& cfg, Rng& rng);

/// Free cell in front of the middle segment of every door run.
std::vector<Cell> door_attachment_cells(const Dfpg& gt);

/// Full walk: stratified waypoints on the buffered free space, TSP order,
/// shortest-path legs, furniture loop detours, door detours on the whole free
/// space. Deterministic in cfg.seed.
Trajectory simulate_walk(const Dfpg& gt, const SimConfig& cfg);

}  // namespace walkplan
