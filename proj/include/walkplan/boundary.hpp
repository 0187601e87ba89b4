#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "walkplan/dfpg.hpp"

namespace walkplan {

/// Lattice point between cells; x is the column, y the row (y grows downward).
struct Vertex {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

/// One boundary segment traversed with the interior on its right.
struct LoopSegment {
  SegmentRef seg;
  Vertex from;
  Vertex to;

  int dx() const { return to.x - from.x; }
  int dy() const { return to.y - from.y; }
  /// Unit step pointing into the interior, as (dcol, drow).
  std::array<int, 2> inward() const { return {-dy(), dx()}; }
  /// Interior cell adjacent to the segment.
  Cell interior_cell() const;
  /// Midpoint in cell units.
  Point midpoint() const { return {(from.x + to.x) * 0.5, (from.y + to.y) * 0.5}; }
  Axis axis() const { return seg.axis; }
};

class BoundaryError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Closed, clockwise (on screen) boundary loop of a single interior region.
/// Starts at the top-left-most horizontal segment.
class BoundaryLoop {
public:
  BoundaryLoop() = default;
  BoundaryLoop(int grid_n, std::vector<LoopSegment> segments);

  int grid_n() const { return grid_n_; }
  int size() const { return static_cast<int>(segments_.size()); }
  const LoopSegment& operator[](int i) const { return segments_[static_cast<std::size_t>(i)]; }
  const std::vector<LoopSegment>& segments() const { return segments_; }
  int prev(int i) const { return (i + size() - 1) % size(); }
  int next(int i) const { return (i + 1) % size(); }
  /// Loop position of a segment, or -1.
  int find(const SegmentRef& s) const;

private:
  int grid_n_ = 0;
  std::vector<LoopSegment> segments_;
  std::vector<int> h_index_;
  std::vector<int> v_index_;
};

/// Orders the interior/exterior transitions of a mask into one clockwise loop.
/// Throws BoundaryError("non-simple boundary") for several loops or open chains.
BoundaryLoop extract_boundary_loop(const CellMap& interior);

/// Straight run of same-direction segments between two corners.
struct WallRun {
  int start = 0;   // loop position of the first segment
  int length = 0;  // positions start .. start+length-1, modulo loop size
};

/// Maximal wall runs in loop order; the first run starts at position 0's run start.
std::vector<WallRun> wall_runs(const BoundaryLoop& loop);
/// Index into wall_runs() for every loop position.
std::vector<int> wall_run_of(const BoundaryLoop& loop, const std::vector<WallRun>& runs);

/// Steps along the loop to the nearest segment touching a corner (0 for such segments).
std::vector<int> corner_distances(const BoundaryLoop& loop);

/// Lattice vertices where the loop changes direction, in loop order.
std::vector<Vertex> corner_vertices(const BoundaryLoop& loop);

/// Node hit by the ray cast from segment i's midpoint perpendicular into the interior.
int opposite_segment(const BoundaryLoop& loop, int i);

/// The up to `count` cells stepped from the segment into the interior, stopping at the far wall.
std::vector<Cell> inward_cells(const BoundaryLoop& loop, int i, int count);

struct GraphEdge {
  int src = 0;
  int dst = 0;
  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

inline constexpr int kInwardCells = 10;
inline constexpr int kNodeFeatureLen = 4 + kInwardCells;
inline constexpr int kEdgeFeatureLen = 2;

using NodeFeatures = std::array<double, kNodeFeatureLen>;
using EdgeFeatures = std::array<double, kEdgeFeatureLen>;

/// Door-detection graph. Node i receives messages over three directed edges,
/// from prev(i), next(i) and opposite(i), stored in that order.
///
/// Node features: [corner distance / n_B, orientation (0 = h, 1 = v),
/// 10 inward inverse-distance samples, midpoint x / n, midpoint y / n].
/// Edge features: [1 - |u_i . u_j| for unit directions, L1 midpoint distance in cells].
struct BoundaryGraph {
  std::vector<NodeFeatures> nodes;
  std::vector<GraphEdge> edges;
  std::vector<EdgeFeatures> edge_features;

  int node_count() const { return static_cast<int>(nodes.size()); }
};

BoundaryGraph build_boundary_graph(const BoundaryLoop& loop, const CellMap& walk_map);

nlohmann::json graph_to_json(const BoundaryGraph& g);

/// DOOR/WALL label of every loop node, read from the Dfpg's segment labels.
std::vector<SegmentLabel> loop_labels(const BoundaryLoop& loop, const Dfpg& g);

/// Maximal circular runs of DOOR nodes, each as loop positions in order.
std::vector<std::vector<int>> door_runs(const std::vector<SegmentLabel>& labels);

}  // namespace walkplan
