#include "walkplan/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace walkplan {

Cell LoopSegment::interior_cell() const {
  const auto in = inward();
  const Point m = midpoint();
  return {static_cast<int>(std::floor(m.y + 0.5 * in[1])), static_cast<int>(std::floor(m.x + 0.5 * in[0]))};
}

BoundaryLoop::BoundaryLoop(int grid_n, std::vector<LoopSegment> segments)
    : grid_n_(grid_n),
      segments_(std::move(segments)),
      h_index_(static_cast<std::size_t>(grid_n + 1) * grid_n, -1),
      v_index_(static_cast<std::size_t>(grid_n) * (grid_n + 1), -1) {
  for (int i = 0; i < size(); ++i) {
    const auto& s = segments_[i].seg;
    if (s.axis == Axis::Horizontal)
      h_index_[static_cast<std::size_t>(s.row) * grid_n_ + s.col] = i;
    else
      v_index_[static_cast<std::size_t>(s.row) * (grid_n_ + 1) + s.col] = i;
  }
}

int BoundaryLoop::find(const SegmentRef& s) const {
  if (s.axis == Axis::Horizontal) {
    if (s.row < 0 || s.row > grid_n_ || s.col < 0 || s.col >= grid_n_) return -1;
    return h_index_[static_cast<std::size_t>(s.row) * grid_n_ + s.col];
  }
  if (s.row < 0 || s.row >= grid_n_ || s.col < 0 || s.col > grid_n_) return -1;
  return v_index_[static_cast<std::size_t>(s.row) * (grid_n_ + 1) + s.col];
}

namespace {

LoopSegment orient(const SegmentRef& s, const CellMap& mask) {
  const auto [first, second] = incident_cells(s);
  const bool second_inside = mask.get_or(second.row, second.col, 0.0) > 0.5;
  if (s.axis == Axis::Horizontal) {
    // Interior below: head east. Interior above: head west.
    if (second_inside) return {s, {s.col, s.row}, {s.col + 1, s.row}};
    return {s, {s.col + 1, s.row}, {s.col, s.row}};
  }
  // Interior to the right (east): head north. Interior to the left: head south.
  if (second_inside) return {s, {s.col, s.row + 1}, {s.col, s.row}};
  return {s, {s.col, s.row}, {s.col, s.row + 1}};
}

}  // namespace

BoundaryLoop extract_boundary_loop(const CellMap& interior) {
  const auto refs = boundary_segments(interior);
  if (refs.empty()) throw BoundaryError("non-simple boundary");
  std::vector<LoopSegment> directed;
  directed.reserve(refs.size());
  for (const auto& s : refs) directed.push_back(orient(s, interior));

  std::multimap<Vertex, int> outgoing;
  for (int i = 0; i < static_cast<int>(directed.size()); ++i) outgoing.emplace(directed[i].from, i);

  // refs is sorted horizontal-first by (row, col): element 0 is the top-left-most segment.
  std::vector<char> used(directed.size(), 0);
  std::vector<LoopSegment> loop;
  loop.reserve(directed.size());
  int current = 0;
  while (true) {
    if (used[current]) throw BoundaryError("non-simple boundary");
    used[current] = 1;
    loop.push_back(directed[current]);
    const auto& seg = directed[current];
    auto [lo, hi] = outgoing.equal_range(seg.to);
    int chosen = -1;
    const int right_dx = -seg.dy(), right_dy = seg.dx();
    for (auto it = lo; it != hi; ++it) {
      const auto& cand = directed[it->second];
      if (chosen < 0) chosen = it->second;
      // At a pinch vertex, turn right so diagonal interior cells stay separate.
      if (cand.dx() == right_dx && cand.dy() == right_dy) chosen = it->second;
    }
    if (chosen < 0) throw BoundaryError("non-simple boundary");
    if (chosen == 0) break;
    current = chosen;
  }
  if (loop.size() != directed.size()) throw BoundaryError("non-simple boundary");
  return BoundaryLoop(interior.n(), std::move(loop));
}

std::vector<WallRun> wall_runs(const BoundaryLoop& loop) {
  const int nb = loop.size();
  std::vector<WallRun> runs;
  if (nb == 0) return runs;
  auto same_dir = [&](int a, int b) { return loop[a].dx() == loop[b].dx() && loop[a].dy() == loop[b].dy(); };
  int first = -1;
  for (int i = 0; i < nb; ++i)
    if (!same_dir(i, loop.prev(i))) {
      first = i;
      break;
    }
  if (first < 0) throw BoundaryError("boundary loop without corners");
  int pos = first;
  do {
    WallRun run{pos, 1};
    int j = loop.next(pos);
    while (j != first && same_dir(j, pos)) {
      ++run.length;
      j = loop.next(j);
    }
    runs.push_back(run);
    pos = j;
  } while (pos != first);
  // Rotate so the run containing position 0 comes first.
  auto contains_zero = [&](const WallRun& r) { return (0 - r.start + nb) % nb < r.length; };
  auto it = std::find_if(runs.begin(), runs.end(), contains_zero);
  std::rotate(runs.begin(), it, runs.end());
  return runs;
}

std::vector<int> wall_run_of(const BoundaryLoop& loop, const std::vector<WallRun>& runs) {
  std::vector<int> out(static_cast<std::size_t>(loop.size()), -1);
  for (int r = 0; r < static_cast<int>(runs.size()); ++r)
    for (int k = 0; k < runs[r].length; ++k) out[(runs[r].start + k) % loop.size()] = r;
  return out;
}

std::vector<int> corner_distances(const BoundaryLoop& loop) {
  std::vector<int> out(static_cast<std::size_t>(loop.size()), 0);
  for (const auto& run : wall_runs(loop))
    for (int k = 0; k < run.length; ++k) out[(run.start + k) % loop.size()] = std::min(k, run.length - 1 - k);
  return out;
}

std::vector<Vertex> corner_vertices(const BoundaryLoop& loop) {
  std::vector<Vertex> out;
  for (const auto& run : wall_runs(loop)) out.push_back(loop[run.start].from);
  return out;
}

namespace {

/// Segment crossed when stepping from `cell` by (dcol, drow).
SegmentRef crossed_segment(const Cell& cell, int dcol, int drow) {
  if (drow == 1) return {Axis::Horizontal, cell.row + 1, cell.col};
  if (drow == -1) return {Axis::Horizontal, cell.row, cell.col};
  if (dcol == 1) return {Axis::Vertical, cell.row, cell.col + 1};
  return {Axis::Vertical, cell.row, cell.col};
}

}  // namespace

std::vector<Cell> inward_cells(const BoundaryLoop& loop, int i, int count) {
  std::vector<Cell> out;
  const auto in = loop[i].inward();
  Cell cell = loop[i].interior_cell();
  for (int k = 0; k < count; ++k) {
    out.push_back(cell);
    if (loop.find(crossed_segment(cell, in[0], in[1])) >= 0) break;
    cell = {cell.row + in[1], cell.col + in[0]};
  }
  return out;
}

int opposite_segment(const BoundaryLoop& loop, int i) {
  const auto in = loop[i].inward();
  Cell cell = loop[i].interior_cell();
  // The ray runs through cell centers, so it never meets a lattice point.
  for (int steps = 0; steps <= loop.grid_n() + 1; ++steps) {
    const int hit = loop.find(crossed_segment(cell, in[0], in[1]));
    if (hit >= 0) return hit;
    cell = {cell.row + in[1], cell.col + in[0]};
  }
  throw BoundaryError("opposite segment ray left the grid");
}

BoundaryGraph build_boundary_graph(const BoundaryLoop& loop, const CellMap& walk_map) {
  const int nb = loop.size();
  const double n = loop.grid_n();
  if (walk_map.n() != loop.grid_n()) throw std::invalid_argument("build_boundary_graph: grid size mismatch");
  BoundaryGraph g;
  g.nodes.resize(static_cast<std::size_t>(nb));
  const auto corner_dist = corner_distances(loop);
  for (int i = 0; i < nb; ++i) {
    auto& f = g.nodes[i];
    f.fill(0.0);
    f[0] = static_cast<double>(corner_dist[i]) / nb;
    f[1] = loop[i].axis() == Axis::Horizontal ? 0.0 : 1.0;
    const auto cells = inward_cells(loop, i, kInwardCells);
    for (std::size_t k = 0; k < cells.size(); ++k) f[2 + k] = walk_map.get_or(cells[k].row, cells[k].col, 0.0);
    const Point m = loop[i].midpoint();
    f[2 + kInwardCells] = m.x / n;
    f[3 + kInwardCells] = m.y / n;
  }
  auto edge_feature = [&](int a, int b) {
    const auto& sa = loop[a];
    const auto& sb = loop[b];
    const double dot = sa.dx() * sb.dx() + sa.dy() * sb.dy();
    const Point ma = sa.midpoint(), mb = sb.midpoint();
    return EdgeFeatures{1.0 - std::abs(dot), std::abs(ma.x - mb.x) + std::abs(ma.y - mb.y)};
  };
  g.edges.reserve(static_cast<std::size_t>(3 * nb));
  for (int i = 0; i < nb; ++i) {
    for (int j : {loop.prev(i), loop.next(i), opposite_segment(loop, i)}) {
      g.edges.push_back({j, i});
      g.edge_features.push_back(edge_feature(j, i));
    }
  }
  return g;
}

nlohmann::json graph_to_json(const BoundaryGraph& g) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& f : g.nodes) nodes.push_back(std::vector<double>(f.begin(), f.end()));
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges) edges.push_back({e.src, e.dst});
  nlohmann::json efeat = nlohmann::json::array();
  for (const auto& f : g.edge_features) efeat.push_back(std::vector<double>(f.begin(), f.end()));
  return {{"node_features", nodes}, {"edges", edges}, {"edge_features", efeat}};
}

std::vector<SegmentLabel> loop_labels(const BoundaryLoop& loop, const Dfpg& g) {
  std::vector<SegmentLabel> out;
  out.reserve(static_cast<std::size_t>(loop.size()));
  for (const auto& s : loop.segments())
    out.push_back(g.segment(s.seg) == SegmentLabel::Door ? SegmentLabel::Door : SegmentLabel::Wall);
  return out;
}

std::vector<std::vector<int>> door_runs(const std::vector<SegmentLabel>& labels) {
  const int nb = static_cast<int>(labels.size());
  std::vector<std::vector<int>> runs;
  if (nb == 0) return runs;
  auto is_door = [&](int i) { return labels[((i % nb) + nb) % nb] == SegmentLabel::Door; };
  int first = -1;
  for (int i = 0; i < nb; ++i)
    if (!is_door(i)) {
      first = i;
      break;
    }
  if (first < 0) {
    std::vector<int> all(static_cast<std::size_t>(nb));
    for (int i = 0; i < nb; ++i) all[i] = i;
    runs.push_back(std::move(all));
    return runs;
  }
  for (int k = 1; k <= nb; ++k) {
    const int i = (first + k) % nb;
    if (!is_door(i)) continue;
    if (is_door(i - 1) && !runs.empty() && runs.back().back() == (i - 1 + nb) % nb)
      runs.back().push_back(i);
    else
      runs.push_back({i});
  }
  return runs;
}

}  // namespace walkplan
