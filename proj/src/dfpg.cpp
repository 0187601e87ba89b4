#include "walkplan/dfpg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace walkplan {

CellMap::CellMap(int n, double fill) : n_(n), values_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), fill) {
  if (n <= 0) throw std::invalid_argument("CellMap: n must be positive");
}

double CellMap::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

bool CellMap::is_binary() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0 || v == 1.0; });
}

int CellMap::count_set() const {
  return static_cast<int>(std::count_if(values_.begin(), values_.end(), [](double v) { return v > 0.5; }));
}

Dfpg::Dfpg(int n, double cell_size_m)
    : n_(n),
      cell_size_m_(cell_size_m),
      cells_(static_cast<std::size_t>(n) * n, CellLabel::Out),
      h_(static_cast<std::size_t>(n + 1) * n, SegmentLabel::None),
      v_(static_cast<std::size_t>(n) * (n + 1), SegmentLabel::None) {
  if (n <= 0) throw std::invalid_argument("Dfpg: n must be positive");
  if (!(cell_size_m > 0.0)) throw std::invalid_argument("Dfpg: cell size must be positive");
}

std::size_t Dfpg::cell_index(int row, int col) const {
  if (row < 0 || col < 0 || row >= n_ || col >= n_) throw std::out_of_range("Dfpg: cell out of range");
  return static_cast<std::size_t>(row) * n_ + col;
}

CellLabel Dfpg::cell_or_out(int row, int col) const {
  if (row < 0 || col < 0 || row >= n_ || col >= n_) return CellLabel::Out;
  return cells_[static_cast<std::size_t>(row) * n_ + col];
}

bool Dfpg::contains(const SegmentRef& s) const {
  if (s.axis == Axis::Horizontal) return s.row >= 0 && s.row <= n_ && s.col >= 0 && s.col < n_;
  return s.row >= 0 && s.row < n_ && s.col >= 0 && s.col <= n_;
}

SegmentLabel Dfpg::segment(const SegmentRef& s) const {
  if (!contains(s)) throw std::out_of_range("Dfpg: segment out of range");
  if (s.axis == Axis::Horizontal) return h_[static_cast<std::size_t>(s.row) * n_ + s.col];
  return v_[static_cast<std::size_t>(s.row) * (n_ + 1) + s.col];
}

void Dfpg::set_segment(const SegmentRef& s, SegmentLabel label) {
  if (!contains(s)) throw std::out_of_range("Dfpg: segment out of range");
  if (s.axis == Axis::Horizontal)
    h_[static_cast<std::size_t>(s.row) * n_ + s.col] = label;
  else
    v_[static_cast<std::size_t>(s.row) * (n_ + 1) + s.col] = label;
}

void Dfpg::label_walls_from_cells() {
  std::fill(h_.begin(), h_.end(), SegmentLabel::None);
  std::fill(v_.begin(), v_.end(), SegmentLabel::None);
  for (const auto& s : boundary_segments(derive_interior_map(*this))) set_segment(s, SegmentLabel::Wall);
}

std::pair<Cell, Cell> incident_cells(const SegmentRef& s) {
  if (s.axis == Axis::Horizontal) return {{s.row - 1, s.col}, {s.row, s.col}};
  return {{s.row, s.col - 1}, {s.row, s.col}};
}

namespace {

template <class Pred>
CellMap map_cells(const Dfpg& g, Pred pred) {
  CellMap m(g.n());
  for (int r = 0; r < g.n(); ++r)
    for (int c = 0; c < g.n(); ++c) m.at(r, c) = pred(g.cell(r, c)) ? 1.0 : 0.0;
  return m;
}

}  // namespace

CellMap derive_interior_map(const Dfpg& g) {
  return map_cells(g, [](CellLabel l) { return l == CellLabel::In || l == CellLabel::Furn; });
}

CellMap derive_free_map(const Dfpg& g) {
  return map_cells(g, [](CellLabel l) { return l == CellLabel::In; });
}

CellMap derive_furniture_map(const Dfpg& g) {
  return map_cells(g, [](CellLabel l) { return l == CellLabel::Furn; });
}

double point_segment_distance(const Point& p, const Point& a, const Point& b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
  const double qx = a.x + t * dx - p.x, qy = a.y + t * dy - p.y;
  return std::sqrt(qx * qx + qy * qy);
}

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d) {
  const double d1 = cross(c, d, a), d2 = cross(c, d, b), d3 = cross(a, b, c), d4 = cross(a, b, d);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

}  // namespace

double segment_segment_distance(const Point& a, const Point& b, const Point& c, const Point& d) {
  if (segments_intersect(a, b, c, d)) return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

std::pair<Point, Point> segment_endpoints(const SegmentRef& s) {
  const double x = s.col, y = s.row;
  if (s.axis == Axis::Horizontal) return {{x, y}, {x + 1.0, y}};
  return {{x, y}, {x, y + 1.0}};
}

Point cell_center(const Cell& c, double cell_size_m) {
  return {(c.col + 0.5) * cell_size_m, (c.row + 0.5) * cell_size_m};
}

Cell cell_of(const Point& p, double cell_size_m, int n) {
  const int col = std::clamp(static_cast<int>(std::floor(p.x / cell_size_m)), 0, n - 1);
  const int row = std::clamp(static_cast<int>(std::floor(p.y / cell_size_m)), 0, n - 1);
  return {row, col};
}

CellMap inverse_distance_map(int n, double cell_size_m, const Trajectory& traj, double cutoff_m) {
  if (traj.points.empty()) throw std::invalid_argument("no trajectory");
  if (!(cutoff_m > 0.0)) throw std::invalid_argument("inverse_distance_map: cutoff must be positive");
  CellMap out(n);
  const auto& pts = traj.points;
  // Each polyline segment only touches cells inside its bounding box grown by the cutoff.
  const std::size_t legs = pts.size() == 1 ? 1 : pts.size() - 1;
  std::vector<double> best(out.size(), cutoff_m);
  for (std::size_t i = 0; i < legs; ++i) {
    const Point& a = pts[i];
    const Point& b = pts.size() == 1 ? pts[i] : pts[i + 1];
    const int c0 = std::max(0, static_cast<int>(std::floor((std::min(a.x, b.x) - cutoff_m) / cell_size_m)));
    const int c1 = std::min(n - 1, static_cast<int>(std::floor((std::max(a.x, b.x) + cutoff_m) / cell_size_m)));
    const int r0 = std::max(0, static_cast<int>(std::floor((std::min(a.y, b.y) - cutoff_m) / cell_size_m)));
    const int r1 = std::min(n - 1, static_cast<int>(std::floor((std::max(a.y, b.y) + cutoff_m) / cell_size_m)));
    for (int r = r0; r <= r1; ++r)
      for (int c = c0; c <= c1; ++c) {
        const double d = point_segment_distance(cell_center({r, c}, cell_size_m), a, b);
        auto& slot = best[static_cast<std::size_t>(r) * n + c];
        slot = std::min(slot, d);
      }
  }
  for (std::size_t i = 0; i < best.size(); ++i) out[i] = std::max(0.0, 1.0 - best[i] / cutoff_m);
  return out;
}

CellMap inverse_distance_map(const Dfpg& g, const Trajectory& traj, double cutoff_m) {
  return inverse_distance_map(g.n(), g.cell_size_m(), traj, cutoff_m);
}

std::vector<SegmentRef> boundary_segments(const CellMap& mask) {
  const int n = mask.n();
  auto inside = [&](int r, int c) { return mask.get_or(r, c, 0.0) > 0.5; };
  std::vector<SegmentRef> out;
  for (int r = 0; r <= n; ++r)
    for (int c = 0; c < n; ++c)
      if (inside(r - 1, c) != inside(r, c)) out.push_back({Axis::Horizontal, r, c});
  for (int r = 0; r < n; ++r)
    for (int c = 0; c <= n; ++c)
      if (inside(r, c - 1) != inside(r, c)) out.push_back({Axis::Vertical, r, c});
  return out;
}

int label_components(const CellMap& mask, std::vector<int>& labels) {
  const int n = mask.n();
  labels.assign(mask.size(), -1);
  int count = 0;
  std::vector<int> stack;
  for (int start = 0; start < n * n; ++start) {
    if (mask[start] <= 0.5 || labels[start] >= 0) continue;
    labels[start] = count;
    stack.push_back(start);
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      const int r = i / n, c = i % n;
      const int nbr[4][2] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
      for (const auto& q : nbr) {
        if (!mask.contains(q[0], q[1])) continue;
        const int j = q[0] * n + q[1];
        if (mask[j] > 0.5 && labels[j] < 0) {
          labels[j] = count;
          stack.push_back(j);
        }
      }
    }
    ++count;
  }
  return count;
}

std::vector<std::string> validate_single_room(const Dfpg& g) {
  std::vector<std::string> problems;
  const int n = g.n();
  if (g.cells().size() != static_cast<std::size_t>(n) * n) problems.emplace_back("cell array shape");
  if (g.h_segments().size() != static_cast<std::size_t>(n + 1) * n) problems.emplace_back("h segment array shape");
  if (g.v_segments().size() != static_cast<std::size_t>(n) * (n + 1)) problems.emplace_back("v segment array shape");
  if (!problems.empty()) return problems;

  const CellMap interior = derive_interior_map(g);
  if (interior.count_set() == 0) {
    problems.emplace_back("empty interior");
    return problems;
  }

  const auto boundary = boundary_segments(interior);
  std::vector<SegmentRef> labeled;
  for (int r = 0; r <= n; ++r)
    for (int c = 0; c < n; ++c)
      if (g.segment({Axis::Horizontal, r, c}) != SegmentLabel::None) labeled.push_back({Axis::Horizontal, r, c});
  for (int r = 0; r < n; ++r)
    for (int c = 0; c <= n; ++c)
      if (g.segment({Axis::Vertical, r, c}) != SegmentLabel::None) labeled.push_back({Axis::Vertical, r, c});
  if (labeled != boundary) problems.emplace_back("WALL/DOOR segments differ from interior transitions");

  std::vector<int> labels;
  if (label_components(interior, labels) != 1) problems.emplace_back("interior is not one 4-connected component");

  // Exterior must be 4-connected to the frame; otherwise the boundary has holes or pinch points.
  CellMap exterior(n);
  for (std::size_t i = 0; i < interior.size(); ++i) exterior[i] = 1.0 - interior[i];
  CellMap padded(n + 2, 1.0);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) padded.at(r + 1, c + 1) = exterior.at(r, c);
  if (label_components(padded, labels) != 1) problems.emplace_back("exterior not connected to the grid frame (hole)");
  return problems;
}

}  // namespace walkplan
