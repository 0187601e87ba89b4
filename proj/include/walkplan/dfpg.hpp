#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace walkplan {

enum class CellLabel : std::uint8_t { Out, In, Furn };
enum class SegmentLabel : std::uint8_t { Door, Wall, None };
enum class Axis : std::uint8_t { Horizontal, Vertical };

/// Index of one inter-cell segment.
///
/// Horizontal segment (row, col) is the top edge of cell (row, col), with
/// row in [0, n]. Vertical segment (row, col) is the left edge of cell
/// (row, col), with col in [0, n].
struct SegmentRef {
  Axis axis = Axis::Horizontal;
  int row = 0;
  int col = 0;

  friend auto operator<=>(const SegmentRef&, const SegmentRef&) = default;
};

struct Cell {
  int row = 0;
  int col = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Scalar field over the n x n cells, row-major with row 0 at the top.
class CellMap {
public:
  CellMap() = default;
  explicit CellMap(int n, double fill = 0.0);

  int n() const { return n_; }
  double& at(int row, int col) { return values_[index(row, col)]; }
  double at(int row, int col) const { return values_[index(row, col)]; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  bool contains(int row, int col) const { return row >= 0 && col >= 0 && row < n_ && col < n_; }
  /// Value at (row, col), or `outside` beyond the grid.
  double get_or(int row, int col, double outside) const {
    return contains(row, col) ? at(row, col) : outside;
  }

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  double sum() const;
  bool is_binary() const;
  /// Number of cells with value > 0.5.
  int count_set() const;

  friend bool operator==(const CellMap&, const CellMap&) = default;

private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(col);
  }
  int n_ = 0;
  std::vector<double> values_;
};

/// Ordered polyline in meters; x grows with the column, y with the row.
struct Trajectory {
  std::vector<Point> points;
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Discrete floor plan grid: labeled cells plus labeled horizontal and
/// vertical boundary segments.
class Dfpg {
public:
  Dfpg() = default;
  Dfpg(int n, double cell_size_m);

  int n() const { return n_; }
  double cell_size_m() const { return cell_size_m_; }

  CellLabel cell(int row, int col) const { return cells_[cell_index(row, col)]; }
  void set_cell(int row, int col, CellLabel label) { cells_[cell_index(row, col)] = label; }
  /// Label of the cell, OUT beyond the grid.
  CellLabel cell_or_out(int row, int col) const;

  SegmentLabel segment(const SegmentRef& s) const;
  void set_segment(const SegmentRef& s, SegmentLabel label);
  bool contains(const SegmentRef& s) const;

  const std::vector<CellLabel>& cells() const { return cells_; }
  const std::vector<SegmentLabel>& h_segments() const { return h_; }
  const std::vector<SegmentLabel>& v_segments() const { return v_; }

  /// Relabels every segment: WALL on interior/exterior transitions, NONE elsewhere.
  void label_walls_from_cells();

  friend bool operator==(const Dfpg&, const Dfpg&) = default;

private:
  std::size_t cell_index(int row, int col) const;
  int n_ = 0;
  double cell_size_m_ = 0.25;
  std::vector<CellLabel> cells_;
  std::vector<SegmentLabel> h_;  // (n+1) x n
  std::vector<SegmentLabel> v_;  // n x (n+1)
};

inline bool is_interior(CellLabel l) { return l != CellLabel::Out; }

/// The two cells a segment separates; the first is above/left of it.
std::pair<Cell, Cell> incident_cells(const SegmentRef& s);

/// Interior map: 1 for IN and FURN cells.
CellMap derive_interior_map(const Dfpg& g);
/// Free-space map: 1 for IN cells only.
CellMap derive_free_map(const Dfpg& g);
/// Furniture map: 1 for FURN cells.
CellMap derive_furniture_map(const Dfpg& g);

/// Linear-ramp inverse distance to the trajectory polyline, sampled at cell
/// centers: max(0, 1 - d / cutoff_m).
CellMap inverse_distance_map(int n, double cell_size_m, const Trajectory& traj, double cutoff_m = 0.5);
CellMap inverse_distance_map(const Dfpg& g, const Trajectory& traj, double cutoff_m = 0.5);

/// Segments whose two incident cells differ in the mask (cells beyond the
/// grid count as 0). Sorted.
std::vector<SegmentRef> boundary_segments(const CellMap& mask);

/// Cell-center position in meters.
Point cell_center(const Cell& c, double cell_size_m);
/// Cell containing a point given in meters (clamped to the grid).
Cell cell_of(const Point& p, double cell_size_m, int n);

/// Euclidean distance from p to the segment [a, b].
double point_segment_distance(const Point& p, const Point& a, const Point& b);
/// Minimum distance between segments [a, b] and [c, d].
double segment_segment_distance(const Point& a, const Point& b, const Point& c, const Point& d);
/// Endpoints of a grid segment in cell units (x = column, y = row).
std::pair<Point, Point> segment_endpoints(const SegmentRef& s);

/// Problems with the single-room invariants; empty when valid.
std::vector<std::string> validate_single_room(const Dfpg& g);

/// 4-connected components of cells with value > 0.5, as a label map
/// (-1 for background). Returns the number of components.
int label_components(const CellMap& mask, std::vector<int>& labels);

}  // namespace walkplan
