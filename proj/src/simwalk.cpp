#include "walkplan/simwalk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <tuple>

#include "walkplan/boundary.hpp"

namespace walkplan {

void SimConfig::validate() const {
  if (!(strat_cell_m > 0)) throw std::invalid_argument("SimConfig: strat_cell_m must be positive");
  if (wall_buffer_cells < 0) throw std::invalid_argument("SimConfig: wall_buffer_cells must be >= 0");
  if (loop_points < 1) throw std::invalid_argument("SimConfig: loop_points must be >= 1");
}

CellMap erode(const CellMap& mask, int radius) {
  const int n = mask.n();
  CellMap out(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      bool all = true;
      for (int dr = -radius; dr <= radius && all; ++dr)
        for (int dc = -radius; dc <= radius && all; ++dc) all = mask.get_or(r + dr, c + dc, 0.0) > 0.5;
      out.at(r, c) = all ? 1.0 : 0.0;
    }
  return out;
}

namespace {

/// 1D squared distance transform (lower envelope of parabolas).
void edt_1d(const std::vector<double>& f, std::vector<double>& d) {
  const int n = static_cast<int>(f.size());
  std::vector<int> v(static_cast<std::size_t>(n));
  std::vector<double> z(static_cast<std::size_t>(n) + 1);
  constexpr double inf = std::numeric_limits<double>::infinity();
  int k = 0;
  v[0] = 0;
  z[0] = -inf;
  z[1] = inf;
  for (int q = 1; q < n; ++q) {
    if (f[q] == inf) continue;
    if (f[v[k]] == inf) {
      v[k] = q;
      continue;
    }
    double s;
    while (true) {
      s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
      if (s <= z[k] && k > 0) {
        --k;
        continue;
      }
      break;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = inf;
  }
  k = 0;
  d.assign(static_cast<std::size_t>(n), inf);
  if (f[v[0]] == inf) return;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    d[q] = (q - v[k]) * static_cast<double>(q - v[k]) + f[v[k]];
  }
}

constexpr int kDirs[8][2] = {{-1, 0}, {0, 1}, {1, 0}, {0, -1}, {-1, 1}, {1, 1}, {1, -1}, {-1, -1}};

double cell_distance(const Cell& a, const Cell& b) {
  return std::hypot(static_cast<double>(a.row - b.row), static_cast<double>(a.col - b.col));
}

}  // namespace

CellMap distance_to_occupied(const CellMap& occupied) {
  const int n = occupied.n();
  const int m = n + 2;
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> grid(static_cast<std::size_t>(m) * m, 0.0);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) grid[(r + 1) * m + c + 1] = occupied.at(r, c) > 0.5 ? 0.0 : inf;
  std::vector<double> f(static_cast<std::size_t>(m)), d;
  for (int c = 0; c < m; ++c) {
    for (int r = 0; r < m; ++r) f[r] = grid[r * m + c];
    edt_1d(f, d);
    for (int r = 0; r < m; ++r) grid[r * m + c] = d[r];
  }
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) f[c] = grid[r * m + c];
    edt_1d(f, d);
    for (int c = 0; c < m; ++c) grid[r * m + c] = d[c];
  }
  CellMap out(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out.at(r, c) = std::sqrt(grid[(r + 1) * m + c + 1]);
  return out;
}

std::vector<Point> stratified_samples(const CellMap& free, const CellMap& occupied, double cell_size_m,
                                      const SimConfig& cfg, Rng& rng) {
  cfg.validate();
  const int n = free.n();
  const int block = std::max(1, static_cast<int>(std::lround(cfg.strat_cell_m / cell_size_m)));
  const CellMap dist = distance_to_occupied(occupied);
  std::vector<Point> out;
  for (int br = 0; br < n; br += block)
    for (int bc = 0; bc < n; bc += block) {
      std::vector<Cell> cells;
      std::vector<double> weights;
      for (int r = br; r < std::min(n, br + block); ++r)
        for (int c = bc; c < std::min(n, bc + block); ++c)
          if (free.at(r, c) > 0.5) {
            cells.push_back({r, c});
            weights.push_back(dist.at(r, c));
          }
      if (cells.empty()) continue;
      if (std::all_of(weights.begin(), weights.end(), [](double w) { return w <= 0; }))
        std::fill(weights.begin(), weights.end(), 1.0);
      out.push_back(cell_center(cells[rng.weighted_index(weights)], cell_size_m));
    }
  if (out.empty()) throw SimulationError("no free space");
  return out;
}

double path_length(const std::vector<Point>& points) {
  double total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i)
    total += std::hypot(points[i].x - points[i - 1].x, points[i].y - points[i - 1].y);
  return total;
}

std::vector<Point> order_tsp(const std::vector<Point>& points, Rng& rng) {
  const int n = static_cast<int>(points.size());
  if (n <= 1) return points;
  auto dist = [&](int a, int b) { return std::hypot(points[a].x - points[b].x, points[a].y - points[b].y); };

  std::vector<int> tour{rng.uniform_int(0, n - 1)};
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  used[tour[0]] = 1;
  while (static_cast<int>(tour.size()) < n) {
    int best = -1;
    for (int j = 0; j < n; ++j)
      if (!used[j] && (best < 0 || dist(tour.back(), j) < dist(tour.back(), best))) best = j;
    used[best] = 1;
    tour.push_back(best);
  }

  bool improved = true;
  while (improved) {
    improved = false;
    for (int i = 0; i < n - 1; ++i)
      for (int j = i + 1; j < n; ++j) {
        double before = 0.0, after = 0.0;
        if (i > 0) {
          before += dist(tour[i - 1], tour[i]);
          after += dist(tour[i - 1], tour[j]);
        }
        if (j < n - 1) {
          before += dist(tour[j], tour[j + 1]);
          after += dist(tour[i], tour[j + 1]);
        }
        if (after < before - 1e-12) {
          std::reverse(tour.begin() + i, tour.begin() + j + 1);
          improved = true;
        }
      }
  }
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int idx : tour) out.push_back(points[idx]);
  return out;
}

std::vector<Cell> grid_shortest_path(const CellMap& passable, const Cell& a, const Cell& b) {
  const int n = passable.n();
  auto ok = [&](int r, int c) { return passable.get_or(r, c, 0.0) > 0.5; };
  if (!ok(a.row, a.col) || !ok(b.row, b.col)) throw SimulationError("disconnected");
  if (a == b) return {a};
  auto heuristic = [&](int r, int c) {
    const double dr = std::abs(r - b.row), dc = std::abs(c - b.col);
    return std::max(dr, dc) + (std::numbers::sqrt2 - 1.0) * std::min(dr, dc);
  };
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> cost(static_cast<std::size_t>(n) * n, inf);
  std::vector<int> parent(static_cast<std::size_t>(n) * n, -1);
  std::vector<char> closed(static_cast<std::size_t>(n) * n, 0);
  using Entry = std::tuple<double, std::uint64_t, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::uint64_t seq = 0;
  const int start = a.row * n + a.col, goal = b.row * n + b.col;
  cost[start] = 0.0;
  open.emplace(heuristic(a.row, a.col), seq++, start);
  while (!open.empty()) {
    const auto [f, s, u] = open.top();
    open.pop();
    if (closed[u]) continue;
    closed[u] = 1;
    if (u == goal) break;
    const int r = u / n, c = u % n;
    for (int k = 0; k < 8; ++k) {
      const int nr = r + kDirs[k][0], nc = c + kDirs[k][1];
      if (!ok(nr, nc)) continue;
      const bool diagonal = k >= 4;
      if (diagonal && (!ok(r + kDirs[k][0], c) || !ok(r, c + kDirs[k][1]))) continue;
      const int v = nr * n + nc;
      const double cand = cost[u] + (diagonal ? std::numbers::sqrt2 : 1.0);
      if (cand < cost[v]) {
        cost[v] = cand;
        parent[v] = u;
        open.emplace(cand + heuristic(nr, nc), seq++, v);
      }
    }
  }
  if (!closed[goal]) throw SimulationError("disconnected");
  std::vector<Cell> path;
  for (int v = goal; v != -1; v = parent[v]) path.push_back({v / n, v % n});
  std::reverse(path.begin(), path.end());
  return path;
}

double cell_path_cost(const std::vector<Cell>& path) {
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) total += cell_distance(path[i - 1], path[i]);
  return total;
}

std::vector<std::vector<Cell>> furniture_loops(const Dfpg& gt, const SimConfig& cfg, Rng& rng) {
  cfg.validate();
  const int n = gt.n();
  const CellMap furn = derive_furniture_map(gt);
  std::vector<int> labels;
  const int regions = label_components(furn, labels);
  std::vector<std::array<int, 4>> box(static_cast<std::size_t>(regions), {n, -1, n, -1});  // r0, r1, c0, c1
  for (int i = 0; i < n * n; ++i) {
    if (labels[i] < 0) continue;
    auto& b = box[labels[i]];
    b[0] = std::min(b[0], i / n), b[1] = std::max(b[1], i / n);
    b[2] = std::min(b[2], i % n), b[3] = std::max(b[3], i % n);
  }
  std::vector<std::vector<Cell>> loops;
  for (const auto& [r0, r1, c0, c1] : box) {
    std::vector<Cell> pts;
    bool keep = true;
    for (int k = 0; k < cfg.loop_points; ++k) {
      const int side = (k * 4) / cfg.loop_points;
      Cell p{};
      switch (side) {
        case 0: p = {r0 - 1, rng.uniform_int(c0, c1)}; break;
        case 1: p = {rng.uniform_int(r0, r1), c1 + 1}; break;
        case 2: p = {r1 + 1, rng.uniform_int(c0, c1)}; break;
        default: p = {rng.uniform_int(r0, r1), c0 - 1}; break;
      }
      if (gt.cell_or_out(p.row, p.col) != CellLabel::In) keep = false;
      pts.push_back(p);
    }
    if (keep) loops.push_back(std::move(pts));
  }
  return loops;
}

std::vector<Cell> door_attachment_cells(const Dfpg& gt) {
  const CellMap free = derive_free_map(gt);
  const auto loop = extract_boundary_loop(derive_interior_map(gt));
  std::vector<Cell> out;
  for (const auto& run : door_runs(loop_labels(loop, gt))) {
    Cell cell = loop[run[run.size() / 2]].interior_cell();
    if (free.at(cell.row, cell.col) <= 0.5) {
      // Door front blocked: fall back to the nearest free cell.
      double best = std::numeric_limits<double>::infinity();
      Cell found = cell;
      for (int r = 0; r < free.n(); ++r)
        for (int c = 0; c < free.n(); ++c)
          if (free.at(r, c) > 0.5 && cell_distance({r, c}, cell) < best) {
            best = cell_distance({r, c}, cell);
            found = {r, c};
          }
      cell = found;
    }
    out.push_back(cell);
  }
  return out;
}

namespace {

void append_path(std::vector<Cell>& route, const std::vector<Cell>& leg) {
  for (std::size_t i = route.empty() ? 0 : 1; i < leg.size(); ++i) route.push_back(leg[i]);
}

std::size_t nearest_route_index(const std::vector<Cell>& route, const Cell& target) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < route.size(); ++i)
    if (cell_distance(route[i], target) < cell_distance(route[best], target)) best = i;
  return best;
}

/// Replaces route[at] by the detour, which starts and ends at route[at].
void splice(std::vector<Cell>& route, std::size_t at, const std::vector<Cell>& detour) {
  route.insert(route.begin() + static_cast<std::ptrdiff_t>(at) + 1, detour.begin() + 1, detour.end());
}

}  // namespace

Trajectory simulate_walk(const Dfpg& gt, const SimConfig& cfg) {
  cfg.validate();
  const Rng root(cfg.seed);
  Rng sample_rng = root.split(1), tsp_rng = root.split(2), loop_rng = root.split(3);
  const int n = gt.n();
  const double cs = gt.cell_size_m();

  const CellMap free = derive_free_map(gt);
  CellMap occupied(n);
  for (std::size_t i = 0; i < free.size(); ++i) occupied[i] = 1.0 - free[i];
  const CellMap buffered = erode(free, cfg.wall_buffer_cells);

  const auto waypoints = order_tsp(stratified_samples(buffered, occupied, cs, cfg, sample_rng), tsp_rng);
  auto leg = [&](const Cell& a, const Cell& b) {
    try {
      return grid_shortest_path(buffered, a, b);
    } catch (const SimulationError&) {
      return grid_shortest_path(free, a, b);
    }
  };

  std::vector<Cell> route{cell_of(waypoints.front(), cs, n)};
  for (std::size_t i = 1; i < waypoints.size(); ++i) append_path(route, leg(route.back(), cell_of(waypoints[i], cs, n)));

  for (const auto& loop : furniture_loops(gt, cfg, loop_rng)) {
    std::size_t best_t = 0, best_k = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < loop.size(); ++k) {
      const std::size_t t = nearest_route_index(route, loop[k]);
      const double d = cell_distance(route[t], loop[k]);
      if (d < best) best = d, best_t = t, best_k = k;
    }
    std::vector<Cell> detour = grid_shortest_path(free, route[best_t], loop[best_k]);
    for (std::size_t step = 1; step <= loop.size(); ++step)
      append_path(detour, grid_shortest_path(free, detour.back(), loop[(best_k + step) % loop.size()]));
    append_path(detour, grid_shortest_path(free, detour.back(), route[best_t]));
    splice(route, best_t, detour);
  }

  for (const auto& door : door_attachment_cells(gt)) {
    const std::size_t t = nearest_route_index(route, door);
    std::vector<Cell> detour = grid_shortest_path(free, route[t], door);
    append_path(detour, grid_shortest_path(free, door, route[t]));
    splice(route, t, detour);
  }

  Trajectory traj;
  for (const auto& cell : route) {
    const Point p = cell_center(cell, cs);
    if (traj.points.empty() || !(traj.points.back() == p)) traj.points.push_back(p);
  }
  if (traj.points.size() == 1) traj.points.push_back(traj.points.front());
  return traj;
}

}  // namespace walkplan
