#include "walkplan/regularize.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>

namespace walkplan {

void MrfConfig::validate() const {
  if (gamma_in_to_out < 0 || gamma_out_to_in < 0 || gamma_border < 0)
    throw std::invalid_argument("MrfConfig: penalties must be non-negative");
}

namespace {

bool on(const CellMap& m, int r, int c) { return m.at(r, c) > 0.5; }

/// Dinic max flow on a small static graph.
class MaxFlow {
public:
  explicit MaxFlow(int nodes) : head_(static_cast<std::size_t>(nodes), -1), level_(nodes), iter_(nodes) {}

  void add_edge(int u, int v, double cap, double rev_cap = 0.0) {
    edges_.push_back({v, head_[u], cap});
    head_[u] = static_cast<int>(edges_.size()) - 1;
    edges_.push_back({u, head_[v], rev_cap});
    head_[v] = static_cast<int>(edges_.size()) - 1;
  }

  double run(int s, int t) {
    double flow = 0.0;
    while (bfs(s, t)) {
      std::copy(head_.begin(), head_.end(), iter_.begin());
      while (true) {
        const double f = dfs(s, t, std::numeric_limits<double>::infinity());
        if (f <= kEps) break;
        flow += f;
      }
    }
    return flow;
  }

  /// Nodes reachable from s in the residual graph.
  std::vector<char> source_side(int s) const {
    std::vector<char> seen(head_.size(), 0);
    std::vector<int> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int e = head_[u]; e >= 0; e = edges_[e].next)
        if (edges_[e].cap > kEps && !seen[edges_[e].to]) {
          seen[edges_[e].to] = 1;
          stack.push_back(edges_[e].to);
        }
    }
    return seen;
  }

private:
  static constexpr double kEps = 1e-12;
  struct Edge {
    int to;
    int next;
    double cap;
  };

  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int e = head_[u]; e >= 0; e = edges_[e].next)
        if (edges_[e].cap > kEps && level_[edges_[e].to] < 0) {
          level_[edges_[e].to] = level_[u] + 1;
          q.push(edges_[e].to);
        }
    }
    return level_[t] >= 0;
  }

  double dfs(int u, int t, double pushed) {
    if (u == t) return pushed;
    for (int& e = iter_[u]; e >= 0; e = edges_[e].next) {
      auto& edge = edges_[e];
      if (edge.cap <= kEps || level_[edge.to] != level_[u] + 1) continue;
      const double got = dfs(edge.to, t, std::min(pushed, edge.cap));
      if (got > kEps) {
        edge.cap -= got;
        edges_[e ^ 1].cap += got;
        return got;
      }
    }
    return 0.0;
  }

  std::vector<Edge> edges_;
  std::vector<int> head_;
  std::vector<int> level_;
  std::vector<int> iter_;
};

}  // namespace

int label_discontinuities(const CellMap& labeling) {
  const int n = labeling.n();
  int count = 0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      if (c + 1 < n && on(labeling, r, c) != on(labeling, r, c + 1)) ++count;
      if (r + 1 < n && on(labeling, r, c) != on(labeling, r + 1, c)) ++count;
    }
  return count;
}

double mrf_energy(const CellMap& labeling, const CellMap& predicted, const MrfConfig& cfg) {
  if (labeling.n() != predicted.n()) throw std::invalid_argument("mrf_energy: shape mismatch");
  double e = 0.0;
  for (std::size_t i = 0; i < labeling.size(); ++i) {
    const bool l = labeling[i] > 0.5, p = predicted[i] > 0.5;
    if (p && !l) e += cfg.gamma_in_to_out;
    if (!p && l) e += cfg.gamma_out_to_in;
  }
  return e + cfg.gamma_border * label_discontinuities(labeling);
}

CellMap mrf_smooth(const CellMap& predicted, const MrfConfig& cfg) {
  cfg.validate();
  const int n = predicted.n();
  const int cells = n * n;
  const int source = cells, sink = cells + 1;
  MaxFlow flow(cells + 2);
  for (int i = 0; i < cells; ++i) {
    const bool p = predicted[i] > 0.5;
    // Source side means IN: the s->i edge is cut when i ends up OUT, i->t when IN.
    const double cost_out = p ? cfg.gamma_in_to_out : 0.0;
    const double cost_in = p ? 0.0 : cfg.gamma_out_to_in;
    if (cost_out > 0) flow.add_edge(source, i, cost_out);
    if (cost_in > 0) flow.add_edge(i, sink, cost_in);
  }
  if (cfg.gamma_border > 0)
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        const int i = r * n + c;
        if (c + 1 < n) flow.add_edge(i, i + 1, cfg.gamma_border, cfg.gamma_border);
        if (r + 1 < n) flow.add_edge(i, i + n, cfg.gamma_border, cfg.gamma_border);
      }
  flow.run(source, sink);
  const auto side = flow.source_side(source);
  CellMap out(n);
  for (int i = 0; i < cells; ++i) out[i] = side[i] ? 1.0 : 0.0;
  return out;
}

CellMap repair_connectivity(const CellMap& mask) {
  const int n = mask.n();
  std::vector<int> labels;
  const int count = label_components(mask, labels);
  if (count == 0) throw EmptyInteriorError();
  std::vector<int> sizes(static_cast<std::size_t>(count), 0);
  for (int l : labels)
    if (l >= 0) ++sizes[l];
  const int keep = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());

  // Exterior flood fill from outside the frame.
  CellMap padded(n + 2, 1.0);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) padded.at(r + 1, c + 1) = labels[r * n + c] == keep ? 0.0 : 1.0;
  std::vector<int> outside;
  label_components(padded, outside);
  CellMap out(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      // Component 0 contains the padding ring.
      const bool exterior = outside[(r + 1) * (n + 2) + c + 1] == 0;
      out.at(r, c) = exterior ? 0.0 : 1.0;
    }
  return out;
}

CellMap clean_isolated_cells(const CellMap& map, double target) {
  const int n = map.n();
  CellMap out = map;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      if (map.at(r, c) != target) continue;
      const bool has_same = (map.contains(r - 1, c) && map.at(r - 1, c) == target) ||
                            (map.contains(r + 1, c) && map.at(r + 1, c) == target) ||
                            (map.contains(r, c - 1) && map.at(r, c - 1) == target) ||
                            (map.contains(r, c + 1) && map.at(r, c + 1) == target);
      if (!has_same) out.at(r, c) = 1.0 - target;
    }
  return out;
}

std::vector<SegmentLabel> clean_isolated_door_nodes(const std::vector<SegmentLabel>& labels) {
  const int nb = static_cast<int>(labels.size());
  std::vector<SegmentLabel> out = labels;
  for (int i = 0; i < nb; ++i) {
    if (labels[i] != SegmentLabel::Door) continue;
    const auto prev = labels[(i + nb - 1) % nb], next = labels[(i + 1) % nb];
    if (prev == SegmentLabel::Wall && next == SegmentLabel::Wall) out[i] = SegmentLabel::Wall;
  }
  return out;
}

std::vector<SegmentLabel> normalize_door_width(const BoundaryLoop& loop, const std::vector<SegmentLabel>& labels,
                                               int width) {
  const int nb = loop.size();
  if (static_cast<int>(labels.size()) != nb) throw std::invalid_argument("normalize_door_width: label count");
  if (width < 1) throw std::invalid_argument("normalize_door_width: width must be positive");
  const auto runs = wall_runs(loop);
  const auto run_of = wall_run_of(loop, runs);
  std::vector<char> taken(static_cast<std::size_t>(nb), 0);

  for (const auto& door : door_runs(labels)) {
    // Host: the wall run holding most of the door (earliest on ties).
    std::vector<int> votes(runs.size(), 0);
    for (int p : door) ++votes[run_of[p]];
    int host = run_of[door.front()];
    for (int p : door)
      if (votes[run_of[p]] > votes[host]) host = run_of[p];
    const WallRun& wall = runs[host];
    int a = wall.length, b = -1;
    for (int p : door) {
      if (run_of[p] != host) continue;
      const int local = (p - wall.start + nb) % nb;
      a = std::min(a, local);
      b = std::max(b, local);
    }
    const int len = b - a + 1;
    const int w = std::min(width, wall.length);
    const int diff = len - w;
    const int floor_half = diff >= 0 ? diff / 2 : -((-diff + 1) / 2);
    const int preferred = std::clamp(a + floor_half, 0, wall.length - w);

    auto fits = [&](int start) {
      for (int k = -1; k <= w; ++k) {
        const int p = (wall.start + start + k + nb) % nb;
        if (taken[p]) return false;
      }
      return true;
    };
    std::vector<int> candidates(static_cast<std::size_t>(wall.length - w + 1));
    std::iota(candidates.begin(), candidates.end(), 0);
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](int x, int y) { return std::abs(x - preferred) < std::abs(y - preferred); });
    for (int start : candidates) {
      if (!fits(start)) continue;
      for (int k = 0; k < w; ++k) taken[(wall.start + start + k) % nb] = 1;
      break;
    }
  }
  std::vector<SegmentLabel> out(static_cast<std::size_t>(nb), SegmentLabel::Wall);
  for (int i = 0; i < nb; ++i)
    if (taken[i]) out[i] = SegmentLabel::Door;
  return out;
}

}  // namespace walkplan
