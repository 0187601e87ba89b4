#include "walkplan/gen.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "walkplan/boundary.hpp"
#include "walkplan/rng.hpp"

namespace walkplan {

void GenConfig::validate() const {
  if (n <= 0 || !(cell_size_m > 0)) throw std::invalid_argument("GenConfig: bad grid");
  if (!(min_side_m >= 3.0) || max_side_m < min_side_m) throw std::invalid_argument("GenConfig: side range must satisfy 3 m <= min <= max");
  if (std::lround(max_side_m / cell_size_m) > n) throw std::invalid_argument("GenConfig: room does not fit the grid");
  if (max_concavities < 0) throw std::invalid_argument("GenConfig: negative concavity count");
  if (door_count_range.first < 1 || door_count_range.second < door_count_range.first)
    throw std::invalid_argument("GenConfig: door count range");
  if (furniture_count_range.first < 1 || furniture_count_range.second < furniture_count_range.first)
    throw std::invalid_argument("GenConfig: furniture count range");
  if (!(min_furniture_side_m > 0) || max_furniture_side_m < min_furniture_side_m)
    throw std::invalid_argument("GenConfig: furniture size range");
  if (door_width < 1) throw std::invalid_argument("GenConfig: door width");
}

namespace {

/// Cells whose 8-neighborhood lies entirely inside `mask`.
CellMap erode8(const CellMap& mask) {
  const int n = mask.n();
  CellMap out(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      bool all = true;
      for (int dr = -1; dr <= 1 && all; ++dr)
        for (int dc = -1; dc <= 1 && all; ++dc) all = mask.get_or(r + dr, c + dc, 0.0) > 0.5;
      out.at(r, c) = all ? 1.0 : 0.0;
    }
  return out;
}

bool single_component(const CellMap& mask) {
  std::vector<int> labels;
  return label_components(mask, labels) == 1;
}

bool footprint_ok(const CellMap& mask) {
  CellMap probe = mask;
  Dfpg g(mask.n(), 1.0);
  for (int r = 0; r < mask.n(); ++r)
    for (int c = 0; c < mask.n(); ++c)
      if (mask.at(r, c) > 0.5) g.set_cell(r, c, CellLabel::In);
  g.label_walls_from_cells();
  return validate_single_room(g).empty() && single_component(erode8(mask));
}

int cells_from_m(double m, double cell) { return std::max(1, static_cast<int>(std::lround(m / cell))); }

struct Rect {
  int r0, c0, h, w;
};

std::optional<CellMap> make_footprint(const GenConfig& cfg, Rng& rng) {
  const int n = cfg.n;
  const int lo = cells_from_m(cfg.min_side_m, cfg.cell_size_m);
  const int hi = cells_from_m(cfg.max_side_m, cfg.cell_size_m);
  const int h = rng.uniform_int(lo, hi);
  const int w = rng.uniform_int(lo, hi);
  const int r0 = (n - h >= 2) ? rng.uniform_int(1, n - 1 - h) : 0;
  const int c0 = (n - w >= 2) ? rng.uniform_int(1, n - 1 - w) : 0;
  CellMap mask(n);
  for (int r = r0; r < r0 + h; ++r)
    for (int c = c0; c < c0 + w; ++c) mask.at(r, c) = 1.0;
  if (!footprint_ok(mask)) return std::nullopt;

  const int notches = rng.uniform_int(0, cfg.max_concavities);
  for (int k = 0; k < notches; ++k) {
    Rect cut{};
    if (rng.bernoulli(0.6)) {
      const int nh = rng.uniform_int(2, std::max(2, h / 2));
      const int nw = rng.uniform_int(2, std::max(2, w / 2));
      const int corner = rng.uniform_int(0, 3);
      cut = {corner < 2 ? r0 : r0 + h - nh, (corner % 2 == 0) ? c0 : c0 + w - nw, nh, nw};
    } else {
      const int side = rng.uniform_int(0, 3);
      const bool horizontal_side = side < 2;
      const int along = horizontal_side ? w : h;
      const int across = horizontal_side ? h : w;
      if (along < 7) continue;
      const int len = rng.uniform_int(2, std::max(2, along / 3));
      const int depth = rng.uniform_int(2, std::max(2, across / 3));
      const int pos = rng.uniform_int(2, along - 2 - len);
      if (horizontal_side)
        cut = {side == 0 ? r0 : r0 + h - depth, c0 + pos, depth, len};
      else
        cut = {r0 + pos, side == 2 ? c0 : c0 + w - depth, len, depth};
    }
    CellMap trial = mask;
    for (int r = cut.r0; r < cut.r0 + cut.h; ++r)
      for (int c = cut.c0; c < cut.c0 + cut.w; ++c)
        if (trial.contains(r, c)) trial.at(r, c) = 0.0;
    if (footprint_ok(trial)) mask = trial;
  }
  return mask;
}

bool place_doors(Dfpg& g, const GenConfig& cfg, Rng& rng) {
  const auto loop = extract_boundary_loop(derive_interior_map(g));
  const auto runs = wall_runs(loop);
  const int nb = loop.size();
  const int width = cfg.door_width;
  std::vector<char> taken(static_cast<std::size_t>(nb), 0);
  std::vector<double> weights;
  for (const auto& run : runs) weights.push_back(run.length >= width + 2 ? run.length - width - 1 : 0.0);
  if (std::all_of(weights.begin(), weights.end(), [](double x) { return x <= 0; })) return false;

  const int want = rng.uniform_int(cfg.door_count_range.first, cfg.door_count_range.second);
  int placed = 0;
  for (int attempt = 0; attempt < 20 * want && placed < want; ++attempt) {
    const auto& run = runs[rng.weighted_index(weights)];
    const int start = rng.uniform_int(1, run.length - 1 - width);
    bool free = true;
    for (int k = -2; k < width + 2 && free; ++k) free = !taken[(run.start + start + k + nb) % nb];
    if (!free) continue;
    for (int k = 0; k < width; ++k) taken[(run.start + start + k) % nb] = 1;
    ++placed;
  }
  if (placed < want) return false;
  for (int i = 0; i < nb; ++i)
    if (taken[i]) g.set_segment(loop[i].seg, SegmentLabel::Door);
  return true;
}

bool free_space_ok(const Dfpg& g) {
  const CellMap free = derive_free_map(g);
  if (!single_component(free)) return false;
  const CellMap buffered = erode8(free);
  return buffered.count_set() > 0 && single_component(buffered);
}

bool place_furniture(Dfpg& g, const GenConfig& cfg, Rng& rng) {
  const int n = g.n();
  const auto loop = extract_boundary_loop(derive_interior_map(g));
  const auto runs = wall_runs(loop);
  std::vector<double> run_weights;
  for (const auto& run : runs) run_weights.push_back(run.length);

  CellMap blocked(n);
  for (const auto& cell : door_front_cells(g))
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc)
        if (blocked.contains(cell.row + dr, cell.col + dc)) blocked.at(cell.row + dr, cell.col + dc) = 1.0;

  int r_min = n, r_max = -1, c_min = n, c_max = -1;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (g.cell(r, c) != CellLabel::Out) {
        r_min = std::min(r_min, r), r_max = std::max(r_max, r);
        c_min = std::min(c_min, c), c_max = std::max(c_max, c);
      }

  const int lo = cells_from_m(cfg.min_furniture_side_m, cfg.cell_size_m);
  const int hi = std::max(lo, cells_from_m(cfg.max_furniture_side_m, cfg.cell_size_m));
  const int want = rng.uniform_int(cfg.furniture_count_range.first, cfg.furniture_count_range.second);
  int placed = 0;
  for (int attempt = 0; attempt < 30 * want && placed < want; ++attempt) {
    const int a = rng.uniform_int(lo, hi);
    const int b = rng.uniform_int(lo, hi);
    std::vector<Cell> cells;
    if (rng.bernoulli(cfg.wall_furniture_prob)) {
      const auto& run = runs[rng.weighted_index(run_weights)];
      if (run.length < a) continue;
      const int offset = rng.uniform_int(0, run.length - a);
      const auto in = loop[run.start].inward();
      for (int k = 0; k < a; ++k) {
        const Cell base = loop[(run.start + offset + k) % loop.size()].interior_cell();
        for (int d = 0; d < b; ++d) cells.push_back({base.row + d * in[1], base.col + d * in[0]});
      }
    } else {
      if (r_max - r_min + 1 < a || c_max - c_min + 1 < b) continue;
      const int r0 = rng.uniform_int(r_min, r_max - a + 1);
      const int c0 = rng.uniform_int(c_min, c_max - b + 1);
      for (int r = r0; r < r0 + a; ++r)
        for (int c = c0; c < c0 + b; ++c) cells.push_back({r, c});
    }
    bool ok = true;
    for (const auto& cell : cells) {
      if (g.cell_or_out(cell.row, cell.col) != CellLabel::In || blocked.at(cell.row, cell.col) > 0.5) {
        ok = false;
        break;
      }
      // Keep a one-cell gap to existing furniture so blocks stay separate.
      for (int dr = -1; dr <= 1 && ok; ++dr)
        for (int dc = -1; dc <= 1 && ok; ++dc)
          if (g.cell_or_out(cell.row + dr, cell.col + dc) == CellLabel::Furn) ok = false;
      if (!ok) break;
    }
    if (!ok) continue;
    Dfpg trial = g;
    for (const auto& cell : cells) trial.set_cell(cell.row, cell.col, CellLabel::Furn);
    if (!free_space_ok(trial)) continue;
    g = std::move(trial);
    ++placed;
  }
  return placed > 0;
}

}  // namespace

std::vector<Cell> door_front_cells(const Dfpg& g) {
  std::vector<Cell> out;
  const CellMap interior = derive_interior_map(g);
  for (const auto& s : boundary_segments(interior)) {
    if (g.segment(s) != SegmentLabel::Door) continue;
    const auto [a, b] = incident_cells(s);
    out.push_back(interior.get_or(a.row, a.col, 0.0) > 0.5 ? a : b);
  }
  return out;
}

Dfpg generate_room(const GenConfig& cfg) {
  cfg.validate();
  const Rng root(cfg.seed);
  for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
    Rng rng = root.split(static_cast<std::uint64_t>(attempt));
    const auto footprint = make_footprint(cfg, rng);
    if (!footprint) continue;
    Dfpg g(cfg.n, cfg.cell_size_m);
    for (int r = 0; r < cfg.n; ++r)
      for (int c = 0; c < cfg.n; ++c)
        if (footprint->at(r, c) > 0.5) g.set_cell(r, c, CellLabel::In);
    g.label_walls_from_cells();
    if (!place_doors(g, cfg, rng)) continue;
    if (!place_furniture(g, cfg, rng)) continue;
    if (!validate_single_room(g).empty()) continue;
    return g;
  }
  throw GenerationError();
}

}  // namespace walkplan
