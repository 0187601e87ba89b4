#pragma once

#include <string>
#include <vector>

#include "walkplan/dfpg.hpp"
#include "walkplan/rng.hpp"

namespace walkplan::fixture {

/// Square mask from rows of '#' (set) and '.' (clear).
inline CellMap mask(const std::vector<std::string>& rows) {
  const int n = static_cast<int>(rows.size());
  CellMap m(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m.at(r, c) = rows[r].at(c) == '#' ? 1.0 : 0.0;
  return m;
}

/// Room from rows of 'I', 'F' and '.', walls on every interior transition.
inline Dfpg room(const std::vector<std::string>& rows, double cell_size_m = 0.25) {
  const int n = static_cast<int>(rows.size());
  Dfpg g(n, cell_size_m);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const char ch = rows[r].at(c);
      g.set_cell(r, c, ch == 'I' ? CellLabel::In : ch == 'F' ? CellLabel::Furn : CellLabel::Out);
    }
  g.label_walls_from_cells();
  return g;
}

inline CellMap random_mask(int n, double p, Rng& rng) {
  CellMap m(n);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = rng.bernoulli(p) ? 1.0 : 0.0;
  return m;
}

/// Axis-aligned filled rectangle.
inline CellMap rect_mask(int n, int r0, int c0, int h, int w) {
  CellMap m(n);
  for (int r = r0; r < r0 + h; ++r)
    for (int c = c0; c < c0 + w; ++c) m.at(r, c) = 1.0;
  return m;
}

}  // namespace walkplan::fixture
