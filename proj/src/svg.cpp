#include "walkplan/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "walkplan/boundary.hpp"

namespace walkplan {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s == "-0" ? "0" : s;
}

// Greedy cover of the set cells by rectangles: row runs extended downward
// while the same run is fully set.
void emit_rects(std::ostringstream& out, const CellMap& mask, double s, const char* cls) {
  const int n = mask.n();
  CellMap used(n, 0.0);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      if (mask.at(r, c) <= 0.5 || used.at(r, c) > 0.5) continue;
      int w = 0;
      while (c + w < n && mask.at(r, c + w) > 0.5 && used.at(r, c + w) <= 0.5) ++w;
      int h = 1;
      for (;; ++h) {
        if (r + h >= n) break;
        bool full = true;
        for (int k = 0; k < w && full; ++k) full = mask.at(r + h, c + k) > 0.5 && used.at(r + h, c + k) <= 0.5;
        if (!full) break;
      }
      for (int i = 0; i < h; ++i)
        for (int k = 0; k < w; ++k) used.at(r + i, c + k) = 1.0;
      out << "<rect class=\"" << cls << "\" x=\"" << num(c * s) << "\" y=\"" << num(r * s) << "\" width=\"" << num(w * s)
          << "\" height=\"" << num(h * s) << "\"/>\n";
    }
}

}  // namespace

std::string render_svg(const FloorPlan& plan, const std::optional<Trajectory>& traj, const SvgStyle& style) {
  const double s = style.px_per_cell;
  const double size = plan.n * s;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(size) << "\" height=\"" << num(size)
      << "\" viewBox=\"0 0 " << num(size) << ' ' << num(size) << "\">\n";
  out << "<style>.interior{fill:#f2efe6}.wall{fill:none;stroke:#222;stroke-width:2}"
         ".door{fill:none;stroke:#d2691e;stroke-width:4}.furniture{fill:#7a8ca3}"
         ".trajectory{fill:none;stroke:#c0392b;stroke-width:1}</style>\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << num(size) << "\" height=\"" << num(size) << "\" fill=\"#ffffff\"/>\n";

  out << "<g id=\"interior\">\n";
  emit_rects(out, plan.interior, s, "interior");
  out << "</g>\n";

  out << "<g id=\"walls\">\n";
  if (plan.interior.count_set() > 0) {
    try {
      const auto loop = extract_boundary_loop(plan.interior);
      const auto corners = corner_vertices(loop);
      out << "<polyline class=\"wall\" points=\"";
      for (std::size_t i = 0; i <= corners.size(); ++i) {
        const auto& v = corners[i % corners.size()];
        out << (i ? " " : "") << num(v.x * s) << ',' << num(v.y * s);
      }
      out << "\"/>\n";
    } catch (const BoundaryError&) {
      for (const auto& seg : boundary_segments(plan.interior)) {
        const auto [a, b] = segment_endpoints(seg);
        out << "<line class=\"wall\" x1=\"" << num(a.x * s) << "\" y1=\"" << num(a.y * s) << "\" x2=\"" << num(b.x * s)
            << "\" y2=\"" << num(b.y * s) << "\"/>\n";
      }
    }
  }
  out << "</g>\n";

  out << "<g id=\"doors\">\n";
  for (const auto& run : plan.doors) {
    if (run.empty()) continue;
    // Runs are straight after width normalization, so a line spans them.
    Point lo = segment_endpoints(run.front()).first, hi = lo;
    for (const auto& seg : run) {
      const auto [a, b] = segment_endpoints(seg);
      lo = {std::min({lo.x, a.x, b.x}), std::min({lo.y, a.y, b.y})};
      hi = {std::max({hi.x, a.x, b.x}), std::max({hi.y, a.y, b.y})};
    }
    out << "<line class=\"door\" x1=\"" << num(lo.x * s) << "\" y1=\"" << num(lo.y * s) << "\" x2=\"" << num(hi.x * s)
        << "\" y2=\"" << num(hi.y * s) << "\"/>\n";
  }
  out << "</g>\n";

  out << "<g id=\"furniture\">\n";
  emit_rects(out, plan.furniture, s, "furniture");
  out << "</g>\n";

  if (traj && !traj->points.empty()) {
    const double k = s / plan.cell_size_m;
    out << "<g id=\"trajectory\">\n<polyline class=\"trajectory\" points=\"";
    for (std::size_t i = 0; i < traj->points.size(); ++i)
      out << (i ? " " : "") << num(traj->points[i].x * k) << ',' << num(traj->points[i].y * k);
    out << "\"/>\n</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace walkplan
