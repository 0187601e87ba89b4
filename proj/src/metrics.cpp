#include "walkplan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace walkplan {

PrF1 PrF1::from(double precision, double recall) {
  const double sum = precision + recall;
  return {precision, recall, sum > 0 ? 2.0 * precision * recall / sum : 0.0};
}

nlohmann::json to_json(const PrF1& m) {
  return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

namespace {

/// Fraction of set cells in `from` with a set cell of `to` within Chebyshev distance tol.
double matched_fraction(const CellMap& from, const CellMap& to, int tol) {
  const int n = from.n();
  int total = 0, hit = 0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      if (from.at(r, c) <= 0.5) continue;
      ++total;
      bool found = false;
      for (int dr = -tol; dr <= tol && !found; ++dr)
        for (int dc = -tol; dc <= tol && !found; ++dc) found = to.get_or(r + dr, c + dc, 0.0) > 0.5;
      if (found) ++hit;
    }
  return total == 0 ? 1.0 : static_cast<double>(hit) / total;
}

PrF1 with_empty_conventions(bool pred_empty, bool gt_empty, double precision, double recall) {
  if (pred_empty && gt_empty) return {1.0, 1.0, 1.0};
  if (gt_empty) return {0.0, 1.0, 0.0};
  if (pred_empty) return {1.0, 0.0, 0.0};
  return PrF1::from(precision, recall);
}

}  // namespace

PrF1 cell_pr(const CellMap& pred, const CellMap& gt, int tol_cells) {
  if (pred.n() != gt.n()) throw std::invalid_argument("cell_pr: shape mismatch");
  if (tol_cells < 0) throw std::invalid_argument("cell_pr: negative tolerance");
  return with_empty_conventions(pred.count_set() == 0, gt.count_set() == 0, matched_fraction(pred, gt, tol_cells),
                                matched_fraction(gt, pred, tol_cells));
}

double door_distance_m(const DoorRun& a, const DoorRun& b, double cell_size_m) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& sa : a)
    for (const auto& sb : b) {
      const auto [p0, p1] = segment_endpoints(sa);
      const auto [q0, q1] = segment_endpoints(sb);
      best = std::min(best, segment_segment_distance(p0, p1, q0, q1));
    }
  return best * cell_size_m;
}

int door_true_positives(const std::vector<DoorRun>& pred, const std::vector<DoorRun>& gt, double tol_m,
                        double cell_size_m) {
  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < pred.size(); ++i)
    for (std::size_t j = 0; j < gt.size(); ++j) {
      const double d = door_distance_m(pred[i], gt[j], cell_size_m);
      if (d <= tol_m) pairs.emplace_back(d, i, j);
    }
  std::sort(pairs.begin(), pairs.end());
  std::vector<char> pred_used(pred.size(), 0), gt_used(gt.size(), 0);
  int tp = 0;
  for (const auto& [d, i, j] : pairs) {
    if (pred_used[i] || gt_used[j]) continue;
    pred_used[i] = gt_used[j] = 1;
    ++tp;
  }
  return tp;
}

PrF1 door_pr(const std::vector<DoorRun>& pred, const std::vector<DoorRun>& gt, double tol_m, double cell_size_m) {
  const int tp = door_true_positives(pred, gt, tol_m, cell_size_m);
  const double precision = pred.empty() ? 1.0 : static_cast<double>(tp) / pred.size();
  const double recall = gt.empty() ? 1.0 : static_cast<double>(tp) / gt.size();
  return with_empty_conventions(pred.empty(), gt.empty(), precision, recall);
}

namespace {

struct Box {
  int r0, r1, c0, c1;
};

Box bounding_box(const CellMap& m) {
  Box b{m.n(), -1, m.n(), -1};
  for (int r = 0; r < m.n(); ++r)
    for (int c = 0; c < m.n(); ++c)
      if (m.at(r, c) > 0.5) {
        b.r0 = std::min(b.r0, r), b.r1 = std::max(b.r1, r);
        b.c0 = std::min(b.c0, c), b.c1 = std::max(b.c1, c);
      }
  if (b.r1 < 0) throw std::invalid_argument("align_by_bbox: empty interior");
  return b;
}

/// (a - b) / 2 rounded toward zero, for integer sums of box bounds.
int half_toward_zero(int twice) { return twice / 2; }

}  // namespace

CellOffset bbox_alignment(const CellMap& pred_interior, const CellMap& gt_interior) {
  const Box p = bounding_box(pred_interior), g = bounding_box(gt_interior);
  return {half_toward_zero((g.r0 + g.r1) - (p.r0 + p.r1)), half_toward_zero((g.c0 + g.c1) - (p.c0 + p.c1))};
}

FloorPlan align_by_bbox(const FloorPlan& pred, const Dfpg& gt) {
  const auto offset = bbox_alignment(pred.interior, derive_interior_map(gt));
  return translate(pred, offset.drow, offset.dcol);
}

PlanScores score_plan(const FloorPlan& pred, const Dfpg& gt, int tol_cells, double door_tol_m) {
  const FloorPlan truth = floorplan_from_dfpg(gt);
  return {cell_pr(pred.interior, truth.interior, tol_cells),
          door_pr(pred.doors, truth.doors, door_tol_m, gt.cell_size_m()),
          cell_pr(pred.furniture, truth.furniture, tol_cells)};
}

PlanScores average_scores(const std::vector<PlanScores>& samples) {
  if (samples.empty()) return {};
  auto mean = [&](auto member) {
    double p = 0, r = 0;
    for (const auto& s : samples) {
      p += (s.*member).precision;
      r += (s.*member).recall;
    }
    return PrF1::from(p / samples.size(), r / samples.size());
  };
  return {mean(&PlanScores::interior), mean(&PlanScores::doors), mean(&PlanScores::furniture)};
}

nlohmann::json to_json(const PlanScores& s) {
  return {{"interior", to_json(s.interior)}, {"doors", to_json(s.doors)}, {"furniture", to_json(s.furniture)}};
}

double mask_iou(const CellMap& a, const CellMap& b) {
  if (a.n() != b.n()) throw std::invalid_argument("mask_iou: shape mismatch");
  int inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool x = a[i] > 0.5, y = b[i] > 0.5;
    inter += x && y;
    uni += x || y;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / uni;
}

}  // namespace walkplan
