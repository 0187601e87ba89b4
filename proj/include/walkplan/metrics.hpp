#pragma once

#include <vector>

#include <json.hpp>

#include "walkplan/dfpg.hpp"
#include "walkplan/floorplan.hpp"

namespace walkplan {

struct PrF1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  /// f1 = 2PR / (P + R), 0 when P + R = 0.
  static PrF1 from(double precision, double recall);
};

nlohmann::json to_json(const PrF1& m);

/// Tolerance-matched cell precision/recall. A GT-positive cell is recalled
/// when a predicted-positive cell lies within Chebyshev distance tol_cells;
/// precision is the mirror image. Empty/empty gives (1,1,1); empty GT with a
/// non-empty prediction (0,1,0); non-empty GT with an empty prediction (1,0,0).
PrF1 cell_pr(const CellMap& pred, const CellMap& gt, int tol_cells = 1);

/// Minimum Euclidean distance in meters between any segments of two doors.
double door_distance_m(const DoorRun& a, const DoorRun& b, double cell_size_m);

/// True positives under greedy one-to-one matching in ascending distance.
int door_true_positives(const std::vector<DoorRun>& pred, const std::vector<DoorRun>& gt, double tol_m,
                        double cell_size_m);

/// Door precision = TP / #pred, recall = TP / #gt, with the same empty-set
/// conventions as cell_pr.
PrF1 door_pr(const std::vector<DoorRun>& pred, const std::vector<DoorRun>& gt, double tol_m, double cell_size_m);

struct CellOffset {
  int drow = 0;
  int dcol = 0;
  friend bool operator==(const CellOffset&, const CellOffset&) = default;
};

/// Integer offset moving pred's interior bounding-box center onto gt's,
/// half-cell differences rounded toward zero.
CellOffset bbox_alignment(const CellMap& pred_interior, const CellMap& gt_interior);

/// Prediction translated so the interior bounding-box centers coincide.
FloorPlan align_by_bbox(const FloorPlan& pred, const Dfpg& gt);

/// Interior, door and furniture scores of one prediction.
struct PlanScores {
  PrF1 interior;
  PrF1 doors;
  PrF1 furniture;
};

PlanScores score_plan(const FloorPlan& pred, const Dfpg& gt, int tol_cells = 1, double door_tol_m = 0.25);
/// Per-component mean of precision and recall; F1 recomputed from the means.
PlanScores average_scores(const std::vector<PlanScores>& samples);
nlohmann::json to_json(const PlanScores& s);

/// Intersection over union of two binary masks (1 when both are empty).
double mask_iou(const CellMap& a, const CellMap& b);

}  // namespace walkplan
