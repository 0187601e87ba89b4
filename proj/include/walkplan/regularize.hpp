#pragma once

#include <stdexcept>
#include <vector>

#include "walkplan/boundary.hpp"
#include "walkplan/dfpg.hpp"

namespace walkplan {

/// Penalties of the binary footprint MRF.
struct MrfConfig {
  double gamma_in_to_out = 4.0;  // predicted IN labeled OUT
  double gamma_out_to_in = 1.0;  // predicted OUT labeled IN
  double gamma_border = 2.0;     // per 4-adjacent pair with differing labels

  void validate() const;
};

/// E(L) = sum of data costs + gamma_border * (# 4-adjacent pairs with differing labels).
double mrf_energy(const CellMap& labeling, const CellMap& predicted, const MrfConfig& cfg);

/// Number of 4-adjacent cell pairs with differing labels.
int label_discontinuities(const CellMap& labeling);

/// Exact minimizer of mrf_energy via s-t min cut. Ties resolve to the
/// smallest IN set (cells reachable from the source in the residual graph).
CellMap mrf_smooth(const CellMap& predicted, const MrfConfig& cfg = {});

class EmptyInteriorError : public std::runtime_error {
public:
  EmptyInteriorError() : std::runtime_error("no interior predicted") {}
};

/// Keeps the largest 4-connected IN component (first in row-major order on
/// ties) and fills OUT regions not 4-connected to the grid frame.
CellMap repair_connectivity(const CellMap& mask);

/// Cells equal to `target` with no 4-neighbor equal to `target` flip to 1 - target.
CellMap clean_isolated_cells(const CellMap& map, double target = 1.0);

/// One simultaneous pass: a DOOR node whose prev and next are WALL becomes WALL.
std::vector<SegmentLabel> clean_isolated_door_nodes(const std::vector<SegmentLabel>& labels);

/// Resizes each DOOR run to `width` segments (or its whole wall run when
/// shorter), centered on the original run with ties toward the run start and
/// clamped to the hosting wall run. A door whose slot would touch an earlier
/// placed door moves to the nearest free slot on its wall run, or is dropped
/// when none exists.
std::vector<SegmentLabel> normalize_door_width(const BoundaryLoop& loop, const std::vector<SegmentLabel>& labels,
                                               int width = 4);

}  // namespace walkplan
