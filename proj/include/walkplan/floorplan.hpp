#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "walkplan/dfpg.hpp"

namespace walkplan {

struct Provenance {
  std::vector<std::string> checkpoints;  // content hashes of the stage models
  std::vector<std::uint64_t> seeds;
  std::string config_hash;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

using DoorRun = std::vector<SegmentRef>;

/// Structured cascade output registered to one grid.
struct FloorPlan {
  int n = 0;
  double cell_size_m = 0.25;
  CellMap interior;
  std::vector<DoorRun> doors;  // each run in boundary-loop order
  CellMap furniture;
  Provenance provenance;

  friend bool operator==(const FloorPlan&, const FloorPlan&) = default;
};

/// Ground-truth plan of a Dfpg: interior, DOOR runs along the boundary loop, FURN cells.
FloorPlan floorplan_from_dfpg(const Dfpg& g);

/// Violations of: doors on interior transitions, furniture inside the interior.
std::vector<std::string> floorplan_problems(const FloorPlan& plan);

/// Shifts every element by whole cells; content leaving the grid is dropped.
FloorPlan translate(const FloorPlan& plan, int drow, int dcol);

/// Run lengths over the row-major binary mask, alternating 0-runs and 1-runs
/// and starting with a (possibly empty) 0-run.
std::vector<int> rle_encode(const CellMap& mask);
CellMap rle_decode(int n, const std::vector<int>& runs);

nlohmann::json floorplan_to_json(const FloorPlan& plan);
FloorPlan floorplan_from_json(const nlohmann::json& j);

std::string fnv1a_hex(const std::string& bytes);

}  // namespace walkplan
