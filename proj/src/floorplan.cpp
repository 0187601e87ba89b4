#include "walkplan/floorplan.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "walkplan/boundary.hpp"

namespace walkplan {

FloorPlan floorplan_from_dfpg(const Dfpg& g) {
  FloorPlan plan;
  plan.n = g.n();
  plan.cell_size_m = g.cell_size_m();
  plan.interior = derive_interior_map(g);
  plan.furniture = derive_furniture_map(g);
  if (plan.interior.count_set() > 0) {
    const auto loop = extract_boundary_loop(plan.interior);
    for (const auto& run : door_runs(loop_labels(loop, g))) {
      DoorRun door;
      for (int p : run) door.push_back(loop[p].seg);
      plan.doors.push_back(std::move(door));
    }
  }
  return plan;
}

std::vector<std::string> floorplan_problems(const FloorPlan& plan) {
  std::vector<std::string> problems;
  if (plan.interior.n() != plan.n || plan.furniture.n() != plan.n) {
    problems.emplace_back("mask shape mismatch");
    return problems;
  }
  const auto boundary = boundary_segments(plan.interior);
  const std::set<SegmentRef> walls(boundary.begin(), boundary.end());
  for (const auto& door : plan.doors)
    for (const auto& s : door)
      if (!walls.contains(s)) {
        problems.emplace_back("door segment off the wall boundary");
        break;
      }
  for (std::size_t i = 0; i < plan.furniture.size(); ++i)
    if (plan.furniture[i] > 0.5 && plan.interior[i] <= 0.5) {
      problems.emplace_back("furniture outside the interior");
      break;
    }
  return problems;
}

FloorPlan translate(const FloorPlan& plan, int drow, int dcol) {
  FloorPlan out = plan;
  const int n = plan.n;
  out.interior = CellMap(n);
  out.furniture = CellMap(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      if (!out.interior.contains(r + drow, c + dcol)) continue;
      out.interior.at(r + drow, c + dcol) = plan.interior.at(r, c);
      out.furniture.at(r + drow, c + dcol) = plan.furniture.at(r, c);
    }
  out.doors.clear();
  for (const auto& door : plan.doors) {
    DoorRun moved;
    for (auto s : door) {
      s.row += drow;
      s.col += dcol;
      const bool inside = s.axis == Axis::Horizontal ? (s.row >= 0 && s.row <= n && s.col >= 0 && s.col < n)
                                                     : (s.row >= 0 && s.row < n && s.col >= 0 && s.col <= n);
      if (inside) moved.push_back(s);
    }
    if (!moved.empty()) out.doors.push_back(std::move(moved));
  }
  return out;
}

std::vector<int> rle_encode(const CellMap& mask) {
  std::vector<int> runs;
  bool current = false;
  int length = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const bool v = mask[i] > 0.5;
    if (v != current) {
      runs.push_back(length);
      current = v;
      length = 0;
    }
    ++length;
  }
  runs.push_back(length);
  return runs;
}

CellMap rle_decode(int n, const std::vector<int>& runs) {
  CellMap out(n);
  std::size_t pos = 0;
  bool value = false;
  for (int len : runs) {
    if (len < 0 || pos + static_cast<std::size_t>(len) > out.size()) throw std::runtime_error("rle: run overflows grid");
    for (int k = 0; k < len; ++k) out[pos++] = value ? 1.0 : 0.0;
    value = !value;
  }
  if (pos != out.size()) throw std::runtime_error("rle: runs do not cover the grid");
  return out;
}

namespace {

nlohmann::json segment_to_json(const SegmentRef& s) {
  return nlohmann::json::array({s.axis == Axis::Horizontal ? "h" : "v", s.row, s.col});
}

SegmentRef segment_from_json(const nlohmann::json& j) {
  const auto axis = j.at(0).get<std::string>();
  if (axis != "h" && axis != "v") throw std::runtime_error("floorplan json: bad segment axis");
  return {axis == "h" ? Axis::Horizontal : Axis::Vertical, j.at(1).get<int>(), j.at(2).get<int>()};
}

}  // namespace

nlohmann::json floorplan_to_json(const FloorPlan& plan) {
  nlohmann::json doors = nlohmann::json::array();
  for (const auto& door : plan.doors) {
    nlohmann::json run = nlohmann::json::array();
    for (const auto& s : door) run.push_back(segment_to_json(s));
    doors.push_back(run);
  }
  return {{"n", plan.n},
          {"cell_size_m", plan.cell_size_m},
          {"interior_rle", rle_encode(plan.interior)},
          {"doors", doors},
          {"furniture_rle", rle_encode(plan.furniture)},
          {"provenance",
           {{"checkpoints", plan.provenance.checkpoints},
            {"seeds", plan.provenance.seeds},
            {"config_hash", plan.provenance.config_hash}}}};
}

FloorPlan floorplan_from_json(const nlohmann::json& j) {
  FloorPlan plan;
  plan.n = j.at("n").get<int>();
  plan.cell_size_m = j.at("cell_size_m").get<double>();
  plan.interior = rle_decode(plan.n, j.at("interior_rle").get<std::vector<int>>());
  plan.furniture = rle_decode(plan.n, j.at("furniture_rle").get<std::vector<int>>());
  for (const auto& run : j.at("doors")) {
    DoorRun door;
    for (const auto& s : run) door.push_back(segment_from_json(s));
    plan.doors.push_back(std::move(door));
  }
  const auto& prov = j.at("provenance");
  plan.provenance.checkpoints = prov.at("checkpoints").get<std::vector<std::string>>();
  plan.provenance.seeds = prov.at("seeds").get<std::vector<std::uint64_t>>();
  plan.provenance.config_hash = prov.at("config_hash").get<std::string>();
  return plan;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace walkplan
