#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>

#include "walkplan/dfpg.hpp"

namespace walkplan {

/// Parameters of the single-room Manhattan floor plan generator.
struct GenConfig {
  std::uint64_t seed = 0;
  int n = 64;
  double cell_size_m = 0.25;
  double min_side_m = 3.0;
  double max_side_m = 10.0;
  int max_concavities = 3;
  std::pair<int, int> door_count_range{1, 3};
  std::pair<int, int> furniture_count_range{1, 6};
  double min_furniture_side_m = 0.5;
  double max_furniture_side_m = 2.5;
  double wall_furniture_prob = 0.7;
  int door_width = 4;
  int max_retries = 100;

  void validate() const;
};

class GenerationError : public std::runtime_error {
public:
  GenerationError() : std::runtime_error("generation failed") {}
};

/// Rectangle minus up to max_concavities rectangular notches, with 1 m doors
/// on the wall loop and non-overlapping furniture blocks that keep the free
/// space 4-connected and the door fronts clear. Deterministic in cfg.seed.
Dfpg generate_room(const GenConfig& cfg);

/// Interior-adjacent cells of all DOOR segments.
std::vector<Cell> door_front_cells(const Dfpg& g);

}  // namespace walkplan
