#include <doctest.h>

#include <algorithm>
#include <set>

#include "walkplan/boundary.hpp"
#include "walkplan/gen.hpp"

using namespace walkplan;

namespace {

Dfpg room(std::uint64_t seed) {
  GenConfig cfg;
  cfg.seed = seed;
  return generate_room(cfg);
}

bool four_connected(const CellMap& m) {
  std::vector<int> labels;
  return label_components(m, labels) == 1;
}

}  // namespace

TEST_SUITE("gen") {

TEST_CASE("deterministic in the seed") {
  CHECK(room(12) == room(12));
  CHECK_FALSE(room(12) == room(13));
}

TEST_CASE("config validation") {
  GenConfig cfg;
  cfg.min_side_m = 2.0;
  CHECK_THROWS_AS(generate_room(cfg), std::invalid_argument);
  cfg = {};
  cfg.max_side_m = 20.0;
  CHECK_THROWS_AS(generate_room(cfg), std::invalid_argument);
  cfg = {};
  cfg.door_count_range = {0, 2};
  CHECK_THROWS_AS(generate_room(cfg), std::invalid_argument);
}

TEST_CASE("infeasible request fails after bounded retries") {
  GenConfig cfg;
  cfg.min_side_m = cfg.max_side_m = 3.0;
  cfg.door_count_range = {12, 12};
  CHECK_THROWS_WITH(generate_room(cfg), "generation failed");
}

TEST_CASE("rooms satisfy the single-room invariants") {
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    const Dfpg g = room(seed);
    const auto problems = validate_single_room(g);
    CHECK_MESSAGE(problems.empty(), "seed " << seed);
    CHECK(four_connected(derive_free_map(g)));
    CHECK(derive_furniture_map(g).count_set() >= 1);

    const auto interior = derive_interior_map(g);
    const auto loop = extract_boundary_loop(interior);
    const auto runs = door_runs(loop_labels(loop, g));
    CHECK(runs.size() >= 1);
    CHECK(runs.size() <= 3);
    const auto walls = wall_runs(loop);
    const auto run_of = wall_run_of(loop, walls);
    for (const auto& run : runs) {
      CHECK(run.size() == 4);
      for (int p : run) CHECK(run_of[p] == run_of[run.front()]);
      bool has_free_front = false;
      for (int p : run) {
        const Cell c = loop[p].interior_cell();
        has_free_front |= g.cell(c.row, c.col) == CellLabel::In;
      }
      CHECK(has_free_front);
    }
    // No furniture within one cell of a door front.
    for (const Cell& f : door_front_cells(g))
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) CHECK(g.cell_or_out(f.row + dr, f.col + dc) != CellLabel::Furn);
  }
}

TEST_CASE("footprint size honours the side range") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto m = derive_interior_map(room(seed));
    int r0 = m.n(), r1 = -1, c0 = m.n(), c1 = -1;
    for (int r = 0; r < m.n(); ++r)
      for (int c = 0; c < m.n(); ++c)
        if (m.at(r, c) > 0.5) r0 = std::min(r0, r), r1 = std::max(r1, r), c0 = std::min(c0, c), c1 = std::max(c1, c);
    const int h = r1 - r0 + 1, w = c1 - c0 + 1;
    CHECK(std::min(h, w) >= 12);
    CHECK(std::max(h, w) <= 40);
  }
}

TEST_CASE("no concavities gives rectangles") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    cfg.max_concavities = 0;
    const auto loop = extract_boundary_loop(derive_interior_map(generate_room(cfg)));
    CHECK(corner_vertices(loop).size() == 4);
  }
}

}
