#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "support/fixtures.hpp"
#include "walkplan/dfpg.hpp"
#include "walkplan/dfpg_io.hpp"
#include "walkplan/gen.hpp"

using namespace walkplan;

TEST_SUITE("dfpg") {

TEST_CASE("array shapes") {
  Dfpg g(5, 0.25);
  CHECK(g.cells().size() == 25);
  CHECK(g.h_segments().size() == 30);
  CHECK(g.v_segments().size() == 30);
}

TEST_CASE("derived maps follow label substitution") {
  Dfpg empty(4, 0.25);
  CHECK(derive_interior_map(empty).sum() == 0.0);

  auto g = fixture::room({"....", ".IF.", "....", "...."});
  CHECK(derive_interior_map(g).sum() == 2.0);
  CHECK(derive_free_map(g).sum() == 1.0);
  CHECK(derive_free_map(g).at(1, 2) == 0.0);
  CHECK(derive_furniture_map(g).at(1, 2) == 1.0);

  Dfpg all_in(3, 0.25);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) all_in.set_cell(r, c, CellLabel::In);
  CHECK(derive_free_map(all_in).sum() == 9.0);
}

TEST_CASE("label counts on generated rooms") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    const Dfpg g = generate_room(cfg);
    int in = 0, furn = 0;
    for (auto l : g.cells()) {
      in += l == CellLabel::In;
      furn += l == CellLabel::Furn;
    }
    const auto interior = derive_interior_map(g);
    const auto free = derive_free_map(g);
    CHECK(interior.sum() == in + furn);
    CHECK(free.sum() == in);
    for (std::size_t i = 0; i < interior.size(); ++i) CHECK(interior[i] >= free[i]);
  }
}

TEST_CASE("inverse distance map values") {
  // Horizontal path through the centers of row 2.
  Trajectory t{{{0.125, 0.625}, {0.875, 0.625}}};
  const auto m = inverse_distance_map(4, 0.25, t, 0.5);
  CHECK(m.at(2, 1) == doctest::Approx(1.0));
  CHECK(m.at(1, 1) == doctest::Approx(0.5));  // 0.25 m away
  CHECK(m.at(0, 1) == doctest::Approx(0.0));  // 0.5 m away
  for (double v : m.values()) CHECK((v >= 0.0 && v <= 1.0));

  CHECK_THROWS_WITH(inverse_distance_map(4, 0.25, Trajectory{}, 0.5), "no trajectory");
}

TEST_CASE("inverse distance is monotone in distance") {
  Rng rng(7);
  Trajectory t{{{1.0, 1.0}, {2.5, 1.7}, {2.0, 3.1}}};
  const auto m = inverse_distance_map(16, 0.25, t, 0.5);
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 16; ++c)
      for (int r2 = 0; r2 < 16; ++r2)
        for (int c2 = 0; c2 < 16; ++c2) {
          auto d = [&](int rr, int cc) {
            const Point p = cell_center({rr, cc}, 0.25);
            double best = 1e9;
            for (std::size_t k = 1; k < t.points.size(); ++k)
              best = std::min(best, point_segment_distance(p, t.points[k - 1], t.points[k]));
            return best;
          };
          if (d(r, c) < d(r2, c2)) CHECK(m.at(r, c) >= m.at(r2, c2));
        }
}

TEST_CASE("boundary segment counts") {
  CHECK(boundary_segments(fixture::mask({"...", ".#.", "..."})).size() == 4);
  CHECK(boundary_segments(fixture::mask({"....", ".##.", ".##.", "...."})).size() == 8);
  CHECK(boundary_segments(fixture::mask({"....", ".#..", ".##.", "...."})).size() == 8);
}

TEST_CASE("boundary of a mask equals boundary of its complement away from the frame") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = fixture::random_mask(8, 0.5, rng);
    CellMap comp(8);
    for (std::size_t i = 0; i < m.size(); ++i) comp[i] = 1.0 - m[i];
    auto inner = [](const std::vector<SegmentRef>& segs) {
      std::set<SegmentRef> out;
      for (const auto& s : segs) {
        const bool frame = s.axis == Axis::Horizontal ? (s.row == 0 || s.row == 8) : (s.col == 0 || s.col == 8);
        if (!frame) out.insert(s);
      }
      return out;
    };
    CHECK(inner(boundary_segments(m)) == inner(boundary_segments(comp)));
  }
}

TEST_CASE("valid rooms have walls exactly on the interior boundary") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    const Dfpg g = generate_room(cfg);
    CHECK(validate_single_room(g).empty());
    std::set<SegmentRef> labeled;
    for (const auto& s : boundary_segments(derive_interior_map(g))) CHECK(g.segment(s) != SegmentLabel::None);
    int count = 0;
    for (auto l : g.h_segments()) count += l != SegmentLabel::None;
    for (auto l : g.v_segments()) count += l != SegmentLabel::None;
    CHECK(count == static_cast<int>(boundary_segments(derive_interior_map(g)).size()));
  }
}

TEST_CASE("validation flags broken rooms") {
  auto two = fixture::room({"I..", "...", "..I"});
  CHECK_FALSE(validate_single_room(two).empty());
  auto g = fixture::room({"...", ".I.", "..."});
  CHECK(validate_single_room(g).empty());
  g.set_segment({Axis::Horizontal, 0, 0}, SegmentLabel::Wall);
  CHECK_FALSE(validate_single_room(g).empty());
}

TEST_CASE("json round trips are byte exact") {
  Rng rng(11);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    const Dfpg g = generate_room(cfg);
    const auto text = dfpg_to_json(g).dump();
    const Dfpg back = dfpg_from_json(nlohmann::json::parse(text));
    CHECK(back == g);
    CHECK(dfpg_to_json(back).dump() == text);

    Trajectory t;
    for (int i = 0; i < 20; ++i) t.points.push_back({rng.uniform(0, 16), rng.uniform(0, 16)});
    const auto ttext = trajectory_to_json(t).dump();
    const Trajectory tb = trajectory_from_json(nlohmann::json::parse(ttext));
    CHECK(tb == t);
    CHECK(trajectory_to_json(tb).dump() == ttext);
  }
}

TEST_CASE("file round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "walkplan_dfpg_test";
  GenConfig cfg;
  cfg.seed = 5;
  const Dfpg g = generate_room(cfg);
  save_dfpg(dir / "room.json", g);
  CHECK(load_dfpg(dir / "room.json") == g);
  std::filesystem::remove_all(dir);
}

TEST_CASE("malformed json is rejected") {
  auto j = dfpg_to_json(Dfpg(3, 0.25));
  j["cells"][0] = "OXO";
  CHECK_THROWS(dfpg_from_json(j));
}

}
