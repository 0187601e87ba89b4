#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <ostream>
#include <set>
#include <sstream>

#include "support/oracles.hpp"
#include "walkplan/boundary.hpp"
#include "walkplan/dfpg_io.hpp"
#include "walkplan/nn/checkpoint.hpp"
#include "walkplan/nn/ops.hpp"

namespace walkplan::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void say(const Settings& s, const std::string& line) {
  if (s.log) *s.log << "# " << line << std::endl;
}

std::vector<double> uniform_values(std::size_t n, Rng& rng, double scale = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-scale, scale);
  return v;
}

nn::Tensor random_param(nn::Shape shape, Rng& rng, double scale = 1.0) {
  auto v = uniform_values(nn::numel(shape), rng, scale);
  return nn::Tensor::parameter(std::move(shape), std::move(v));
}

CellMap random_mask(int n, double p, Rng& rng) {
  CellMap m(n);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = rng.bernoulli(p) ? 1.0 : 0.0;
  return m;
}

/// Plan produced for a trajectory, or an empty plan when stage 1 finds no interior.
FloorPlan cascade_or_empty(const Trajectory& t, const CascadeModels& models, const Dfpg& room, bool* empty = nullptr) {
  try {
    if (empty) *empty = false;
    return run_cascade(t, models, room.n(), room.cell_size_m());
  } catch (const EmptyInteriorPrediction&) {
    if (empty) *empty = true;
    FloorPlan plan;
    plan.n = room.n();
    plan.cell_size_m = room.cell_size_m();
    plan.interior = CellMap(room.n());
    plan.furniture = CellMap(room.n());
    return plan;
  }
}

}  // namespace

const Dataset& Context::data() {
  if (!data_) build();
  return *data_;
}

const CascadeModels& Context::models() {
  if (!models_) build();
  return *models_;
}

void Context::build() {
  const auto t0 = Clock::now();
  gen_.seed = settings_.seed;
  SimConfig sim;
  sim.seed = settings_.seed ^ 0x9E3779B97F4A7C15ULL;
  say(settings_, fmt("building a %d-room corpus", settings_.rooms));
  data_ = build_dataset(gen_, sim, settings_.rooms, settings_.log);
  CascadeTrainConfig cfg;
  cfg.seed = settings_.seed;
  GenConfig easy_gen = gen_;
  easy_gen.seed = settings_.seed + 1;
  const auto easy = easy_samples(easy_gen, sim, cfg.easy_count);
  say(settings_, fmt("corpus ready: %zu/%zu/%zu, %d skipped, %.1fs", data_->train.size(), data_->val.size(),
                     data_->test.size(), data_->skipped, since(t0)));
  auto progress = [&](const char* stage) {
    return [this, stage, t0](const nn::EpochStats& e) {
      say(settings_, fmt("%s epoch %d loss %.4f val %.4f (%.0fs)", stage, e.epoch, e.train_loss, e.val_accuracy, since(t0)));
    };
  };
  auto m1 = train_stage1(*data_, easy, cfg, nullptr, progress("stage1"));
  auto m2 = train_stage2(*data_, cfg, nullptr, progress("stage2"), &m1);
  auto m3 = train_stage3(*data_, cfg, nullptr, progress("stage3"));
  models_.emplace(CascadeModels{std::move(m1), std::move(m2), std::move(m3)});
  build_seconds_ = since(t0);
  say(settings_, fmt("cascade trained in %.1fs", build_seconds_));
}

Result gradient_oracle(const Settings& s) {
  const auto t0 = Clock::now();
  Rng root(s.seed);
  double worst = 0.0;
  std::string worst_name = "none";
  int checked = 0, skipped = 0;
  auto run = [&](const std::string& name, const std::function<nn::Tensor()>& loss, const std::vector<nn::Tensor*>& params) {
    const auto r = oracle::check_gradients(loss, params);
    checked += r.checked;
    skipped += r.skipped_kinks;
    if (r.max_rel_error >= worst) {
      worst = r.max_rel_error;
      worst_name = name;
    }
  };

  // Six-segment loop of a 1x2 room, as a real boundary graph.
  CellMap tiny_room(4);
  tiny_room.at(1, 1) = tiny_room.at(1, 2) = 1.0;
  const auto tiny_loop = extract_boundary_loop(tiny_room);

  for (int draw = 0; draw < 20; ++draw) {
    Rng rng = root.split(static_cast<std::uint64_t>(draw));
    auto weights = [&](std::size_t n) { return uniform_values(n, rng); };
    {
      auto x = random_param({2, 5, 5}, rng), w = random_param({3, 2, 3, 3}, rng), b = random_param({3}, rng);
      const auto lw = weights(75);
      run("conv2d", [&] { return nn::weighted_sum(nn::conv2d(x, w, b), lw); }, {&x, &w, &b});
    }
    {
      auto x = random_param({2, 3, 3}, rng), w = random_param({2, 3, 2, 2}, rng), b = random_param({3}, rng);
      const auto lw = weights(108);
      run("conv_transpose2x2", [&] { return nn::weighted_sum(nn::conv_transpose2x2(x, w, b), lw); }, {&x, &w, &b});
    }
    {
      auto x = random_param({2, 4, 4}, rng);
      const auto lw = weights(8);
      run("max_pool2x2", [&] { return nn::weighted_sum(nn::max_pool2x2(x), lw); }, {&x});
    }
    {
      auto x = random_param({3, 7}, rng);
      const auto lw = weights(21);
      run("relu", [&] { return nn::weighted_sum(nn::relu(x), lw); }, {&x});
    }
    {
      auto x = random_param({6, 3}, rng), g = random_param({3}, rng), b = random_param({3}, rng);
      std::vector<double> mean(3, 0.0), var(3, 1.0);
      const auto lw = weights(18);
      run("batch_norm/train", [&] { return nn::weighted_sum(nn::batch_norm(x, g, b, {mean, var}, true), lw); },
          {&x, &g, &b});
      std::vector<double> rm{0.2, -0.1, 0.4}, rv{0.5, 1.5, 2.0};
      run("batch_norm/eval", [&] { return nn::weighted_sum(nn::batch_norm(x, g, b, {rm, rv}, false), lw); },
          {&x, &g, &b});
    }
    {
      auto x = random_param({4, 3}, rng), w = random_param({3, 5}, rng), b = random_param({5}, rng);
      const auto lw = weights(20);
      run("linear", [&] { return nn::weighted_sum(nn::linear(x, w, b), lw); }, {&x, &w, &b});
    }
    {
      const std::vector<GraphEdge> edges{{0, 1}, {1, 0}, {2, 0}, {0, 2}, {3, 2}, {1, 3}, {2, 3}};
      auto theta = random_param({7, 6}, rng), h = random_param({4, 3}, rng);
      const auto lw = weights(8);
      run("ecc_aggregate", [&] { return nn::weighted_sum(nn::ecc_aggregate(theta, h, edges, 2), lw); }, {&theta, &h});
    }
    {
      auto logits = random_param({3, 5}, rng, 2.0);
      const std::vector<int> labels{0, 2, 1, 1, 2};
      const auto w = std::vector<double>{1.0, 0.0, 2.5, 0.5, 1.0};
      run("cross_entropy/first", [&] { return nn::cross_entropy(logits, labels, w, nn::ClassAxis::First); }, {&logits});
      auto node_logits = random_param({5, 2}, rng, 2.0);
      const std::vector<int> node_labels{0, 1, 0, 0, 1};
      run("cross_entropy/last", [&] { return nn::cross_entropy(node_logits, node_labels, {}, nn::ClassAxis::Last); },
          {&node_logits});
    }
    {
      nn::EncDec net({3, 2, 1, 2}, rng);
      const nn::Tensor x({1, 8, 8}, uniform_values(64, rng));
      const auto lw = weights(128);
      run("encdec", [&] { return nn::weighted_sum(net.forward(x), lw); }, net.params().trainable());
    }
    {
      nn::EccConfig cfg;
      cfg.block_depths = {4, 3, 2};
      cfg.fgn_hidden = {3, 4};
      nn::EccNet net(cfg, rng);
      CellMap walk(4);
      for (std::size_t i = 0; i < walk.size(); ++i) walk[i] = rng.uniform(0, 1);
      const auto g = nn::graph_input(build_boundary_graph(tiny_loop, walk), 4);
      std::vector<int> labels(6);
      for (auto& l : labels) l = rng.bernoulli(0.5);
      run("ecc", [&] { return nn::cross_entropy(net.forward(g, true), labels, {}, nn::ClassAxis::Last); },
          net.params().trainable());
    }
  }
  const double secs = since(t0);
  Result r{1, "gradient oracle", worst < 1e-4 && checked > 0 && secs < 120.0, "", secs};
  r.detail = fmt("max rel error %.2e (%s) over %d coordinates, %d kink probes skipped, %.1fs", worst, worst_name.c_str(),
                 checked, skipped, secs);
  return r;
}

Result mrf_exactness(const Settings& s) {
  const auto t0 = Clock::now();
  Rng rng(s.seed + 2);
  std::vector<MrfConfig> cfgs{{4, 1, 2}};
  for (int k = 0; k < 3; ++k) cfgs.push_back({rng.uniform(0.1, 6), rng.uniform(0.1, 6), rng.uniform(0.1, 4)});
  int mismatches = 0, total = 0;
  double worst = 0.0;
  for (const auto& cfg : cfgs)
    for (int k = 0; k < 200; ++k) {
      const auto pred = random_mask(4, 0.5, rng);
      const double got = mrf_energy(mrf_smooth(pred, cfg), pred, cfg);
      const double want = oracle::exhaustive_mrf_minimum(pred, cfg);
      worst = std::max(worst, std::abs(got - want));
      mismatches += std::abs(got - want) > 1e-9;
      ++total;
    }
  const double secs = since(t0);
  return {2, "MRF exactness", mismatches == 0 && secs < 60.0,
          fmt("%d/%d maps at the exhaustive minimum (max gap %.1e), gammas {4,1,2} + 3 random, %.1fs", total - mismatches,
              total, worst, secs),
          secs};
}

namespace {

/// Empty when the plan meets every structural rule, otherwise the first violation.
std::string structural_problem(const FloorPlan& plan) {
  if (plan.interior.count_set() == 0) return "empty interior";
  BoundaryLoop loop;
  try {
    loop = extract_boundary_loop(plan.interior);
  } catch (const BoundaryError& e) {
    return e.what();
  }
  const auto runs = wall_runs(loop);
  const auto run_of = wall_run_of(loop, runs);
  std::set<int> used;
  for (const auto& door : plan.doors) {
    std::vector<int> pos;
    for (const auto& seg : door) {
      const int p = loop.find(seg);
      if (p < 0) return "door off the wall loop";
      pos.push_back(p);
    }
    const int host = run_of[pos.front()];
    for (int p : pos)
      if (run_of[p] != host) return "door spans a corner";
    if (static_cast<int>(door.size()) != std::min(4, runs[host].length)) return "door width " + std::to_string(door.size());
    for (std::size_t k = 1; k < pos.size(); ++k)
      if (pos[k] != loop.next(pos[k - 1])) return "door not contiguous";
    for (int p : pos)
      if (!used.insert(p).second) return "overlapping doors";
  }
  const int n = plan.n;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      if (plan.furniture.at(r, c) <= 0.5) continue;
      if (plan.interior.at(r, c) <= 0.5) return "furniture outside the interior";
      const bool linked = plan.furniture.get_or(r - 1, c, 0) > 0.5 || plan.furniture.get_or(r + 1, c, 0) > 0.5 ||
                          plan.furniture.get_or(r, c - 1, 0) > 0.5 || plan.furniture.get_or(r, c + 1, 0) > 0.5;
      if (!linked) return "isolated furniture cell";
    }
  return {};
}

}  // namespace

Result structural_soundness(Context& ctx) {
  const auto& data = ctx.data();
  const auto& models = ctx.models();
  const auto t0 = Clock::now();
  int total = 0, bad = 0, doors = 0, furniture = 0;
  std::string first;
  for (const auto* split : {&data.train, &data.val, &data.test})
    for (const auto& s : *split) {
      ++total;
      const auto plan = cascade_or_empty(s.trajectory, models, s.room);
      doors += static_cast<int>(plan.doors.size());
      furniture += plan.furniture.count_set();
      const auto problem = structural_problem(plan);
      if (!problem.empty()) {
        ++bad;
        if (first.empty()) first = s.id + ": " + problem;
      }
    }
  const double secs = since(t0);
  Result r{3, "structural soundness", bad == 0 && total > 0, "", secs};
  r.detail = fmt("%d/%d cascade outputs sound (%d doors, %d furniture cells), %.1fs", total - bad, total, doors,
                 furniture, secs);
  if (!first.empty()) r.detail += "; first failure " + first;
  return r;
}

Result simulator_invariants(const Settings& s) {
  const auto t0 = Clock::now();
  Rng rng(s.seed + 4);
  int pairs = 0, off_free = 0, missed_doors = 0, irreproducible = 0, door_count = 0;
  while (pairs < 1000) {
    GenConfig g;
    g.seed = rng.next_u64();
    Dfpg room;
    try {
      room = generate_room(g);
    } catch (const GenerationError&) {
      continue;
    }
    SimConfig sim;
    sim.seed = rng.next_u64();
    const auto t = simulate_walk(room, sim);
    ++pairs;
    const auto free = derive_free_map(room);
    for (const auto& p : t.points) {
      const Cell c = cell_of(p, room.cell_size_m(), room.n());
      if (free.get_or(c.row, c.col, 0.0) <= 0.5) {
        ++off_free;
        break;
      }
    }
    for (const auto& c : door_attachment_cells(room)) {
      ++door_count;
      const Point q = cell_center(c, room.cell_size_m());
      double best = t.points.size() == 1 ? std::hypot(q.x - t.points[0].x, q.y - t.points[0].y) : 1e18;
      for (std::size_t k = 1; k < t.points.size(); ++k)
        best = std::min(best, point_segment_distance(q, t.points[k - 1], t.points[k]));
      missed_doors += best != 0.0;
    }
    if (trajectory_to_json(simulate_walk(room, sim)).dump() != trajectory_to_json(t).dump()) ++irreproducible;
  }
  const double secs = since(t0);
  return {4, "simulator invariants", off_free == 0 && missed_doors == 0 && irreproducible == 0,
          fmt("%d pairs: %d with points off free space, %d/%d doors missed, %d irreproducible, %.1fs", pairs, off_free,
              missed_doors, door_count, irreproducible, secs),
          secs};
}

Result metric_consistency(const Settings& s) {
  const auto t0 = Clock::now();
  Rng rng(s.seed + 5);
  int violations = 0;
  auto same = [](const PrF1& a, const PrF1& b) {
    return std::abs(a.precision - b.precision) < 1e-12 && std::abs(a.recall - b.recall) < 1e-12 &&
           std::abs(a.f1 - b.f1) < 1e-12;
  };
  for (int k = 0; k < 200; ++k) {
    const int n = rng.uniform_int(4, 16);
    const auto a = random_mask(n, rng.uniform(0.02, 0.6), rng);
    const auto b = random_mask(n, rng.uniform(0.02, 0.6), rng);
    double last_p = -1.0, last_r = -1.0;
    for (int tol = 0; tol <= 3; ++tol) {
      const auto ab = cell_pr(a, b, tol), ba = cell_pr(b, a, tol);
      violations += ab.precision != ba.recall || ab.recall != ba.precision;
      violations += ab.precision < last_p || ab.recall < last_r;
      violations += !same(ab, oracle::brute_force_cell_pr(a, b, tol));
      violations += !same(cell_pr(a, a, tol), {1, 1, 1}) || !same(cell_pr(b, b, tol), {1, 1, 1});
      last_p = ab.precision;
      last_r = ab.recall;
    }
  }
  auto door = [](int row, int col) {
    DoorRun d;
    for (int k = 0; k < 4; ++k) d.push_back({Axis::Horizontal, row, col + k});
    return d;
  };
  // At 0.1 m cells: a gap of 3 cells is 0.3 m, gaps of 1 and 2 cells are 0.1 m and 0.2 m.
  const std::vector<DoorRun> gt{door(5, 4)};
  int door_failures = 0;
  door_failures += !same(door_pr({door(5, 11)}, gt, 0.25, 0.1), {0, 0, 0});
  const auto two = door_pr({door(5, 9), door(5, 10)}, gt, 0.25, 0.1);
  door_failures += door_true_positives({door(5, 9), door(5, 10)}, gt, 0.25, 0.1) != 1;
  door_failures += two.precision != 0.5 || two.recall != 1.0;
  const double secs = since(t0);
  return {5, "metric self-consistency", violations == 0 && door_failures == 0,
          fmt("200 mask pairs x 4 tolerances: %d property violations; door examples: %d failures", violations,
              door_failures),
          secs};
}

Result learnability(Context& ctx) {
  const auto& data = ctx.data();
  const auto& models = ctx.models();
  const auto t0 = Clock::now();
  Rng rng(ctx.settings().seed + 6);
  std::vector<PlanScores> cascade, hull;
  double door_recall = 0.0, random_recall = 0.0;
  int empty_count = 0;
  constexpr int kRandomDraws = 20;
  for (const auto& s : data.test) {
    bool empty = false;
    const auto plan = cascade_or_empty(s.trajectory, models, s.room, &empty);
    empty_count += empty;
    cascade.push_back(score_plan(plan, s.room));
    const auto truth = floorplan_from_dfpg(s.room);
    const CellMap walk = inverse_distance_map(s.room.n(), s.room.cell_size_m(), s.trajectory, 0.5);
    FloorPlan hull_plan = truth;
    hull_plan.interior = hull_baseline(walk);
    hull.push_back(score_plan(hull_plan, s.room));
    door_recall += cascade.back().doors.recall * (truth.doors.empty() ? 0.0 : 1.0);
    if (!empty && !plan.doors.empty()) {
      const auto loop = extract_boundary_loop(plan.interior);
      double r = 0.0;
      for (int k = 0; k < kRandomDraws; ++k) {
        const auto guess = random_door_baseline(loop, static_cast<int>(plan.doors.size()), 4, rng);
        r += door_pr(guess, truth.doors, 0.25, s.room.cell_size_m()).recall;
      }
      random_recall += r / kRandomDraws;
    }
  }
  const double n = static_cast<double>(data.test.size());
  door_recall /= n;
  random_recall /= n;
  const auto mean_cascade = average_scores(cascade), mean_hull = average_scores(hull);
  const double interior_margin = mean_cascade.interior.f1 - mean_hull.interior.f1;
  const double door_margin = door_recall - random_recall;
  const double total = ctx.build_seconds() + since(t0);
  Result r{6, "desk-scale learnability", interior_margin >= 0.10 && door_margin >= 0.20 && total < 3600.0, "", total};
  r.detail = fmt("interior F1 %.3f vs hull %.3f (margin %+.3f, need +0.10); door recall %.3f vs random %.3f (margin "
                 "%+.3f, need +0.20); furniture F1 %.3f; %d/%zu empty; %zu test rooms; %.0fs incl. training",
                 mean_cascade.interior.f1, mean_hull.interior.f1, interior_margin, door_recall, random_recall,
                 door_margin, mean_cascade.furniture.f1, empty_count, data.test.size(), data.test.size(), total);
  return r;
}

Result repeatability(Context& ctx) {
  const auto& data = ctx.data();
  const auto& models = ctx.models();
  const auto t0 = Clock::now();
  const int rooms = std::min<int>(ctx.settings().repeat_rooms, static_cast<int>(data.test.size()));
  Rng rng(ctx.settings().seed + 7);
  double sum = 0.0;
  int pairs = 0;
  for (int i = 0; i < rooms; ++i) {
    const auto& room = data.test[i].room;
    std::vector<CellMap> masks;
    for (int k = 0; k < ctx.settings().repeat_seeds; ++k) {
      SimConfig sim;
      sim.seed = rng.next_u64();
      masks.push_back(cascade_or_empty(simulate_walk(room, sim), models, room).interior);
    }
    for (std::size_t a = 0; a < masks.size(); ++a)
      for (std::size_t b = a + 1; b < masks.size(); ++b) {
        sum += mask_iou(masks[a], masks[b]);
        ++pairs;
      }
  }
  const double mean = pairs ? sum / pairs : 0.0;
  const double secs = since(t0);
  return {7, "repeatability", pairs > 0 && mean >= 0.60,
          fmt("mean pairwise interior IoU %.3f over %d rooms x %d seeds (need >= 0.60), %.1fs", mean, rooms,
              ctx.settings().repeat_seeds, secs),
          secs};
}

Result serialization(const Settings& s) {
  const auto t0 = Clock::now();
  Rng rng(s.seed + 8);
  const auto dir = std::filesystem::temp_directory_path() /
                   ("walkplan_acceptance_" + std::to_string(static_cast<unsigned long long>(s.seed)));
  std::filesystem::create_directories(dir);
  int failures[4] = {0, 0, 0, 0};
  int done = 0;
  while (done < 100) {
    GenConfig g;
    g.seed = rng.next_u64();
    Dfpg room;
    try {
      room = generate_room(g);
    } catch (const GenerationError&) {
      continue;
    }
    ++done;
    // Rooms.
    const auto room_path = dir / "room.json";
    save_dfpg(room_path, room);
    const auto room_bytes = read_text_file(room_path);
    const auto room_back = load_dfpg(room_path);
    save_dfpg(room_path, room_back);
    failures[0] += !(room_back == room) || read_text_file(room_path) != room_bytes;
    // Trajectories.
    SimConfig sim;
    sim.seed = rng.next_u64();
    const auto traj = simulate_walk(room, sim);
    const auto traj_path = dir / "traj.json";
    save_trajectory(traj_path, traj);
    const auto traj_bytes = read_text_file(traj_path);
    const auto traj_back = load_trajectory(traj_path);
    save_trajectory(traj_path, traj_back);
    failures[1] += !(traj_back == traj) || read_text_file(traj_path) != traj_bytes;
    // Floor plans.
    auto plan = floorplan_from_dfpg(room);
    plan.provenance.checkpoints = {fnv1a_hex(std::to_string(rng.next_u64())), fnv1a_hex(std::to_string(rng.next_u64()))};
    plan.provenance.seeds = {rng.next_u64(), sim.seed};
    plan.provenance.config_hash = fnv1a_hex(std::to_string(rng.next_u64()));
    const auto plan_path = dir / "plan.json";
    write_json_file(plan_path, floorplan_to_json(plan));
    const auto plan_bytes = read_text_file(plan_path);
    const auto plan_back = floorplan_from_json(read_json_file(plan_path));
    write_json_file(plan_path, floorplan_to_json(plan_back));
    failures[2] += !(plan_back == plan) || read_text_file(plan_path) != plan_bytes;
    // Checkpoints.
    const auto ckpt_path = dir / "model.ckpt";
    std::string bytes, again;
    if (done % 2) {
      nn::EncDec model({rng.uniform_int(1, 3), rng.uniform_int(1, 4), rng.uniform_int(1, 4), 2}, rng);
      nn::save_checkpoint(ckpt_path, nn::checkpoint_header(model), model.params());
      bytes = read_text_file(ckpt_path);
      const auto back = nn::encdec_from_checkpoint(nn::load_checkpoint(ckpt_path));
      again = nn::serialize_checkpoint(nn::checkpoint_header(back), back.params());
    } else {
      nn::EccConfig cfg;
      cfg.block_depths = {rng.uniform_int(1, 8), rng.uniform_int(1, 8), 2};
      cfg.fgn_hidden = {rng.uniform_int(1, 8), rng.uniform_int(1, 8)};
      nn::EccNet model(cfg, rng);
      nn::save_checkpoint(ckpt_path, nn::checkpoint_header(model), model.params());
      bytes = read_text_file(ckpt_path);
      const auto back = nn::ecc_from_checkpoint(nn::load_checkpoint(ckpt_path));
      again = nn::serialize_checkpoint(nn::checkpoint_header(back), back.params());
    }
    failures[3] += bytes != again;
  }
  std::filesystem::remove_all(dir);
  const double secs = since(t0);
  const int total = failures[0] + failures[1] + failures[2] + failures[3];
  return {8, "serialization round-trips", total == 0,
          fmt("%d instances each; mismatches: dfpg %d, trajectory %d, floorplan %d, checkpoint %d; %.1fs", done,
              failures[0], failures[1], failures[2], failures[3], secs),
          secs};
}

Result run_criterion(int id, Context& ctx) {
  switch (id) {
    case 1: return gradient_oracle(ctx.settings());
    case 2: return mrf_exactness(ctx.settings());
    case 3: return structural_soundness(ctx);
    case 4: return simulator_invariants(ctx.settings());
    case 5: return metric_consistency(ctx.settings());
    case 6: return learnability(ctx);
    case 7: return repeatability(ctx);
    case 8: return serialization(ctx.settings());
    default: throw std::invalid_argument("unknown criterion " + std::to_string(id));
  }
}

}  // namespace walkplan::acceptance
