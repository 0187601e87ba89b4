#include "walkplan/pipeline.hpp"

#include <algorithm>
#include <ostream>
#include <set>

#include "walkplan/boundary.hpp"
#include "walkplan/dfpg_io.hpp"
#include "walkplan/nn/checkpoint.hpp"
#include "walkplan/nn/ops.hpp"

namespace walkplan {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

CellMap channel_map(const nn::Tensor& t, int channel, int n) {
  CellMap m(n);
  const auto v = t.values();
  const std::size_t plane = static_cast<std::size_t>(n) * n;
  for (std::size_t i = 0; i < plane; ++i) m[i] = v[channel * plane + i];
  return m;
}

std::vector<int> binary_labels(const CellMap& m) {
  std::vector<int> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = m[i] > 0.5 ? 1 : 0;
  return out;
}

std::vector<SegmentRef> door_segments(const BoundaryLoop& loop, const std::vector<SegmentLabel>& labels) {
  std::vector<SegmentRef> out;
  for (int i = 0; i < loop.size(); ++i)
    if (labels[i] == SegmentLabel::Door) out.push_back(loop[i].seg);
  return out;
}

bool has_door(const Dfpg& room) {
  for (auto l : room.h_segments())
    if (l == SegmentLabel::Door) return true;
  for (auto l : room.v_segments())
    if (l == SegmentLabel::Door) return true;
  return false;
}

std::vector<Sample> generate_samples(const GenConfig& gen, const SimConfig& sim, int count, std::uint64_t stream,
                                     int& skipped, std::ostream* log) {
  std::vector<Sample> out;
  std::set<std::string> seen;
  const int max_attempts = 4 * count + 100;
  for (int i = 0; static_cast<int>(out.size()) < count; ++i) {
    if (i >= max_attempts) throw GenerationError();
    const std::uint64_t key = (stream << 40) + static_cast<std::uint64_t>(i) + 1;
    GenConfig g = gen;
    g.seed = splitmix64(gen.seed + key * kGolden);
    SimConfig s = sim;
    s.seed = splitmix64(sim.seed ^ (key * kGolden + 0x5851F42D4C957F2DULL));
    try {
      Sample sample;
      sample.room = generate_room(g);
      if (!has_door(sample.room) || derive_furniture_map(sample.room).count_set() == 0) {
        ++skipped;
        continue;
      }
      sample.id = fnv1a_hex(dfpg_to_json(sample.room).dump());
      if (!seen.insert(sample.id).second) {
        ++skipped;
        continue;
      }
      sample.trajectory = simulate_walk(sample.room, s);
      sample.room_seed = g.seed;
      sample.walk_seed = s.seed;
      out.push_back(std::move(sample));
    } catch (const GenerationError&) {
      ++skipped;
    } catch (const SimulationError&) {
      ++skipped;
    }
  }
  if (log && skipped > 0) *log << "skipped " << skipped << " failed or duplicate rooms\n";
  return out;
}

template <class Fn>
auto map_samples(const std::vector<Sample>& samples, Fn fn) {
  std::vector<decltype(fn(samples.front()))> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(fn(s));
  return out;
}

std::vector<double> inverse_weights_for(const std::vector<nn::PixelSample>& set) {
  std::vector<std::vector<int>> labels;
  std::vector<std::vector<double>> masks;
  for (const auto& s : set) {
    labels.push_back(s.target);
    masks.push_back(s.mask.empty() ? std::vector<double>(s.target.size(), 1.0) : s.mask);
  }
  return nn::inverse_frequency_weights(labels, 2, masks);
}

nn::TrainConfig seeded(nn::TrainConfig cfg, std::uint64_t seed, std::uint64_t stream) {
  cfg.seed = splitmix64(seed + stream * kGolden);
  return cfg;
}

}  // namespace

std::vector<std::string> CascadeModels::ids() const {
  return {nn::checkpoint_id(nn::serialize_checkpoint(nn::checkpoint_header(stage1), stage1.params())),
          nn::checkpoint_id(nn::serialize_checkpoint(nn::checkpoint_header(stage2), stage2.params())),
          nn::checkpoint_id(nn::serialize_checkpoint(nn::checkpoint_header(stage3), stage3.params()))};
}

void CascadeModels::save(const std::filesystem::path& dir) const {
  nn::save_checkpoint(dir / "stage1.ckpt", nn::checkpoint_header(stage1), stage1.params());
  nn::save_checkpoint(dir / "stage2.ckpt", nn::checkpoint_header(stage2), stage2.params());
  nn::save_checkpoint(dir / "stage3.ckpt", nn::checkpoint_header(stage3), stage3.params());
}

CascadeModels CascadeModels::load(const std::filesystem::path& dir) {
  return {nn::encdec_from_checkpoint(nn::load_checkpoint(dir / "stage1.ckpt")),
          nn::ecc_from_checkpoint(nn::load_checkpoint(dir / "stage2.ckpt")),
          nn::encdec_from_checkpoint(nn::load_checkpoint(dir / "stage3.ckpt"))};
}

nlohmann::json CascadeOptions::to_json() const {
  return {{"gamma_in_to_out", mrf.gamma_in_to_out},
          {"gamma_out_to_in", mrf.gamma_out_to_in},
          {"gamma_border", mrf.gamma_border},
          {"door_width", door_width},
          {"walk_cutoff_m", walk_cutoff_m}};
}

nn::Tensor stage1_input(const CellMap& walk) { return nn::Tensor({1, walk.n(), walk.n()}, walk.values()); }

nn::GraphInput stage2_input(const BoundaryLoop& loop, const CellMap& walk) {
  return nn::graph_input(build_boundary_graph(loop, walk), walk.n());
}

CellMap segment_touch_map(int n, const std::vector<SegmentRef>& segments, Axis axis) {
  CellMap m(n);
  for (const auto& s : segments) {
    if (s.axis != axis) continue;
    const auto [a, b] = incident_cells(s);
    for (const Cell& c : {a, b})
      if (m.contains(c.row, c.col)) m.at(c.row, c.col) = 1.0;
  }
  return m;
}

nn::Tensor stage3_input(const CellMap& walk, const CellMap& interior, const std::vector<SegmentRef>& door_segments) {
  const int n = walk.n();
  if (interior.n() != n) throw std::invalid_argument("stage3_input: shape mismatch");
  std::vector<double> v;
  v.reserve(4 * walk.size());
  for (const CellMap* m : {&walk, &interior}) v.insert(v.end(), m->values().begin(), m->values().end());
  for (Axis a : {Axis::Horizontal, Axis::Vertical}) {
    const auto t = segment_touch_map(n, door_segments, a);
    v.insert(v.end(), t.values().begin(), t.values().end());
  }
  return nn::Tensor({4, n, n}, std::move(v));
}

std::vector<DoorRun> door_runs_as_segments(const BoundaryLoop& loop, const std::vector<SegmentLabel>& labels) {
  std::vector<DoorRun> out;
  for (const auto& run : door_runs(labels)) {
    DoorRun door;
    for (int p : run) door.push_back(loop[p].seg);
    out.push_back(std::move(door));
  }
  return out;
}

CellMap predict_interior(const nn::EncDec& stage1, const CellMap& walk, const MrfConfig& mrf, CellMap* raw) {
  nn::NoGradGuard no_grad;
  const int n = walk.n();
  const auto logits = stage1.forward(stage1_input(walk));
  const auto pred = nn::argmax(logits, nn::ClassAxis::First);
  CellMap labels(n);
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = pred[i];
  if (raw) *raw = labels;
  try {
    return repair_connectivity(mrf_smooth(labels, mrf));
  } catch (const EmptyInteriorError&) {
    nn::Tensor probs(logits.shape(), nn::softmax(logits, nn::ClassAxis::First));
    throw EmptyInteriorPrediction(channel_map(probs, 1, n));
  }
}

std::vector<SegmentLabel> transfer_door_labels(const BoundaryLoop& loop, const Dfpg& gt) {
  std::set<SegmentRef> doors;
  for (const auto& run : floorplan_from_dfpg(gt).doors) doors.insert(run.begin(), run.end());
  std::vector<SegmentLabel> out(loop.size(), SegmentLabel::Wall);
  for (int i = 0; i < loop.size(); ++i) {
    const SegmentRef s = loop[i].seg;
    for (int d = -1; d <= 1; ++d) {
      SegmentRef t = s;
      (s.axis == Axis::Horizontal ? t.row : t.col) += d;
      if (doors.contains(t)) out[i] = SegmentLabel::Door;
    }
  }
  return out;
}

std::optional<nn::GraphSample> stage2_predicted_sample(const Sample& s, const nn::EncDec& stage1,
                                                       const CascadeOptions& opts) {
  const CellMap walk = inverse_distance_map(s.room, s.trajectory, opts.walk_cutoff_m);
  CellMap interior;
  try {
    interior = predict_interior(stage1, walk, opts.mrf);
  } catch (const EmptyInteriorPrediction&) {
    return std::nullopt;
  }
  const auto loop = extract_boundary_loop(interior);
  std::vector<int> labels;
  for (auto l : transfer_door_labels(loop, s.room)) labels.push_back(l == SegmentLabel::Door ? 1 : 0);
  return nn::GraphSample{stage2_input(loop, walk), std::move(labels)};
}

FloorPlan run_cascade(const Trajectory& traj, const CascadeModels& models, int n, double cell_size_m,
                      const CascadeOptions& opts, CascadeTrace* trace) {
  nn::NoGradGuard no_grad;
  const CellMap walk = inverse_distance_map(n, cell_size_m, traj, opts.walk_cutoff_m);

  CellMap raw;
  const CellMap interior = predict_interior(models.stage1, walk, opts.mrf, &raw);

  const BoundaryLoop loop = extract_boundary_loop(interior);
  const auto logits2 = models.stage2.forward(stage2_input(loop, walk), false);
  const auto pred2 = nn::argmax(logits2, nn::ClassAxis::Last);
  std::vector<SegmentLabel> labels(pred2.size());
  for (std::size_t i = 0; i < pred2.size(); ++i) labels[i] = pred2[i] == 1 ? SegmentLabel::Door : SegmentLabel::Wall;
  labels = normalize_door_width(loop, clean_isolated_door_nodes(labels), opts.door_width);

  const auto logits3 = models.stage3.forward(stage3_input(walk, interior, door_segments(loop, labels)));
  const auto pred3 = nn::argmax(logits3, nn::ClassAxis::First);
  CellMap furniture(n);
  for (std::size_t i = 0; i < furniture.size(); ++i) furniture[i] = (pred3[i] == 1 && interior[i] > 0.5) ? 1.0 : 0.0;
  furniture = clean_isolated_cells(furniture, 1.0);

  FloorPlan plan;
  plan.n = n;
  plan.cell_size_m = cell_size_m;
  plan.interior = interior;
  plan.doors = door_runs_as_segments(loop, labels);
  plan.furniture = std::move(furniture);
  plan.provenance.checkpoints = models.ids();
  plan.provenance.config_hash = fnv1a_hex(opts.to_json().dump());

  if (trace) *trace = {walk, raw, interior, loop, labels};
  return plan;
}

Dataset build_dataset(const GenConfig& gen, const SimConfig& sim, int count, std::ostream* log) {
  if (count < 10) throw std::invalid_argument("build_dataset: count must be at least 10");
  gen.validate();
  sim.validate();
  Dataset data;
  auto all = generate_samples(gen, sim, count, 0, data.skipped, log);
  const std::size_t n_val = static_cast<std::size_t>(count) / 10;
  const std::size_t n_test = static_cast<std::size_t>(count) / 10;
  const std::size_t n_train = all.size() - n_val - n_test;
  for (std::size_t i = 0; i < all.size(); ++i) {
    auto& dst = i < n_train ? data.train : (i < n_train + n_val ? data.val : data.test);
    dst.push_back(std::move(all[i]));
  }
  return data;
}

std::vector<Sample> easy_samples(const GenConfig& gen, const SimConfig& sim, int count) {
  GenConfig g = gen;
  g.max_concavities = 0;
  int skipped = 0;
  return generate_samples(g, sim, count, 1, skipped, nullptr);
}

nlohmann::json sample_targets(const Sample& s) {
  const CellMap interior = derive_interior_map(s.room);
  const auto loop = extract_boundary_loop(interior);
  std::string labels;
  for (auto l : loop_labels(loop, s.room)) labels += l == SegmentLabel::Door ? 'D' : 'W';
  return {{"stage1", {{"interior_rle", rle_encode(interior)}}},
          {"stage2", {{"loop_labels", labels}}},
          {"stage3", {{"furniture_rle", rle_encode(derive_furniture_map(s.room))}, {"loss_mask_rle", rle_encode(interior)}}}};
}

void write_dataset(const Dataset& data, const std::filesystem::path& dir) {
  nlohmann::json manifest{{"skipped", data.skipped}};
  const std::pair<const char*, const std::vector<Sample>*> splits[] = {{"train", &data.train}, {"val", &data.val}, {"test", &data.test}};
  for (const auto& [name, samples] : splits) {
    auto& list = manifest["splits"][name];
    list = nlohmann::json::array();
    for (const auto& s : *samples) {
      const auto base = dir / name / s.id;
      save_dfpg(base / "room.json", s.room);
      save_trajectory(base / "trajectory.json", s.trajectory);
      write_json_file(base / "targets.json", sample_targets(s));
      list.push_back({{"id", s.id}, {"room_seed", s.room_seed}, {"walk_seed", s.walk_seed}});
    }
  }
  write_json_file(dir / "manifest.json", manifest);
}

Dataset read_dataset(const std::filesystem::path& dir) {
  const auto manifest = read_json_file(dir / "manifest.json");
  Dataset data;
  data.skipped = manifest.value("skipped", 0);
  for (auto [name, dst] : {std::pair{"train", &data.train}, std::pair{"val", &data.val}, std::pair{"test", &data.test}}) {
    for (const auto& e : manifest.at("splits").at(name)) {
      Sample s;
      s.id = e.at("id").get<std::string>();
      s.room_seed = e.at("room_seed").get<std::uint64_t>();
      s.walk_seed = e.at("walk_seed").get<std::uint64_t>();
      s.room = load_dfpg(dir / name / s.id / "room.json");
      s.trajectory = load_trajectory(dir / name / s.id / "trajectory.json");
      dst->push_back(std::move(s));
    }
  }
  return data;
}

nn::PixelSample stage1_sample(const Sample& s, double walk_cutoff_m) {
  const CellMap walk = inverse_distance_map(s.room, s.trajectory, walk_cutoff_m);
  return {stage1_input(walk), binary_labels(derive_interior_map(s.room)), {}, std::nullopt};
}

nn::GraphSample stage2_sample(const Sample& s, double walk_cutoff_m) {
  const CellMap walk = inverse_distance_map(s.room, s.trajectory, walk_cutoff_m);
  const auto loop = extract_boundary_loop(derive_interior_map(s.room));
  std::vector<int> labels;
  for (auto l : loop_labels(loop, s.room)) labels.push_back(l == SegmentLabel::Door ? 1 : 0);
  return {stage2_input(loop, walk), std::move(labels)};
}

nn::PixelSample stage3_sample(const Sample& s, double walk_cutoff_m) {
  const CellMap walk = inverse_distance_map(s.room, s.trajectory, walk_cutoff_m);
  const CellMap interior = derive_interior_map(s.room);
  const auto loop = extract_boundary_loop(interior);
  nn::PixelSample out{stage3_input(walk, interior, door_segments(loop, loop_labels(loop, s.room))),
                      binary_labels(derive_furniture_map(s.room)), interior.values(), std::pair{2, 3}};
  return out;
}

nn::EncDec train_stage1(const Dataset& data, const std::vector<Sample>& easy, const CascadeTrainConfig& cfg,
                        nn::TrainReport* report, const nn::EpochCallback& on_epoch) {
  Rng init = Rng(cfg.seed).split(1);
  nn::EncDec model(cfg.stage1, init);
  const auto s1 = [](const Sample& s) { return stage1_sample(s); };
  const auto hard = map_samples(data.train, s1);
  const auto val = map_samples(data.val, s1);
  const auto easy_set = easy.empty() ? std::vector<nn::PixelSample>{} : map_samples(easy, s1);
  auto r = nn::curriculum_train(model, easy_set, hard, val, seeded(cfg.stage1_easy, cfg.seed, 11),
                                seeded(cfg.stage1_hard, cfg.seed, 12), on_epoch);
  if (report) *report = std::move(r);
  return model;
}

nn::EccNet train_stage2(const Dataset& data, const CascadeTrainConfig& cfg, nn::TrainReport* report,
                        const nn::EpochCallback& on_epoch, const nn::EncDec* stage1) {
  Rng init = Rng(cfg.seed).split(2);
  nn::EccNet model(cfg.stage2, init);
  const auto s2 = [](const Sample& s) { return stage2_sample(s); };
  auto train_set = map_samples(data.train, s2);
  auto val = map_samples(data.val, s2);
  if (stage1 && cfg.stage2_on_predicted) {
    for (const auto& s : data.train)
      if (auto p = stage2_predicted_sample(s, *stage1)) train_set.push_back(std::move(*p));
    std::vector<nn::GraphSample> predicted_val;
    for (const auto& s : data.val)
      if (auto p = stage2_predicted_sample(s, *stage1)) predicted_val.push_back(std::move(*p));
    if (!predicted_val.empty()) val = std::move(predicted_val);
  }
  nn::TrainConfig tc = seeded(cfg.stage2_train, cfg.seed, 21);
  if (cfg.balance_doors && tc.class_weights.empty()) {
    std::vector<std::vector<int>> labels;
    for (const auto& s : train_set) labels.push_back(s.labels);
    tc.class_weights = nn::inverse_frequency_weights(labels, 2);
  }
  auto r = nn::train(model, train_set, val, tc, on_epoch);
  if (report) *report = std::move(r);
  return model;
}

nn::EncDec train_stage3(const Dataset& data, const CascadeTrainConfig& cfg, nn::TrainReport* report,
                        const nn::EpochCallback& on_epoch) {
  Rng init = Rng(cfg.seed).split(3);
  nn::EncDec model(cfg.stage3, init);
  const auto s3 = [](const Sample& s) { return stage3_sample(s); };
  const auto train_set = map_samples(data.train, s3);
  const auto val = map_samples(data.val, s3);
  nn::TrainConfig tc = seeded(cfg.stage3_train, cfg.seed, 31);
  if (cfg.balance_furniture && tc.class_weights.empty()) tc.class_weights = inverse_weights_for(train_set);
  auto r = nn::train(model, train_set, val, tc, on_epoch);
  if (report) *report = std::move(r);
  return model;
}

CellMap hull_baseline(const CellMap& walk) {
  struct P {
    long long x, y;
  };
  std::vector<P> pts;
  const int n = walk.n();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (walk.at(r, c) > 0.0) pts.push_back({c, r});
  CellMap out(n);
  if (pts.empty()) return out;
  std::sort(pts.begin(), pts.end(), [](const P& a, const P& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  auto cross = [](const P& o, const P& a, const P& b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); };
  std::vector<P> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k > 1 ? k - 1 : k);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const P q{c, r};
      bool inside = true;
      if (hull.size() >= 3) {
        for (std::size_t i = 0; i < hull.size() && inside; ++i) inside = cross(hull[i], hull[(i + 1) % hull.size()], q) >= 0;
      } else {
        // Degenerate hull: a point or a segment.
        const P& a = hull.front();
        const P& b = hull.back();
        inside = cross(a, b, q) == 0 && std::min(a.x, b.x) <= q.x && q.x <= std::max(a.x, b.x) &&
                 std::min(a.y, b.y) <= q.y && q.y <= std::max(a.y, b.y);
      }
      if (inside) out.at(r, c) = 1.0;
    }
  return out;
}

std::vector<DoorRun> random_door_baseline(const BoundaryLoop& loop, int count, int width, Rng& rng) {
  std::vector<SegmentLabel> seeds(loop.size(), SegmentLabel::Wall);
  std::vector<SegmentLabel> labels = seeds;
  for (int attempt = 0; attempt < 50 * std::max(count, 1); ++attempt) {
    if (static_cast<int>(door_runs(labels).size()) >= count) break;
    std::vector<SegmentLabel> trial = seeds;
    trial[rng.uniform_int(0, loop.size() - 1)] = SegmentLabel::Door;
    auto grown = normalize_door_width(loop, trial, width);
    if (door_runs(grown).size() > door_runs(labels).size()) {
      seeds = std::move(trial);
      labels = std::move(grown);
    }
  }
  return door_runs_as_segments(loop, labels);
}

}  // namespace walkplan
