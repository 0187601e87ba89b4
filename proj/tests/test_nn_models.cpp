#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "walkplan/boundary.hpp"
#include "walkplan/nn/checkpoint.hpp"
#include "walkplan/nn/ecc.hpp"
#include "walkplan/nn/encdec.hpp"
#include "walkplan/nn/ops.hpp"
#include "walkplan/nn/train.hpp"

using namespace walkplan;
using namespace walkplan::nn;

namespace {

std::vector<double> random_values(std::size_t n, Rng& rng, double scale = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-scale, scale);
  return v;
}

std::vector<double> values_of(const Tensor& t) { return {t.values().begin(), t.values().end()}; }

/// Six-node ring with opposite links, as in a boundary graph.
GraphInput tiny_graph(int features, Rng& rng) {
  const int n = 6;
  GraphInput g;
  for (int i = 0; i < n; ++i) {
    g.edges.push_back({(i + n - 1) % n, i});
    g.edges.push_back({(i + 1) % n, i});
    g.edges.push_back({(i + 3) % n, i});
  }
  g.node_features = Tensor({n, features}, random_values(static_cast<std::size_t>(n) * features, rng));
  g.edge_features = Tensor({3 * n, 2}, random_values(3 * n * 2, rng));
  return g;
}

EccConfig tiny_ecc(int features) {
  EccConfig cfg;
  cfg.block_depths = {4, 3, 2};
  cfg.fgn_hidden = {3, 4};
  cfg.node_feature_len = features;
  return cfg;
}

PixelSample toy_pixel_sample(int n, Rng& rng) {
  PixelSample s;
  s.input = Tensor({1, n, n}, random_values(static_cast<std::size_t>(n) * n, rng));
  for (double v : s.input.values()) s.target.push_back(v > 0.2 ? 1 : 0);
  return s;
}

CellMap rotate_cw(const CellMap& m) {
  CellMap out(m.n());
  for (int r = 0; r < m.n(); ++r)
    for (int c = 0; c < m.n(); ++c) out.at(c, m.n() - 1 - r) = m.at(r, c);
  return out;
}

CellMap mirror_columns(const CellMap& m) {
  CellMap out(m.n());
  for (int r = 0; r < m.n(); ++r)
    for (int c = 0; c < m.n(); ++c) out.at(r, m.n() - 1 - c) = m.at(r, c);
  return out;
}

std::vector<std::vector<double>> sorted_rows(const Tensor& t) {
  std::vector<std::vector<double>> rows;
  const int f = t.dim(1);
  for (int i = 0; i < t.dim(0); ++i) {
    std::vector<double> row(t.values().begin() + i * f, t.values().begin() + (i + 1) * f);
    for (auto& x : row) x = std::round(x * 1e9) / 1e9;
    rows.push_back(row);
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

}  // namespace

TEST_SUITE("nn_models") {

TEST_CASE("encoder-decoder shapes") {
  Rng rng(1);
  for (int levels : {1, 2, 3}) {
    EncDec net({levels, 2, 3, 2}, rng);
    const int n = 8 << (levels - 1);
    const auto y = net.forward(Tensor({3, n, n}, 0.5));
    CHECK(y.shape() == Shape{2, n, n});
  }
  EncDec net({3, 2, 1, 2}, rng);
  CHECK_THROWS_AS(net.forward(Tensor({1, 12, 12})), std::invalid_argument);
  CHECK_THROWS_AS(net.forward(Tensor({2, 16, 16})), std::invalid_argument);
}

TEST_CASE("zero weights give zero logits") {
  Rng rng(2);
  EncDec net({2, 4, 1, 2}, rng);
  for (auto& e : net.params().entries()) {
    auto& t = net.params().get(e.name);
    std::fill(t.mutable_values().begin(), t.mutable_values().end(), 0.0);
  }
  const auto y = net.forward(Tensor({1, 8, 8}, random_values(64, rng)));
  for (double v : y.values()) CHECK(v == 0.0);
}

TEST_CASE("encoder-decoder gradients") {
  Rng rng(3);
  for (int draw = 0; draw < 20; ++draw) {
    EncDec net({3, 2, 1, 2}, rng);
    const Tensor x({1, 8, 8}, random_values(64, rng));
    const auto w = random_values(2 * 64, rng);
    const auto r = oracle::check_gradients([&] { return weighted_sum(net.forward(x), w); }, net.params().trainable());
    CHECK(r.checked > 0);
    CHECK(r.max_rel_error < 1e-4);
  }
}

TEST_CASE("ecc gradients on a tiny graph") {
  Rng rng(4);
  for (int draw = 0; draw < 20; ++draw) {
    EccNet net(tiny_ecc(3), rng);
    const auto g = tiny_graph(3, rng);
    const std::vector<int> labels{0, 1, 1, 0, 0, 1};
    for (bool training : {true, false}) {
      const auto r = oracle::check_gradients(
          [&] { return cross_entropy(net.forward(g, training), labels, {}, ClassAxis::Last); }, net.params().trainable());
      CHECK(r.checked > 0);
      CHECK(r.max_rel_error < 1e-4);
    }
  }
}

TEST_CASE("ecc with zero inputs and root gives identical nodes") {
  Rng rng(5);
  EccNet net(tiny_ecc(3), rng);
  auto g = tiny_graph(3, rng);
  g.node_features = Tensor({6, 3}, 0.0);
  auto& root = net.params().get("blk0.root");
  std::fill(root.mutable_values().begin(), root.mutable_values().end(), 0.0);
  const auto y = values_of(net.forward(g, false));
  for (int i = 1; i < 6; ++i) {
    CHECK(y[2 * i] == doctest::Approx(y[0]).epsilon(1e-12));
    CHECK(y[2 * i + 1] == doctest::Approx(y[1]).epsilon(1e-12));
  }
}

TEST_CASE("identity filters average the neighbours") {
  Rng rng(6);
  EccConfig cfg;
  cfg.block_depths = {2};
  cfg.fgn_hidden = {2, 2};
  cfg.node_feature_len = 2;
  cfg.batch_norm = false;
  EccNet net(cfg, rng);
  auto zero = [&](const char* name) {
    auto& t = net.params().get(name);
    std::fill(t.mutable_values().begin(), t.mutable_values().end(), 0.0);
  };
  zero("blk0.root");
  zero("blk0.bias");
  zero("blk0.fgn2.w");
  auto b = net.params().get("blk0.fgn2.b").mutable_values();
  std::copy_n(std::vector<double>{1, 0, 0, 1}.begin(), 4, b.begin());
  const auto g = tiny_graph(2, rng);
  const auto y = values_of(net.forward(g, false));
  const auto h = values_of(g.node_features);
  for (int i = 0; i < 6; ++i)
    for (int k = 0; k < 2; ++k) {
      const double mean = (h[((i + 5) % 6) * 2 + k] + h[((i + 1) % 6) * 2 + k] + h[((i + 3) % 6) * 2 + k]) / 3.0;
      CHECK(y[i * 2 + k] == doctest::Approx(mean).epsilon(1e-12));
    }
}

TEST_CASE("ecc ignores neighbour order") {
  Rng rng(7);
  EccNet net(tiny_ecc(3), rng);
  const auto g = tiny_graph(3, rng);
  auto shuffled = g;
  std::vector<int> perm(g.edges.size());
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm.begin(), perm.end());
  std::vector<double> ef(g.edge_features.numel());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    shuffled.edges[k] = g.edges[perm[k]];
    for (int c = 0; c < 2; ++c) ef[k * 2 + c] = g.edge_features.values()[perm[k] * 2 + c];
  }
  shuffled.edge_features = Tensor({static_cast<int>(perm.size()), 2}, ef);
  const auto a = values_of(net.forward(g, false)), b = values_of(net.forward(shuffled, false));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
}

TEST_CASE("adam leaves parameters alone on zero gradients") {
  ParamStore store;
  store.add("w", {3}, {1, -2, 3});
  Adam opt(store, {});
  store.zero_grad();
  for (int k = 0; k < 5; ++k) opt.step();
  CHECK(values_of(store.get("w")) == std::vector<double>{1, -2, 3});
  CHECK(opt.steps() == 5);
}

TEST_CASE("adam first step moves by the learning rate") {
  ParamStore store;
  store.add("w", {2}, {0, 0});
  Adam opt(store, {0.01});
  auto g = store.get("w").mutable_grad();
  g[0] = 3.0;
  g[1] = -0.5;
  opt.step();
  CHECK(store.get("w").values()[0] == doctest::Approx(-0.01).epsilon(1e-6));
  CHECK(store.get("w").values()[1] == doctest::Approx(0.01).epsilon(1e-6));
}

TEST_CASE("default hyperparameters") {
  const TrainConfig t;
  CHECK(t.beta1 == 0.5);
  CHECK(t.beta2 == 0.999);
  CHECK(t.lr == 0.005);
  const EccConfig e;
  CHECK(e.block_depths == std::vector<int>{64, 128, 128, 64, 2});
  CHECK(e.fgn_hidden == std::pair{16, 32});
  TrainConfig bad;
  bad.beta1 = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("a single sample can be memorised") {
  Rng rng(8);
  EncDec net({2, 4, 1, 2}, rng);
  const std::vector<PixelSample> one{toy_pixel_sample(8, rng)};
  TrainConfig cfg;
  cfg.epochs = 200;
  cfg.lr = 0.01;
  const auto report = train(net, one, one, cfg);
  CHECK(report.best_accuracy == 1.0);
  CHECK(accuracy(net, one) == 1.0);
}

TEST_CASE("ecc can memorise a graph") {
  Rng rng(9);
  EccNet net(tiny_ecc(3), rng);
  const std::vector<GraphSample> one{{tiny_graph(3, rng), {0, 1, 1, 0, 1, 0}}};
  TrainConfig cfg;
  cfg.epochs = 200;
  cfg.lr = 0.01;
  train(net, one, one, cfg);
  CHECK(accuracy(net, one) == 1.0);
}

TEST_CASE("training is deterministic and keeps the best snapshot") {
  Rng data_rng(10);
  std::vector<PixelSample> set;
  for (int k = 0; k < 4; ++k) set.push_back(toy_pixel_sample(8, data_rng));
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.augment = true;
  cfg.batch_size = 2;
  cfg.seed = 3;
  auto run = [&] {
    Rng init(11);
    EncDec net({2, 2, 1, 2}, init);
    const auto report = train(net, set, set, cfg);
    return std::pair{report, net.params()};
  };
  const auto [ra, pa] = run();
  const auto [rb, pb] = run();
  CHECK(serialize_checkpoint({}, pa) == serialize_checkpoint({}, pb));
  CHECK(ra.epochs.size() == 5);
  for (const auto& e : ra.epochs) CHECK(e.val_accuracy <= ra.best_accuracy);
  Rng init(11);
  EncDec check({2, 2, 1, 2}, init);
  check.params() = pa;
  CHECK(accuracy(check, set) == doctest::Approx(ra.best_accuracy).epsilon(1e-12));
}

TEST_CASE("curriculum with no easy samples is plain training") {
  Rng data_rng(12);
  std::vector<PixelSample> hard;
  for (int k = 0; k < 3; ++k) hard.push_back(toy_pixel_sample(8, data_rng));
  TrainConfig easy_cfg, hard_cfg;
  easy_cfg.lr = 0.005;
  hard_cfg.lr = 0.0001;
  hard_cfg.epochs = 3;
  Rng ia(13), ib(13);
  EncDec a({2, 2, 1, 2}, ia), b({2, 2, 1, 2}, ib);
  curriculum_train(a, {}, hard, hard, easy_cfg, hard_cfg);
  train(b, hard, hard, hard_cfg);
  CHECK(serialize_checkpoint({}, a.params()) == serialize_checkpoint({}, b.params()));
}

TEST_CASE("divergence reports the epoch") {
  const bool before = finite_checks();
  set_finite_checks(false);
  Rng rng(14);
  EncDec net({1, 2, 1, 2}, rng);
  auto s = toy_pixel_sample(4, rng);
  s.input.mutable_values()[0] = std::numeric_limits<double>::quiet_NaN();
  const std::vector<PixelSample> set{s};
  TrainConfig cfg;
  cfg.epochs = 2;
  try {
    train(net, set, set, cfg);
    FAIL("expected divergence");
  } catch (const TrainingDiverged& e) {
    CHECK(e.epoch() == 1);
  }
  set_finite_checks(before);
}

TEST_CASE("pixel augmentation") {
  Rng rng(15);
  PixelSample s;
  s.input = Tensor({2, 4, 4}, random_values(32, rng));
  for (int i = 0; i < 16; ++i) s.target.push_back(i % 3);
  s.mask = random_values(16, rng);
  const auto twice = augment(augment(s, 2, false, false), 2, false, false);
  CHECK(values_of(twice.input) == values_of(s.input));
  CHECK(twice.target == s.target);
  CHECK(twice.mask == s.mask);
  const auto flips = augment(augment(s, 0, true, true), 2, false, false);
  CHECK(values_of(flips.input) == values_of(s.input));
  const auto four = augment(augment(augment(augment(s, 1, false, false), 1, false, false), 1, false, false), 1, false, false);
  CHECK(values_of(four.input) == values_of(s.input));
  // Pixel (0,0) moves to (0,3) on a clockwise turn.
  const auto one = augment(s, 1, false, false);
  CHECK(one.target[3] == s.target[0]);
  CHECK(one.input.values()[3] == s.input.values()[0]);
  // Axis channels trade places on odd turns.
  s.axis_channels = std::pair{0, 1};
  const auto swapped = augment(s, 1, false, false);
  CHECK(swapped.input.values()[3] == s.input.values()[16]);
}

TEST_CASE("graph augmentation matches the transformed room") {
  const auto interior = fixture::mask({"..........", ".#######..", ".#######..", ".####.....", ".####.....",
                                       ".######...", ".######...", "..........", "..........", ".........."});
  Rng rng(16);
  const auto walk = fixture::random_mask(10, 0.4, rng);
  auto sample_of = [](const CellMap& in, const CellMap& w) {
    const auto g = build_boundary_graph(extract_boundary_loop(in), w);
    return GraphSample{graph_input(g, in.n()), std::vector<int>(g.node_count(), 0)};
  };
  const auto base = sample_of(interior, walk);
  for (int turns = 0; turns < 4; ++turns)
    for (bool fh : {false, true}) {
      CellMap in = interior, w = walk;
      for (int t = 0; t < turns; ++t) in = rotate_cw(in), w = rotate_cw(w);
      if (fh) in = mirror_columns(in), w = mirror_columns(w);
      const auto direct = sample_of(in, w);
      const auto augmented = augment(base, turns, fh, false);
      CHECK(sorted_rows(augmented.graph.node_features) == sorted_rows(direct.graph.node_features));
      CHECK(sorted_rows(augmented.graph.edge_features) == sorted_rows(direct.graph.edge_features));
    }
}

TEST_CASE("inverse frequency weights") {
  const std::vector<std::vector<int>> labels{{0, 0, 0, 1}};
  const auto w = inverse_frequency_weights(labels, 2);
  CHECK(w[0] == doctest::Approx(0.5));
  CHECK(w[1] == doctest::Approx(1.5));
  const std::vector<std::vector<double>> masks{{1, 0, 0, 1}};
  const auto wm = inverse_frequency_weights(labels, 2, masks);
  CHECK(wm[0] == doctest::Approx(1.0));
  CHECK(wm[1] == doctest::Approx(1.0));
}

TEST_CASE("checkpoints round trip byte-exactly") {
  Rng rng(17);
  EncDec enc({2, 3, 4, 2}, rng);
  const auto bytes = serialize_checkpoint(checkpoint_header(enc), enc.params());
  const auto back = encdec_from_checkpoint(parse_checkpoint(bytes));
  CHECK(serialize_checkpoint(checkpoint_header(back), back.params()) == bytes);
  CHECK(back.config().base_features == 3);
  const Tensor x({4, 8, 8}, random_values(256, rng));
  CHECK(values_of(back.forward(x)) == values_of(enc.forward(x)));

  EccNet ecc(tiny_ecc(5), rng);
  const auto eb = serialize_checkpoint(checkpoint_header(ecc), ecc.params());
  const auto eback = ecc_from_checkpoint(parse_checkpoint(eb));
  CHECK(serialize_checkpoint(checkpoint_header(eback), eback.params()) == eb);
  CHECK(checkpoint_id(eb) != checkpoint_id(bytes));

  CHECK_THROWS_AS(parse_checkpoint("nope"), CheckpointError);
  CHECK_THROWS_AS(parse_checkpoint(bytes.substr(0, bytes.size() - 3)), CheckpointError);
  CHECK_THROWS_AS(ecc_from_checkpoint(parse_checkpoint(bytes)), CheckpointError);
}

TEST_CASE("parameter stores copy deeply") {
  ParamStore a;
  a.add("w", {2}, {1, 2});
  ParamStore b = a;
  b.get("w").mutable_values()[0] = 9;
  CHECK(a.get("w").values()[0] == 1);
  CHECK(a.parameter_count() == 2);
  CHECK_THROWS(a.add("w", {1}, {0}));
}

}
