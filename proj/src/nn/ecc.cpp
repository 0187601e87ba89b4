#include "walkplan/nn/ecc.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "walkplan/nn/ops.hpp"

namespace walkplan::nn {

namespace {

std::string pname(int block, const char* leaf) { return "blk" + std::to_string(block) + "." + leaf; }

std::vector<double> normal_values(Rng& rng, std::size_t count, double sd) {
  std::vector<double> v(count);
  for (double& x : v) x = rng.normal() * sd;
  return v;
}

struct ParamShape {
  std::string name;
  Shape shape;
  bool trainable;
};

std::vector<ParamShape> layout(const EccConfig& cfg) {
  std::vector<ParamShape> out;
  const auto [h1, h2] = cfg.fgn_hidden;
  int din = cfg.node_feature_len;
  for (std::size_t l = 0; l < cfg.block_depths.size(); ++l) {
    const int b = static_cast<int>(l);
    const int dout = cfg.block_depths[l];
    out.push_back({pname(b, "root"), {din, dout}, true});
    out.push_back({pname(b, "bias"), {dout}, true});
    out.push_back({pname(b, "fgn0.w"), {cfg.edge_feature_len, h1}, true});
    out.push_back({pname(b, "fgn0.b"), {h1}, true});
    out.push_back({pname(b, "fgn1.w"), {h1, h2}, true});
    out.push_back({pname(b, "fgn1.b"), {h2}, true});
    out.push_back({pname(b, "fgn2.w"), {h2, dout * din}, true});
    out.push_back({pname(b, "fgn2.b"), {dout * din}, true});
    if (cfg.batch_norm) {
      out.push_back({pname(b, "bn.gamma"), {dout}, true});
      out.push_back({pname(b, "bn.beta"), {dout}, true});
      out.push_back({pname(b, "bn.mean"), {dout}, false});
      out.push_back({pname(b, "bn.var"), {dout}, false});
    }
    din = dout;
  }
  return out;
}

}  // namespace

void EccConfig::validate() const {
  if (block_depths.empty()) throw std::invalid_argument("ecc: at least one block required");
  for (int d : block_depths)
    if (d < 1) throw std::invalid_argument("ecc: block depths must be >= 1");
  if (block_depths.back() != 2) throw std::invalid_argument("ecc: last block depth must be 2");
  if (fgn_hidden.first < 1 || fgn_hidden.second < 1) throw std::invalid_argument("ecc: filter network widths must be >= 1");
  if (node_feature_len < 1 || edge_feature_len < 1) throw std::invalid_argument("ecc: feature lengths must be >= 1");
  if (!(bn_momentum >= 0.0 && bn_momentum < 1.0)) throw std::invalid_argument("ecc: bn_momentum must lie in [0,1)");
}

nlohmann::json to_json(const EccConfig& cfg) {
  return {{"block_depths", cfg.block_depths},
          {"fgn_hidden", {cfg.fgn_hidden.first, cfg.fgn_hidden.second}},
          {"node_feature_len", cfg.node_feature_len},
          {"edge_feature_len", cfg.edge_feature_len},
          {"batch_norm", cfg.batch_norm},
          {"bn_momentum", cfg.bn_momentum}};
}

EccConfig ecc_config_from_json(const nlohmann::json& j) {
  EccConfig cfg;
  cfg.block_depths = j.at("block_depths").get<std::vector<int>>();
  cfg.fgn_hidden = {j.at("fgn_hidden").at(0).get<int>(), j.at("fgn_hidden").at(1).get<int>()};
  cfg.node_feature_len = j.at("node_feature_len").get<int>();
  cfg.edge_feature_len = j.at("edge_feature_len").get<int>();
  cfg.batch_norm = j.at("batch_norm").get<bool>();
  cfg.bn_momentum = j.at("bn_momentum").get<double>();
  cfg.validate();
  return cfg;
}

GraphInput graph_input(const BoundaryGraph& g, int grid_n) {
  if (grid_n < 1) throw std::invalid_argument("graph_input: grid size must be positive");
  const int n = g.node_count();
  const int e = static_cast<int>(g.edges.size());
  std::vector<double> nodes;
  nodes.reserve(static_cast<std::size_t>(n) * kNodeFeatureLen);
  for (const auto& f : g.nodes) nodes.insert(nodes.end(), f.begin(), f.end());
  std::vector<double> edges;
  edges.reserve(static_cast<std::size_t>(e) * kEdgeFeatureLen);
  for (const auto& f : g.edge_features) {
    edges.push_back(f[0]);
    edges.push_back(f[1] / grid_n);
  }
  return {Tensor({n, kNodeFeatureLen}, std::move(nodes)), Tensor({e, kEdgeFeatureLen}, std::move(edges)), g.edges};
}

EccNet::EccNet(EccConfig cfg, Rng& init) : cfg_(std::move(cfg)) {
  cfg_.validate();
  const int h2 = cfg_.fgn_hidden.second;
  int din = cfg_.node_feature_len;
  for (const auto& p : layout(cfg_)) {
    const std::size_t count = numel(p.shape);
    const std::string leaf = p.name.substr(p.name.find('.') + 1);
    std::vector<double> v(count, 0.0);
    if (leaf == "root") {
      din = p.shape[0];
      v = normal_values(init, count, std::sqrt(1.0 / din));
    } else if (leaf == "fgn0.w" || leaf == "fgn1.w") {
      v = normal_values(init, count, std::sqrt(2.0 / p.shape[0]));
    } else if (leaf == "fgn2.w") {
      // Keeps the generated filters at roughly the scale of the root weights.
      v = normal_values(init, count, std::sqrt(1.0 / din) / std::sqrt(static_cast<double>(h2)));
    } else if (leaf == "bn.gamma" || leaf == "bn.var") {
      v.assign(count, 1.0);
    }
    params_.add(p.name, p.shape, std::move(v), p.trainable);
  }
}

EccNet::EccNet(EccConfig cfg, ParamStore params) : cfg_(std::move(cfg)), params_(std::move(params)) {
  cfg_.validate();
  for (const auto& p : layout(cfg_))
    if (params_.get(p.name).shape() != p.shape) throw std::invalid_argument("ecc: parameter " + p.name + " has the wrong shape");
}

Tensor EccNet::forward(const GraphInput& g, bool training) const {
  const auto& nf = g.node_features;
  if (nf.shape().size() != 2 || nf.dim(1) != cfg_.node_feature_len) throw std::invalid_argument("ecc: node feature length mismatch");
  if (g.edge_features.shape() != Shape{static_cast<int>(g.edges.size()), cfg_.edge_feature_len})
    throw std::invalid_argument("ecc: edge feature shape mismatch");

  auto p = [this](int b, const char* leaf) { return params_.get(pname(b, leaf)); };
  Tensor h = nf;
  const int blocks = static_cast<int>(cfg_.block_depths.size());
  for (int b = 0; b < blocks; ++b) {
    const int dout = cfg_.block_depths[b];
    Tensor f = relu(linear(g.edge_features, p(b, "fgn0.w"), p(b, "fgn0.b")));
    f = relu(linear(f, p(b, "fgn1.w"), p(b, "fgn1.b")));
    Tensor theta = linear(f, p(b, "fgn2.w"), p(b, "fgn2.b"));
    h = add(linear(h, p(b, "root"), p(b, "bias")), ecc_aggregate(theta, h, g.edges, dout));
    if (cfg_.batch_norm) {
      BatchNormState st{params_.get(pname(b, "bn.mean")).mutable_values(), params_.get(pname(b, "bn.var")).mutable_values(),
                        cfg_.bn_momentum, 1e-5};
      h = batch_norm(h, p(b, "bn.gamma"), p(b, "bn.beta"), st, training);
    }
    if (b + 1 < blocks) h = relu(h);
  }
  return h;
}

}  // namespace walkplan::nn
