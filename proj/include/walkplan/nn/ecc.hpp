#pragma once

#include <json.hpp>
#include <utility>
#include <vector>

#include "walkplan/boundary.hpp"
#include "walkplan/nn/params.hpp"
#include "walkplan/rng.hpp"

namespace walkplan::nn {

struct EccConfig {
  std::vector<int> block_depths{64, 128, 128, 64, 2};
  std::pair<int, int> fgn_hidden{16, 32};
  int node_feature_len = kNodeFeatureLen;
  int edge_feature_len = kEdgeFeatureLen;
  bool batch_norm = true;
  double bn_momentum = 0.9;

  void validate() const;
};

nlohmann::json to_json(const EccConfig& cfg);
EccConfig ecc_config_from_json(const nlohmann::json& j);

struct GraphInput {
  Tensor node_features;  // N×F
  Tensor edge_features;  // E×2
  std::vector<GraphEdge> edges;
};

/// Network input for a boundary graph. The midpoint distance edge feature is
/// divided by the grid size so both edge features stay in [0, 2].
GraphInput graph_input(const BoundaryGraph& g, int grid_n);

/// Stack of edge-conditioned convolution blocks. Each block computes
/// BN(h W_root + mean_j Phi(e_ij) h_j + b) followed by ReLU, except the last,
/// which returns logits. Phi is a three-layer perceptron on edge features.
class EccNet {
public:
  EccNet(EccConfig cfg, Rng& init);
  EccNet(EccConfig cfg, ParamStore params);

  /// N×2 logits. Training mode uses batch statistics in normalization.
  Tensor forward(const GraphInput& g, bool training) const;

  const EccConfig& config() const { return cfg_; }
  ParamStore& params() { return params_; }
  const ParamStore& params() const { return params_; }

private:
  EccConfig cfg_;
  mutable ParamStore params_;
};

}  // namespace walkplan::nn
