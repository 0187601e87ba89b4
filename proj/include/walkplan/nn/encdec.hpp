#pragma once

#include <json.hpp>

#include "walkplan/nn/params.hpp"
#include "walkplan/rng.hpp"

namespace walkplan::nn {

struct EncDecConfig {
  int levels = 3;
  int base_features = 16;
  int in_channels = 1;
  int out_channels = 2;

  void validate() const;
};

nlohmann::json to_json(const EncDecConfig& cfg);
EncDecConfig encdec_config_from_json(const nlohmann::json& j);

/// Convolutional encoder-decoder with skip connections. Level l has
/// base_features * 2^l channels.
class EncDec {
public:
  EncDec(EncDecConfig cfg, Rng& init);
  /// Wraps an existing parameter set (e.g. from a checkpoint); names and shapes are checked.
  EncDec(EncDecConfig cfg, ParamStore params);

  /// input: in_channels×n×n with n divisible by 2^levels -> out_channels×n×n logits.
  Tensor forward(const Tensor& input) const;

  const EncDecConfig& config() const { return cfg_; }
  ParamStore& params() { return params_; }
  const ParamStore& params() const { return params_; }

private:
  EncDecConfig cfg_;
  ParamStore params_;
};

}  // namespace walkplan::nn
