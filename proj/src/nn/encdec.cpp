#include "walkplan/nn/encdec.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "walkplan/nn/ops.hpp"

namespace walkplan::nn {

namespace {

std::string pname(const char* stem, int level, const char* leaf) {
  return std::string(stem) + std::to_string(level) + "." + leaf;
}

std::vector<double> he_normal(Rng& rng, std::size_t count, int fan_in) {
  std::vector<double> v(count);
  const double sd = std::sqrt(2.0 / fan_in);
  for (double& x : v) x = rng.normal() * sd;
  return v;
}

struct LayerShapes {
  Shape weight;
  int fan_in;
  int bias;
};

std::vector<std::pair<std::string, LayerShapes>> layout(const EncDecConfig& cfg) {
  std::vector<std::pair<std::string, LayerShapes>> out;
  auto feat = [&](int l) { return cfg.base_features << l; };
  for (int l = 0; l < cfg.levels; ++l) {
    const int in = l == 0 ? cfg.in_channels : feat(l - 1);
    out.push_back({pname("enc", l, ""), {{feat(l), in, 3, 3}, in * 9, feat(l)}});
  }
  for (int l = cfg.levels - 1; l >= 0; --l) {
    const int in = l == cfg.levels - 1 ? feat(l) : feat(l + 1);
    out.push_back({pname("up", l, ""), {{in, feat(l), 2, 2}, in, feat(l)}});
    out.push_back({pname("dec", l, ""), {{feat(l), 2 * feat(l), 3, 3}, 2 * feat(l) * 9, feat(l)}});
  }
  out.push_back({"head.", {{cfg.out_channels, feat(0), 1, 1}, feat(0), cfg.out_channels}});
  return out;
}

}  // namespace

void EncDecConfig::validate() const {
  if (levels < 1) throw std::invalid_argument("encdec: levels must be >= 1");
  if (base_features < 1) throw std::invalid_argument("encdec: base_features must be >= 1");
  if (in_channels < 1 || out_channels < 1) throw std::invalid_argument("encdec: channel counts must be >= 1");
}

nlohmann::json to_json(const EncDecConfig& cfg) {
  return {{"levels", cfg.levels}, {"base_features", cfg.base_features}, {"in_channels", cfg.in_channels}, {"out_channels", cfg.out_channels}};
}

EncDecConfig encdec_config_from_json(const nlohmann::json& j) {
  EncDecConfig cfg;
  cfg.levels = j.at("levels").get<int>();
  cfg.base_features = j.at("base_features").get<int>();
  cfg.in_channels = j.at("in_channels").get<int>();
  cfg.out_channels = j.at("out_channels").get<int>();
  cfg.validate();
  return cfg;
}

EncDec::EncDec(EncDecConfig cfg, Rng& init) : cfg_(cfg) {
  cfg_.validate();
  for (auto& [stem, s] : layout(cfg_)) {
    params_.add(stem + "w", s.weight, he_normal(init, numel(s.weight), s.fan_in));
    params_.add(stem + "b", {s.bias}, std::vector<double>(s.bias, 0.0));
  }
}

EncDec::EncDec(EncDecConfig cfg, ParamStore params) : cfg_(cfg), params_(std::move(params)) {
  cfg_.validate();
  for (auto& [stem, s] : layout(cfg_)) {
    if (params_.get(stem + "w").shape() != s.weight || params_.get(stem + "b").shape() != Shape{s.bias})
      throw std::invalid_argument("encdec: parameter " + stem + " has the wrong shape");
  }
}

Tensor EncDec::forward(const Tensor& input) const {
  if (input.shape().size() != 3 || input.dim(0) != cfg_.in_channels)
    throw std::invalid_argument("encdec: input must be in_channels×n×n");
  const int n = input.dim(1);
  if (input.dim(2) != n || n % (1 << cfg_.levels) != 0)
    throw std::invalid_argument("encdec: spatial size must be square and divisible by 2^levels");

  auto p = [this](const std::string& name) { return params_.get(name); };
  std::vector<Tensor> skips;
  Tensor h = input;
  for (int l = 0; l < cfg_.levels; ++l) {
    h = relu(conv2d(h, p(pname("enc", l, "w")), p(pname("enc", l, "b"))));
    skips.push_back(h);
    h = max_pool2x2(h);
  }
  for (int l = cfg_.levels - 1; l >= 0; --l) {
    h = conv_transpose2x2(h, p(pname("up", l, "w")), p(pname("up", l, "b")));
    h = concat(h, skips[l]);
    h = relu(conv2d(h, p(pname("dec", l, "w")), p(pname("dec", l, "b"))));
  }
  return conv2d(h, p("head.w"), p("head.b"));
}

}  // namespace walkplan::nn
