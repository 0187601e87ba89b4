#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "walkplan/nn/tensor.hpp"

namespace walkplan::nn {

struct NamedTensor {
  std::string name;
  Tensor tensor;
  bool trainable = true;
};

/// Ordered, named parameter set. Copies are deep: a copied store never
/// shares values with the original.
class ParamStore {
public:
  ParamStore() = default;
  ParamStore(const ParamStore& other);
  ParamStore& operator=(const ParamStore& other);
  ParamStore(ParamStore&&) noexcept = default;
  ParamStore& operator=(ParamStore&&) noexcept = default;

  Tensor& add(std::string name, Shape shape, std::vector<double> values, bool trainable = true);
  bool contains(std::string_view name) const;
  Tensor& get(std::string_view name);
  const Tensor& get(std::string_view name) const;

  const std::vector<NamedTensor>& entries() const { return entries_; }
  std::vector<Tensor*> trainable();
  std::size_t parameter_count() const;
  void zero_grad();

private:
  std::vector<NamedTensor> entries_;
};

struct AdamConfig {
  double lr = 0.005;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class Adam {
public:
  Adam(ParamStore& params, AdamConfig cfg);

  /// Applies one update from the accumulated gradients, scaled by grad_scale.
  void step(double grad_scale = 1.0);
  int steps() const { return t_; }
  void set_lr(double lr) { cfg_.lr = lr; }

private:
  std::vector<Tensor*> params_;
  AdamConfig cfg_;
  std::vector<std::vector<double>> m_, v_;
  int t_ = 0;
};

}  // namespace walkplan::nn
