#include "walkplan/nn/params.hpp"

#include <cmath>
#include <stdexcept>

namespace walkplan::nn {

ParamStore::ParamStore(const ParamStore& other) { *this = other; }

ParamStore& ParamStore::operator=(const ParamStore& other) {
  if (this == &other) return *this;
  entries_.clear();
  for (const auto& e : other.entries_) entries_.push_back({e.name, e.tensor.clone(), e.trainable});
  return *this;
}

Tensor& ParamStore::add(std::string name, Shape shape, std::vector<double> values, bool trainable) {
  if (contains(name)) throw std::invalid_argument("duplicate parameter " + name);
  Tensor t = trainable ? Tensor::parameter(std::move(shape), std::move(values)) : Tensor(std::move(shape), std::move(values));
  entries_.push_back({std::move(name), std::move(t), trainable});
  return entries_.back().tensor;
}

bool ParamStore::contains(std::string_view name) const {
  for (const auto& e : entries_)
    if (e.name == name) return true;
  return false;
}

Tensor& ParamStore::get(std::string_view name) {
  for (auto& e : entries_)
    if (e.name == name) return e.tensor;
  throw std::out_of_range("unknown parameter " + std::string(name));
}

const Tensor& ParamStore::get(std::string_view name) const { return const_cast<ParamStore*>(this)->get(name); }

std::vector<Tensor*> ParamStore::trainable() {
  std::vector<Tensor*> out;
  for (auto& e : entries_)
    if (e.trainable) out.push_back(&e.tensor);
  return out;
}

std::size_t ParamStore::parameter_count() const {
  std::size_t n = 0;
  for (const auto& e : entries_)
    if (e.trainable) n += e.tensor.numel();
  return n;
}

void ParamStore::zero_grad() {
  for (auto& e : entries_) e.tensor.zero_grad();
}

Adam::Adam(ParamStore& params, AdamConfig cfg) : params_(params.trainable()), cfg_(cfg) {
  if (!(cfg.beta1 > 0 && cfg.beta1 < 1 && cfg.beta2 > 0 && cfg.beta2 < 1)) throw std::invalid_argument("adam: betas must lie in (0,1)");
  for (auto* p : params_) {
    m_.emplace_back(p->numel(), 0.0);
    v_.emplace_back(p->numel(), 0.0);
  }
}

void Adam::step(double grad_scale) {
  ++t_;
  const double c1 = 1.0 - std::pow(cfg_.beta1, t_);
  const double c2 = 1.0 - std::pow(cfg_.beta2, t_);
  for (std::size_t k = 0; k < params_.size(); ++k) {
    auto g = params_[k]->grad();
    if (g.empty()) continue;
    auto w = params_[k]->mutable_values();
    auto& m = m_[k];
    auto& v = v_[k];
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double gi = g[i] * grad_scale;
      m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * gi;
      v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * gi * gi;
      w[i] -= cfg_.lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + cfg_.eps);
    }
  }
}

}  // namespace walkplan::nn
