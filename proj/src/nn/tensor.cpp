#include "walkplan/nn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace walkplan::nn {

namespace {

thread_local bool t_grad_enabled = true;
thread_local KinkRecorder* t_kinks = nullptr;
#ifdef NDEBUG
bool g_finite_checks = false;
#else
bool g_finite_checks = true;
#endif

}  // namespace

std::size_t numel(const Shape& shape) {
  std::size_t n = 1;
  for (int d : shape) {
    if (d < 0) throw std::invalid_argument("negative tensor dimension");
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

Tensor::Tensor(Shape shape, double fill) : node_(std::make_shared<Node>()) {
  node_->value.assign(nn::numel(shape), fill);
  node_->shape = std::move(shape);
}

Tensor::Tensor(Shape shape, std::vector<double> values) : node_(std::make_shared<Node>()) {
  if (values.size() != nn::numel(shape)) throw std::invalid_argument("tensor: value count does not match shape");
  node_->shape = std::move(shape);
  node_->value = std::move(values);
}

Tensor Tensor::parameter(Shape shape, std::vector<double> values) {
  Tensor t(std::move(shape), std::move(values));
  t.node_->requires_grad = true;
  return t;
}

Tensor Tensor::from_op(Shape shape, std::vector<double> values, const std::vector<Tensor>& parents,
                       std::function<void(Node&)> backward) {
  Tensor t(std::move(shape), std::move(values));
  if (g_finite_checks)
    for (double v : t.node_->value)
      if (!std::isfinite(v)) throw NonFiniteError("non-finite value produced by a tensor op");
  if (!t_grad_enabled) return t;
  const bool any = std::any_of(parents.begin(), parents.end(), [](const Tensor& p) { return p.requires_grad(); });
  if (!any) return t;
  t.node_->requires_grad = true;
  for (const auto& p : parents) t.node_->parents.push_back(p.node_);
  t.node_->backward = std::move(backward);
  return t;
}

double Tensor::item() const {
  if (numel() != 1) throw std::logic_error("item() on a non-scalar tensor");
  return node_->value[0];
}

void Tensor::zero_grad() {
  if (node_) std::fill(node_->grad.begin(), node_->grad.end(), 0.0);
}

Tensor Tensor::clone() const {
  Tensor t(node_->shape, node_->value);
  t.node_->requires_grad = node_->requires_grad;
  return t;
}

void Tensor::backward() {
  if (numel() != 1) throw std::logic_error("backward() needs a scalar tensor");
  if (!requires_grad()) return;
  // Iterative post-order DFS gives a topological order.
  std::vector<Node*> order;
  std::unordered_set<Node*> seen;
  std::vector<std::pair<Node*, std::size_t>> stack{{node_.get(), 0}};
  seen.insert(node_.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node* parent = node->parents[next++].get();
      if (parent->requires_grad && parent->backward && !seen.contains(parent)) {
        seen.insert(parent);
        stack.emplace_back(parent, 0);
      }
      continue;
    }
    order.push_back(node);
    stack.pop_back();
  }
  node_->grad_buffer()[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* node = *it;
    if (!node->backward || node->grad.empty()) continue;
    node->backward(*node);
  }
}

bool grad_enabled() { return t_grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(t_grad_enabled) { t_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { t_grad_enabled = previous_; }

void set_finite_checks(bool on) { g_finite_checks = on; }
bool finite_checks() { return g_finite_checks; }

KinkRecorder::KinkRecorder() : previous_(t_kinks) { t_kinks = this; }
KinkRecorder::~KinkRecorder() { t_kinks = previous_; }
void KinkRecorder::record(std::int32_t decision) {
  if (t_kinks) t_kinks->pattern_.push_back(decision);
}
bool KinkRecorder::active() { return t_kinks != nullptr; }

}  // namespace walkplan::nn
