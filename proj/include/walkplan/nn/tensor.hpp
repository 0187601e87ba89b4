#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace walkplan::nn {

using Shape = std::vector<int>;

std::size_t numel(const Shape& shape);

/// Tape entry: values, lazily allocated gradient, and the closure that
/// pushes this node's gradient into its parents.
struct Node {
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward;

  std::vector<double>& grad_buffer() {
    if (grad.size() != value.size()) grad.assign(value.size(), 0.0);
    return grad;
  }
};

/// Dense float64 array participating in reverse-mode differentiation.
/// Copies share the underlying node.
class Tensor {
public:
  Tensor() = default;
  explicit Tensor(Shape shape, double fill = 0.0);
  Tensor(Shape shape, std::vector<double> values);

  /// Leaf that accumulates gradients.
  static Tensor parameter(Shape shape, std::vector<double> values);
  /// Result of an op; records `backward` only when gradients are enabled and
  /// some parent requires them.
  static Tensor from_op(Shape shape, std::vector<double> values, const std::vector<Tensor>& parents,
                        std::function<void(Node&)> backward);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  int dim(std::size_t axis) const { return node_->shape.at(axis); }
  std::size_t numel() const { return node_->value.size(); }

  std::span<const double> values() const { return node_->value; }
  /// Writable values; meant for leaves (parameters and inputs).
  std::span<double> mutable_values() { return node_->value; }
  /// Empty when no gradient has been accumulated.
  std::span<const double> grad() const { return node_->grad; }
  std::span<double> mutable_grad() { return node_->grad_buffer(); }
  double item() const;

  bool requires_grad() const { return node_ && node_->requires_grad; }
  void set_requires_grad(bool on) { node_->requires_grad = on; }
  void zero_grad();

  /// Seeds d(this)/d(this) = 1 (scalar tensors only) and runs the tape.
  void backward();

  /// Independent copy of the values (no tape, same requires_grad flag).
  Tensor clone() const;

  const std::shared_ptr<Node>& node() const { return node_; }

private:
  std::shared_ptr<Node> node_;
};

bool grad_enabled();

/// Disables tape recording in its scope (inference).
class NoGradGuard {
public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

private:
  bool previous_;
};

class NonFiniteError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// When on, every op result is checked for NaN/Inf. Defaults to on in debug builds.
void set_finite_checks(bool on);
bool finite_checks();

/// Records the discrete branch taken by piecewise ops (ReLU signs, max-pool
/// winners) while alive. Finite-difference checks compare patterns to detect
/// probes straddling a kink.
class KinkRecorder {
public:
  KinkRecorder();
  ~KinkRecorder();
  KinkRecorder(const KinkRecorder&) = delete;
  KinkRecorder& operator=(const KinkRecorder&) = delete;

  const std::vector<std::int32_t>& pattern() const { return pattern_; }
  static void record(std::int32_t decision);
  static bool active();

private:
  std::vector<std::int32_t> pattern_;
  KinkRecorder* previous_;
};

}  // namespace walkplan::nn
