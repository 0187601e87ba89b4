#pragma once

#include <span>
#include <vector>

#include "walkplan/boundary.hpp"
#include "walkplan/nn/tensor.hpp"

namespace walkplan::nn {

/// Same-padded stride-1 convolution. x: C×H×W, w: O×C×k×k (k odd), b: O.
Tensor conv2d(const Tensor& x, const Tensor& w, const Tensor& b);
/// Stride-2 2×2 transposed convolution. x: C×H×W, w: C×O×2×2, b: O -> O×2H×2W.
Tensor conv_transpose2x2(const Tensor& x, const Tensor& w, const Tensor& b);
/// 2×2 max-pool, stride 2. Ties go to the first element in row-major order.
Tensor max_pool2x2(const Tensor& x);
Tensor relu(const Tensor& x);
/// Concatenation along the leading axis.
Tensor concat(const Tensor& a, const Tensor& b);
Tensor add(const Tensor& a, const Tensor& b);
Tensor sum(const Tensor& x);
/// Weighted sum of all elements with fixed weights; handy for gradient checks.
Tensor weighted_sum(const Tensor& x, std::span<const double> weights);

/// x: N×K, w: K×M, b: M -> N×M.
Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b);

struct BatchNormState {
  std::span<double> running_mean;
  std::span<double> running_var;
  double momentum = 0.9;
  double eps = 1e-5;
};

/// Per-column normalization of an N×F matrix. Training mode uses batch
/// statistics (biased variance) and updates the running averages.
Tensor batch_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, BatchNormState state, bool training);

/// Edge-conditioned aggregation. theta: E×(O·I), one row-major O×I filter
/// per edge; h: N×I. Returns N×O with out_i = mean over incoming edges of
/// theta_e · h_src.
Tensor ecc_aggregate(const Tensor& theta, const Tensor& h, std::span<const GraphEdge> edges, int out_dim);

enum class ClassAxis { First, Last };

/// Mean cross-entropy over positions, sum(w_p * -log softmax(l_p)[y_p]) / sum(w_p).
/// First: logits C×P (images); Last: P×C (graph nodes). Empty weights mean 1.
Tensor cross_entropy(const Tensor& logits, std::span<const int> labels, std::span<const double> weights,
                     ClassAxis axis);

std::vector<double> softmax(const Tensor& logits, ClassAxis axis);
std::vector<int> argmax(const Tensor& logits, ClassAxis axis);

}  // namespace walkplan::nn
