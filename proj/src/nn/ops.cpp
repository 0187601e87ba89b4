#include "walkplan/nn/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "walkplan/nn/simd.hpp"

namespace walkplan::nn {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("shape mismatch: ") + what);
}

// col[(c*k*k + ky*k + kx) * H*W + y*W + x] = x[c, y+ky-p, x+kx-p] (0 outside).
void im2col(const double* x, int c, int h, int w, int k, double* col) {
  const int p = k / 2;
  const int hw = h * w;
  for (int ci = 0; ci < c; ++ci)
    for (int ky = 0; ky < k; ++ky)
      for (int kx = 0; kx < k; ++kx) {
        double* row = col + static_cast<std::size_t>((ci * k + ky) * k + kx) * hw;
        for (int y = 0; y < h; ++y) {
          const int sy = y + ky - p;
          double* out = row + y * w;
          if (sy < 0 || sy >= h) {
            std::fill(out, out + w, 0.0);
            continue;
          }
          const double* src = x + (static_cast<std::size_t>(ci) * h + sy) * w;
          for (int xx = 0; xx < w; ++xx) {
            const int sx = xx + kx - p;
            out[xx] = (sx >= 0 && sx < w) ? src[sx] : 0.0;
          }
        }
      }
}

void col2im(const double* col, int c, int h, int w, int k, double* dx) {
  const int p = k / 2;
  const int hw = h * w;
  for (int ci = 0; ci < c; ++ci)
    for (int ky = 0; ky < k; ++ky)
      for (int kx = 0; kx < k; ++kx) {
        const double* row = col + static_cast<std::size_t>((ci * k + ky) * k + kx) * hw;
        for (int y = 0; y < h; ++y) {
          const int sy = y + ky - p;
          if (sy < 0 || sy >= h) continue;
          double* dst = dx + (static_cast<std::size_t>(ci) * h + sy) * w;
          const double* in = row + y * w;
          for (int xx = 0; xx < w; ++xx) {
            const int sx = xx + kx - p;
            if (sx >= 0 && sx < w) dst[sx] += in[xx];
          }
        }
      }
}

std::vector<double> transpose(const double* a, int rows, int cols) {
  std::vector<double> t(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) t[static_cast<std::size_t>(c) * rows + r] = a[static_cast<std::size_t>(r) * cols + c];
  return t;
}

}  // namespace

Tensor conv2d(const Tensor& x, const Tensor& w, const Tensor& b) {
  require(x.shape().size() == 3, "conv2d input must be C×H×W");
  require(w.shape().size() == 4, "conv2d weight must be O×C×k×k");
  const int c = x.dim(0), h = x.dim(1), wd = x.dim(2);
  const int o = w.dim(0), k = w.dim(2);
  require(w.dim(1) == c, "conv2d channel count");
  require(w.dim(3) == k && k % 2 == 1, "conv2d kernel must be square and odd");
  require(b.shape() == Shape{o}, "conv2d bias");
  const int kk = c * k * k;
  const int hw = h * wd;

  auto col = std::make_shared<std::vector<double>>(static_cast<std::size_t>(kk) * hw);
  im2col(x.values().data(), c, h, wd, k, col->data());
  std::vector<double> out(static_cast<std::size_t>(o) * hw);
  for (int oi = 0; oi < o; ++oi) std::fill_n(out.begin() + static_cast<std::ptrdiff_t>(oi) * hw, hw, b.values()[oi]);
  simd::kernels().gemm_nn(o, hw, kk, w.values().data(), kk, col->data(), hw, out.data(), hw);

  return Tensor::from_op({o, h, wd}, std::move(out), {x, w, b}, [=](Node& self) {
    const auto& ks = simd::kernels();
    const double* g = self.grad.data();
    Node& xn = *self.parents[0];
    Node& wn = *self.parents[1];
    Node& bn = *self.parents[2];
    if (wn.requires_grad) ks.gemm_nt(o, kk, hw, g, hw, col->data(), hw, wn.grad_buffer().data(), kk);
    if (bn.requires_grad) {
      auto& db = bn.grad_buffer();
      for (int oi = 0; oi < o; ++oi) {
        double s = 0.0;
        for (int p = 0; p < hw; ++p) s += g[static_cast<std::size_t>(oi) * hw + p];
        db[oi] += s;
      }
    }
    if (xn.requires_grad) {
      const auto wt = transpose(wn.value.data(), o, kk);
      std::vector<double> dcol(static_cast<std::size_t>(kk) * hw, 0.0);
      ks.gemm_nn(kk, hw, o, wt.data(), o, g, hw, dcol.data(), hw);
      col2im(dcol.data(), c, h, wd, k, xn.grad_buffer().data());
    }
  });
}

Tensor conv_transpose2x2(const Tensor& x, const Tensor& w, const Tensor& b) {
  require(x.shape().size() == 3, "transposed conv input must be C×H×W");
  require(w.shape().size() == 4 && w.dim(2) == 2 && w.dim(3) == 2, "transposed conv weight must be C×O×2×2");
  const int c = x.dim(0), h = x.dim(1), wd = x.dim(2);
  require(w.dim(0) == c, "transposed conv channel count");
  const int o = w.dim(1);
  require(b.shape() == Shape{o}, "transposed conv bias");
  const int hw = h * wd;
  const int ow = 2 * wd;

  // wd_[d] is the O×C matrix for kernel offset d = dy*2+dx.
  auto offset_weights = [c, o](const std::vector<double>& wv, int d) {
    std::vector<double> m(static_cast<std::size_t>(o) * c);
    for (int ci = 0; ci < c; ++ci)
      for (int oi = 0; oi < o; ++oi) m[static_cast<std::size_t>(oi) * c + ci] = wv[(static_cast<std::size_t>(ci) * o + oi) * 4 + d];
    return m;
  };

  const auto& ks = simd::kernels();
  std::vector<double> out(static_cast<std::size_t>(o) * 4 * hw);
  std::vector<double> y(static_cast<std::size_t>(o) * hw);
  for (int d = 0; d < 4; ++d) {
    const int dy = d / 2, dx = d % 2;
    const auto m = offset_weights(w.node()->value, d);
    std::fill(y.begin(), y.end(), 0.0);
    ks.gemm_nn(o, hw, c, m.data(), c, x.values().data(), hw, y.data(), hw);
    for (int oi = 0; oi < o; ++oi)
      for (int r = 0; r < h; ++r)
        for (int q = 0; q < wd; ++q)
          out[(static_cast<std::size_t>(oi) * 2 * h + 2 * r + dy) * ow + 2 * q + dx] =
              y[static_cast<std::size_t>(oi) * hw + r * wd + q] + b.values()[oi];
  }

  return Tensor::from_op({o, 2 * h, ow}, std::move(out), {x, w, b}, [=](Node& self) {
    const auto& kt = simd::kernels();
    Node& xn = *self.parents[0];
    Node& wn = *self.parents[1];
    Node& bn = *self.parents[2];
    std::vector<double> gy(static_cast<std::size_t>(o) * hw);
    for (int d = 0; d < 4; ++d) {
      const int dy = d / 2, dx = d % 2;
      for (int oi = 0; oi < o; ++oi)
        for (int r = 0; r < h; ++r)
          for (int q = 0; q < wd; ++q)
            gy[static_cast<std::size_t>(oi) * hw + r * wd + q] =
                self.grad[(static_cast<std::size_t>(oi) * 2 * h + 2 * r + dy) * ow + 2 * q + dx];
      if (xn.requires_grad) {
        const auto m = offset_weights(wn.value, d);
        const auto mt = transpose(m.data(), o, c);
        kt.gemm_nn(c, hw, o, mt.data(), o, gy.data(), hw, xn.grad_buffer().data(), hw);
      }
      if (wn.requires_grad) {
        std::vector<double> gm(static_cast<std::size_t>(o) * c, 0.0);
        kt.gemm_nt(o, c, hw, gy.data(), hw, xn.value.data(), hw, gm.data(), c);
        auto& gw = wn.grad_buffer();
        for (int ci = 0; ci < c; ++ci)
          for (int oi = 0; oi < o; ++oi) gw[(static_cast<std::size_t>(ci) * o + oi) * 4 + d] += gm[static_cast<std::size_t>(oi) * c + ci];
      }
    }
    if (bn.requires_grad) {
      auto& db = bn.grad_buffer();
      const std::size_t plane = static_cast<std::size_t>(4) * hw;
      for (int oi = 0; oi < o; ++oi) {
        double s = 0.0;
        for (std::size_t p = 0; p < plane; ++p) s += self.grad[oi * plane + p];
        db[oi] += s;
      }
    }
  });
}

Tensor max_pool2x2(const Tensor& x) {
  require(x.shape().size() == 3, "max-pool input must be C×H×W");
  const int c = x.dim(0), h = x.dim(1), w = x.dim(2);
  require(h % 2 == 0 && w % 2 == 0, "max-pool needs even spatial size");
  const int oh = h / 2, ow = w / 2;
  std::vector<double> out(static_cast<std::size_t>(c) * oh * ow);
  auto winner = std::make_shared<std::vector<std::size_t>>(out.size());
  const auto xv = x.values();
  const bool recording = KinkRecorder::active();
  for (int ci = 0; ci < c; ++ci)
    for (int r = 0; r < oh; ++r)
      for (int q = 0; q < ow; ++q) {
        std::size_t best = (static_cast<std::size_t>(ci) * h + 2 * r) * w + 2 * q;
        int best_k = 0;
        for (int k = 1; k < 4; ++k) {
          const std::size_t idx = (static_cast<std::size_t>(ci) * h + 2 * r + k / 2) * w + 2 * q + k % 2;
          if (xv[idx] > xv[best]) {
            best = idx;
            best_k = k;
          }
        }
        const std::size_t o = (static_cast<std::size_t>(ci) * oh + r) * ow + q;
        out[o] = xv[best];
        (*winner)[o] = best;
        if (recording) KinkRecorder::record(best_k);
      }
  return Tensor::from_op({c, oh, ow}, std::move(out), {x}, [winner](Node& self) {
    auto& gx = self.parents[0]->grad_buffer();
    for (std::size_t o = 0; o < winner->size(); ++o) gx[(*winner)[o]] += self.grad[o];
  });
}

Tensor relu(const Tensor& x) {
  std::vector<double> out(x.values().begin(), x.values().end());
  for (double& v : out) v = v > 0.0 ? v : 0.0;
  if (KinkRecorder::active())
    for (double v : x.values()) KinkRecorder::record(v > 0.0 ? 1 : 0);
  return Tensor::from_op(x.shape(), std::move(out), {x}, [](Node& self) {
    Node& xn = *self.parents[0];
    auto& gx = xn.grad_buffer();
    for (std::size_t i = 0; i < gx.size(); ++i)
      if (xn.value[i] > 0.0) gx[i] += self.grad[i];
  });
}

Tensor concat(const Tensor& a, const Tensor& b) {
  require(a.shape().size() == b.shape().size() && !a.shape().empty(), "concat rank");
  require(std::equal(a.shape().begin() + 1, a.shape().end(), b.shape().begin() + 1), "concat trailing dims");
  Shape shape = a.shape();
  shape[0] += b.dim(0);
  std::vector<double> out;
  out.reserve(a.numel() + b.numel());
  out.insert(out.end(), a.values().begin(), a.values().end());
  out.insert(out.end(), b.values().begin(), b.values().end());
  const std::size_t na = a.numel();
  return Tensor::from_op(std::move(shape), std::move(out), {a, b}, [na](Node& self) {
    Node& an = *self.parents[0];
    Node& bn = *self.parents[1];
    if (an.requires_grad) {
      auto& g = an.grad_buffer();
      for (std::size_t i = 0; i < na; ++i) g[i] += self.grad[i];
    }
    if (bn.requires_grad) {
      auto& g = bn.grad_buffer();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[na + i];
    }
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  require(a.shape() == b.shape(), "add");
  std::vector<double> out(a.values().begin(), a.values().end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.values()[i];
  return Tensor::from_op(a.shape(), std::move(out), {a, b}, [](Node& self) {
    for (int p = 0; p < 2; ++p) {
      Node& n = *self.parents[p];
      if (!n.requires_grad) continue;
      auto& g = n.grad_buffer();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
    }
  });
}

Tensor sum(const Tensor& x) {
  double s = 0.0;
  for (double v : x.values()) s += v;
  return Tensor::from_op({1}, {s}, {x}, [](Node& self) {
    auto& g = self.parents[0]->grad_buffer();
    for (double& v : g) v += self.grad[0];
  });
}

Tensor weighted_sum(const Tensor& x, std::span<const double> weights) {
  require(weights.size() == x.numel(), "weighted_sum weights");
  double s = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) s += weights[i] * x.values()[i];
  auto wv = std::make_shared<std::vector<double>>(weights.begin(), weights.end());
  return Tensor::from_op({1}, {s}, {x}, [wv](Node& self) {
    auto& g = self.parents[0]->grad_buffer();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += (*wv)[i] * self.grad[0];
  });
}

Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b) {
  require(x.shape().size() == 2 && w.shape().size() == 2, "linear operands must be matrices");
  const int n = x.dim(0), k = x.dim(1), m = w.dim(1);
  require(w.dim(0) == k, "linear inner dimension");
  require(b.shape() == Shape{m}, "linear bias");
  std::vector<double> out(static_cast<std::size_t>(n) * m);
  for (int i = 0; i < n; ++i) std::copy(b.values().begin(), b.values().end(), out.begin() + static_cast<std::ptrdiff_t>(i) * m);
  simd::kernels().gemm_nn(n, m, k, x.values().data(), k, w.values().data(), m, out.data(), m);
  return Tensor::from_op({n, m}, std::move(out), {x, w, b}, [=](Node& self) {
    const auto& ks = simd::kernels();
    Node& xn = *self.parents[0];
    Node& wn = *self.parents[1];
    Node& bn = *self.parents[2];
    const double* g = self.grad.data();
    if (xn.requires_grad) ks.gemm_nt(n, k, m, g, m, wn.value.data(), m, xn.grad_buffer().data(), k);
    if (wn.requires_grad) {
      const auto xt = transpose(xn.value.data(), n, k);
      ks.gemm_nn(k, m, n, xt.data(), n, g, m, wn.grad_buffer().data(), m);
    }
    if (bn.requires_grad) {
      auto& db = bn.grad_buffer();
      for (int i = 0; i < n; ++i) ks.axpy(m, 1.0, g + static_cast<std::size_t>(i) * m, db.data());
    }
  });
}

Tensor batch_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, BatchNormState state, bool training) {
  require(x.shape().size() == 2, "batch norm input must be N×F");
  const int n = x.dim(0), f = x.dim(1);
  require(gamma.shape() == Shape{f} && beta.shape() == Shape{f}, "batch norm affine parameters");
  require(state.running_mean.size() == static_cast<std::size_t>(f) && state.running_var.size() == static_cast<std::size_t>(f),
          "batch norm running statistics");
  const auto xv = x.values();
  const auto gv = gamma.values();
  const auto bv = beta.values();

  auto xhat = std::make_shared<std::vector<double>>(xv.size());
  auto inv_std = std::make_shared<std::vector<double>>(f);
  std::vector<double> out(xv.size());
  for (int j = 0; j < f; ++j) {
    double mean, var;
    if (training) {
      mean = 0.0;
      for (int i = 0; i < n; ++i) mean += xv[static_cast<std::size_t>(i) * f + j];
      mean /= n;
      var = 0.0;
      for (int i = 0; i < n; ++i) {
        const double d = xv[static_cast<std::size_t>(i) * f + j] - mean;
        var += d * d;
      }
      var /= n;
      state.running_mean[j] = state.momentum * state.running_mean[j] + (1.0 - state.momentum) * mean;
      state.running_var[j] = state.momentum * state.running_var[j] + (1.0 - state.momentum) * var;
    } else {
      mean = state.running_mean[j];
      var = state.running_var[j];
    }
    (*inv_std)[j] = 1.0 / std::sqrt(var + state.eps);
    for (int i = 0; i < n; ++i) {
      const std::size_t idx = static_cast<std::size_t>(i) * f + j;
      (*xhat)[idx] = (xv[idx] - mean) * (*inv_std)[j];
      out[idx] = gv[j] * (*xhat)[idx] + bv[j];
    }
  }

  return Tensor::from_op({n, f}, std::move(out), {x, gamma, beta}, [=](Node& self) {
    Node& xn = *self.parents[0];
    Node& gn = *self.parents[1];
    Node& bn = *self.parents[2];
    const auto& g = self.grad;
    for (int j = 0; j < f; ++j) {
      double sum_g = 0.0, sum_gx = 0.0;
      for (int i = 0; i < n; ++i) {
        const std::size_t idx = static_cast<std::size_t>(i) * f + j;
        sum_g += g[idx];
        sum_gx += g[idx] * (*xhat)[idx];
      }
      if (gn.requires_grad) gn.grad_buffer()[j] += sum_gx;
      if (bn.requires_grad) bn.grad_buffer()[j] += sum_g;
      if (!xn.requires_grad) continue;
      auto& gx = xn.grad_buffer();
      const double scale = gn.value[j] * (*inv_std)[j];
      for (int i = 0; i < n; ++i) {
        const std::size_t idx = static_cast<std::size_t>(i) * f + j;
        gx[idx] += training ? scale * (g[idx] - sum_g / n - (*xhat)[idx] * sum_gx / n) : scale * g[idx];
      }
    }
  });
}

Tensor ecc_aggregate(const Tensor& theta, const Tensor& h, std::span<const GraphEdge> edges, int out_dim) {
  require(h.shape().size() == 2, "ecc node features must be N×I");
  const int n = h.dim(0), in_dim = h.dim(1);
  const int e = static_cast<int>(edges.size());
  require(theta.shape() == Shape{e, out_dim * in_dim}, "ecc filter tensor must be E×(O·I)");
  auto edge_list = std::make_shared<std::vector<GraphEdge>>(edges.begin(), edges.end());
  auto inv_deg = std::make_shared<std::vector<double>>(n, 0.0);
  for (const auto& ed : *edge_list) {
    if (ed.src < 0 || ed.src >= n || ed.dst < 0 || ed.dst >= n) throw std::invalid_argument("ecc: dangling edge reference");
    (*inv_deg)[ed.dst] += 1.0;
  }
  for (double& d : *inv_deg) d = d > 0.0 ? 1.0 / d : 0.0;

  const auto& ks = simd::kernels();
  const int oi = out_dim * in_dim;
  std::vector<double> out(static_cast<std::size_t>(n) * out_dim, 0.0);
  const double* tv = theta.values().data();
  const double* hv = h.values().data();
  for (int k = 0; k < e; ++k) {
    const auto& ed = (*edge_list)[k];
    const double s = (*inv_deg)[ed.dst];
    for (int o = 0; o < out_dim; ++o)
      out[static_cast<std::size_t>(ed.dst) * out_dim + o] +=
          s * ks.dot(in_dim, tv + static_cast<std::size_t>(k) * oi + static_cast<std::size_t>(o) * in_dim, hv + static_cast<std::size_t>(ed.src) * in_dim);
  }

  return Tensor::from_op({n, out_dim}, std::move(out), {theta, h}, [=](Node& self) {
    const auto& kt = simd::kernels();
    Node& tn = *self.parents[0];
    Node& hn = *self.parents[1];
    for (int k = 0; k < e; ++k) {
      const auto& ed = (*edge_list)[k];
      const double s = (*inv_deg)[ed.dst];
      const double* g = self.grad.data() + static_cast<std::size_t>(ed.dst) * out_dim;
      for (int o = 0; o < out_dim; ++o) {
        const double go = s * g[o];
        if (go == 0.0) continue;
        const std::size_t row = static_cast<std::size_t>(k) * oi + static_cast<std::size_t>(o) * in_dim;
        if (tn.requires_grad) kt.axpy(in_dim, go, hn.value.data() + static_cast<std::size_t>(ed.src) * in_dim, tn.grad_buffer().data() + row);
        if (hn.requires_grad) kt.axpy(in_dim, go, tn.value.data() + row, hn.grad_buffer().data() + static_cast<std::size_t>(ed.src) * in_dim);
      }
    }
  });
}

namespace {

struct ClassLayout {
  int classes;
  int positions;
  std::size_t class_stride;
  std::size_t pos_stride;
};

ClassLayout layout_of(const Tensor& logits, ClassAxis axis) {
  const auto& s = logits.shape();
  require(s.size() >= 2, "logits need a class axis");
  if (axis == ClassAxis::First) {
    const int c = s[0];
    const int p = static_cast<int>(logits.numel() / c);
    return {c, p, static_cast<std::size_t>(p), 1};
  }
  const int c = s.back();
  const int p = static_cast<int>(logits.numel() / c);
  return {c, p, 1, static_cast<std::size_t>(c)};
}

}  // namespace

Tensor cross_entropy(const Tensor& logits, std::span<const int> labels, std::span<const double> weights, ClassAxis axis) {
  const ClassLayout L = layout_of(logits, axis);
  require(labels.size() == static_cast<std::size_t>(L.positions), "cross-entropy label count");
  require(weights.empty() || weights.size() == labels.size(), "cross-entropy weight count");
  const auto lv = logits.values();
  auto probs = std::make_shared<std::vector<double>>(lv.size());
  double total = 0.0, wsum = 0.0;
  for (int p = 0; p < L.positions; ++p) {
    const std::size_t base = p * L.pos_stride;
    double mx = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < L.classes; ++c) mx = std::max(mx, lv[base + c * L.class_stride]);
    double z = 0.0;
    for (int c = 0; c < L.classes; ++c) z += std::exp(lv[base + c * L.class_stride] - mx);
    for (int c = 0; c < L.classes; ++c) (*probs)[base + c * L.class_stride] = std::exp(lv[base + c * L.class_stride] - mx) / z;
    const double w = weights.empty() ? 1.0 : weights[p];
    if (w == 0.0) continue;
    const int y = labels[p];
    if (y < 0 || y >= L.classes) throw std::invalid_argument("cross-entropy label out of range");
    total += w * (std::log(z) + mx - lv[base + y * L.class_stride]);
    wsum += w;
  }
  if (wsum <= 0.0) throw std::invalid_argument("cross-entropy: every position is masked out");
  auto lab = std::make_shared<std::vector<int>>(labels.begin(), labels.end());
  auto wts = std::make_shared<std::vector<double>>(weights.begin(), weights.end());
  return Tensor::from_op({1}, {total / wsum}, {logits}, [=](Node& self) {
    auto& g = self.parents[0]->grad_buffer();
    const double scale = self.grad[0] / wsum;
    for (int p = 0; p < L.positions; ++p) {
      const double w = wts->empty() ? 1.0 : (*wts)[p];
      if (w == 0.0) continue;
      const std::size_t base = p * L.pos_stride;
      for (int c = 0; c < L.classes; ++c) {
        const std::size_t idx = base + c * L.class_stride;
        g[idx] += scale * w * ((*probs)[idx] - (c == (*lab)[p] ? 1.0 : 0.0));
      }
    }
  });
}

std::vector<double> softmax(const Tensor& logits, ClassAxis axis) {
  const ClassLayout L = layout_of(logits, axis);
  const auto lv = logits.values();
  std::vector<double> out(lv.size());
  for (int p = 0; p < L.positions; ++p) {
    const std::size_t base = p * L.pos_stride;
    double mx = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < L.classes; ++c) mx = std::max(mx, lv[base + c * L.class_stride]);
    double z = 0.0;
    for (int c = 0; c < L.classes; ++c) z += std::exp(lv[base + c * L.class_stride] - mx);
    for (int c = 0; c < L.classes; ++c) out[base + c * L.class_stride] = std::exp(lv[base + c * L.class_stride] - mx) / z;
  }
  return out;
}

std::vector<int> argmax(const Tensor& logits, ClassAxis axis) {
  const ClassLayout L = layout_of(logits, axis);
  const auto lv = logits.values();
  std::vector<int> out(L.positions);
  for (int p = 0; p < L.positions; ++p) {
    const std::size_t base = p * L.pos_stride;
    int best = 0;
    for (int c = 1; c < L.classes; ++c)
      if (lv[base + c * L.class_stride] > lv[base + best * L.class_stride]) best = c;
    out[p] = best;
  }
  return out;
}

}  // namespace walkplan::nn
