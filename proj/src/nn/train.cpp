#include "walkplan/nn/train.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "walkplan/nn/ops.hpp"
#include "walkplan/rng.hpp"

namespace walkplan::nn {

namespace {

std::vector<double> position_weights(std::span<const int> labels, std::span<const double> mask,
                                     std::span<const double> class_weights) {
  std::vector<double> w(labels.size(), 1.0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!mask.empty()) w[i] = mask[i];
    if (!class_weights.empty()) w[i] *= class_weights[static_cast<std::size_t>(labels[i])];
  }
  return w;
}

template <class Sample, class LossFn, class AccFn, class AugFn>
TrainReport fit(ParamStore& params, std::span<const Sample> train_set, std::span<const Sample> val, const TrainConfig& cfg,
                const EpochCallback& on_epoch, LossFn loss_of, AccFn accuracy_of, AugFn augment_of) {
  cfg.validate();
  if (train_set.empty()) throw std::invalid_argument("train: empty dataset");
  const auto eval_set = val.empty() ? train_set : val;
  Adam opt(params, {cfg.lr, cfg.beta1, cfg.beta2, 1e-8});
  Rng rng(cfg.seed);

  TrainReport report;
  report.best_accuracy = accuracy_of(eval_set);
  ParamStore best = params;

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    rng.shuffle(order.begin(), order.end());
    double loss_sum = 0.0;
    int pending = 0;
    params.zero_grad();
    for (std::size_t k = 0; k < order.size(); ++k) {
      const Sample& s = train_set[order[k]];
      Tensor loss;
      if (cfg.augment) {
        const int turns = rng.uniform_int(0, 3);
        const bool fh = rng.bernoulli(0.5);
        const bool fv = rng.bernoulli(0.5);
        loss = loss_of(augment_of(s, turns, fh, fv));
      } else {
        loss = loss_of(s);
      }
      if (!std::isfinite(loss.item())) throw TrainingDiverged(epoch);
      loss.backward();
      loss_sum += loss.item();
      if (++pending == cfg.batch_size || k + 1 == order.size()) {
        opt.step(1.0 / pending);
        params.zero_grad();
        pending = 0;
      }
    }
    for (const auto& e : params.entries())
      for (double v : e.tensor.values())
        if (!std::isfinite(v)) throw TrainingDiverged(epoch);

    EpochStats stats{epoch, loss_sum / static_cast<double>(order.size()), accuracy_of(eval_set)};
    report.epochs.push_back(stats);
    if (stats.val_accuracy > report.best_accuracy) {
      report.best_accuracy = stats.val_accuracy;
      report.best_epoch = epoch;
      best = params;
    }
    if (on_epoch) on_epoch(stats);
  }
  params = std::move(best);
  return report;
}

int grid_size(const PixelSample& s) {
  if (s.input.shape().size() != 3 || s.input.dim(1) != s.input.dim(2)) throw std::invalid_argument("augment: input must be C×n×n");
  return s.input.dim(1);
}

}  // namespace

void TrainConfig::validate() const {
  if (!(lr > 0)) throw std::invalid_argument("train: lr must be positive");
  if (!(beta1 > 0 && beta1 < 1 && beta2 > 0 && beta2 < 1)) throw std::invalid_argument("train: betas must lie in (0,1)");
  if (epochs < 0) throw std::invalid_argument("train: epochs must be >= 0");
  if (batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");
  for (double w : class_weights)
    if (!(w >= 0)) throw std::invalid_argument("train: class weights must be non-negative");
}

TrainingDiverged::TrainingDiverged(int epoch)
    : std::runtime_error("training diverged (non-finite loss) in epoch " + std::to_string(epoch)), epoch_(epoch) {}

double accuracy(const EncDec& model, std::span<const PixelSample> samples, std::span<const double> class_weights) {
  NoGradGuard no_grad;
  double hit = 0.0, total = 0.0;
  for (const auto& s : samples) {
    const auto pred = argmax(model.forward(s.input), ClassAxis::First);
    const auto w = position_weights(s.target, s.mask, class_weights);
    for (std::size_t i = 0; i < pred.size(); ++i) {
      total += w[i];
      if (pred[i] == s.target[i]) hit += w[i];
    }
  }
  return total > 0 ? hit / total : 0.0;
}

double accuracy(const EccNet& model, std::span<const GraphSample> samples, std::span<const double> class_weights) {
  NoGradGuard no_grad;
  double hit = 0.0, total = 0.0;
  for (const auto& s : samples) {
    const auto pred = argmax(model.forward(s.graph, false), ClassAxis::Last);
    const auto w = position_weights(s.labels, {}, class_weights);
    for (std::size_t i = 0; i < pred.size(); ++i) {
      total += w[i];
      if (pred[i] == s.labels[i]) hit += w[i];
    }
  }
  return total > 0 ? hit / total : 0.0;
}

TrainReport train(EncDec& model, std::span<const PixelSample> train_set, std::span<const PixelSample> val,
                  const TrainConfig& cfg, const EpochCallback& on_epoch) {
  auto loss_of = [&](const PixelSample& s) {
    const auto w = position_weights(s.target, s.mask, cfg.class_weights);
    return cross_entropy(model.forward(s.input), s.target, w, ClassAxis::First);
  };
  auto acc = [&](std::span<const PixelSample> set) { return accuracy(model, set, cfg.class_weights); };
  auto aug = [](const PixelSample& s, int t, bool fh, bool fv) { return augment(s, t, fh, fv); };
  return fit<PixelSample>(model.params(), train_set, val, cfg, on_epoch, loss_of, acc, aug);
}

TrainReport train(EccNet& model, std::span<const GraphSample> train_set, std::span<const GraphSample> val,
                  const TrainConfig& cfg, const EpochCallback& on_epoch) {
  auto loss_of = [&](const GraphSample& s) {
    const auto w = position_weights(s.labels, {}, cfg.class_weights);
    return cross_entropy(model.forward(s.graph, true), s.labels, w, ClassAxis::Last);
  };
  auto acc = [&](std::span<const GraphSample> set) { return accuracy(model, set, cfg.class_weights); };
  auto aug = [](const GraphSample& s, int t, bool fh, bool fv) { return augment(s, t, fh, fv); };
  return fit<GraphSample>(model.params(), train_set, val, cfg, on_epoch, loss_of, acc, aug);
}

TrainReport curriculum_train(EncDec& model, std::span<const PixelSample> easy, std::span<const PixelSample> hard,
                             std::span<const PixelSample> val, const TrainConfig& cfg_easy, const TrainConfig& cfg_hard,
                             const EpochCallback& on_epoch) {
  if (!easy.empty()) train(model, easy, val, cfg_easy, on_epoch);
  return train(model, hard, val, cfg_hard, on_epoch);
}

PixelSample augment(const PixelSample& s, int quarter_turns, bool flip_h, bool flip_v) {
  const int n = grid_size(s);
  const int channels = s.input.dim(0);
  const int turns = ((quarter_turns % 4) + 4) % 4;
  auto map = [&](int r, int c) {
    for (int t = 0; t < turns; ++t) {
      const int nr = c, nc = n - 1 - r;
      r = nr;
      c = nc;
    }
    if (flip_h) c = n - 1 - c;
    if (flip_v) r = n - 1 - r;
    return std::pair{r, c};
  };
  std::vector<int> src_channel(channels);
  std::iota(src_channel.begin(), src_channel.end(), 0);
  if (s.axis_channels && turns % 2 == 1) std::swap(src_channel[s.axis_channels->first], src_channel[s.axis_channels->second]);

  PixelSample out;
  out.axis_channels = s.axis_channels;
  std::vector<double> in(s.input.numel());
  out.target.resize(s.target.size());
  if (!s.mask.empty()) out.mask.resize(s.mask.size());
  const auto iv = s.input.values();
  const std::size_t plane = static_cast<std::size_t>(n) * n;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const auto [r2, c2] = map(r, c);
      const std::size_t from = static_cast<std::size_t>(r) * n + c;
      const std::size_t to = static_cast<std::size_t>(r2) * n + c2;
      for (int ch = 0; ch < channels; ++ch) in[ch * plane + to] = iv[src_channel[ch] * plane + from];
      out.target[to] = s.target[from];
      if (!s.mask.empty()) out.mask[to] = s.mask[from];
    }
  out.input = Tensor(s.input.shape(), std::move(in));
  return out;
}

GraphSample augment(const GraphSample& s, int quarter_turns, bool flip_h, bool flip_v) {
  const auto& nf = s.graph.node_features;
  const int n = nf.dim(0), f = nf.dim(1);
  if (f != kNodeFeatureLen) throw std::invalid_argument("augment: unexpected node feature layout");
  const int turns = ((quarter_turns % 4) + 4) % 4;
  std::vector<double> v(nf.values().begin(), nf.values().end());
  for (int i = 0; i < n; ++i) {
    double* row = v.data() + static_cast<std::size_t>(i) * f;
    double& axis = row[1];
    double& x = row[f - 2];
    double& y = row[f - 1];
    for (int t = 0; t < turns; ++t) {
      const double nx = 1.0 - y, ny = x;
      x = nx;
      y = ny;
      axis = 1.0 - axis;
    }
    if (flip_h) x = 1.0 - x;
    if (flip_v) y = 1.0 - y;
  }
  GraphSample out{s.graph, s.labels};
  out.graph.node_features = Tensor(nf.shape(), std::move(v));
  return out;
}

std::vector<double> inverse_frequency_weights(std::span<const std::vector<int>> label_sets, int classes,
                                              std::span<const std::vector<double>> masks) {
  std::vector<double> count(classes, 0.0);
  for (std::size_t k = 0; k < label_sets.size(); ++k)
    for (std::size_t i = 0; i < label_sets[k].size(); ++i) {
      const double m = masks.empty() ? 1.0 : masks[k][i];
      count.at(static_cast<std::size_t>(label_sets[k][i])) += m;
    }
  std::vector<double> w(classes, 0.0);
  double total = 0.0;
  int present = 0;
  for (int c = 0; c < classes; ++c)
    if (count[c] > 0) {
      w[c] = 1.0 / count[c];
      total += w[c];
      ++present;
    }
  for (double& x : w) x = present ? x * present / total : 0.0;
  return w;
}

}  // namespace walkplan::nn
