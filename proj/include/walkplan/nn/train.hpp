#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "walkplan/nn/ecc.hpp"
#include "walkplan/nn/encdec.hpp"

namespace walkplan::nn {

struct TrainConfig {
  double lr = 0.005;
  double beta1 = 0.5;
  double beta2 = 0.999;
  int epochs = 10;
  int batch_size = 1;
  std::uint64_t seed = 0;
  /// Random quarter turns plus horizontal and vertical flips.
  bool augment = false;
  /// Per-class loss weights; empty means unweighted.
  std::vector<double> class_weights;

  void validate() const;
};

/// One image sample. mask (optional) zeroes the loss at excluded pixels.
struct PixelSample {
  Tensor input;  // C×n×n
  std::vector<int> target;
  std::vector<double> mask;
  /// Input channels holding horizontal/vertical quantities; swapped by quarter turns.
  std::optional<std::pair<int, int>> axis_channels;
};

struct GraphSample {
  GraphInput graph;
  std::vector<int> labels;
};

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double val_accuracy = 0.0;
};

struct TrainReport {
  /// 0 means the starting parameters were never beaten.
  int best_epoch = 0;
  double best_accuracy = 0.0;
  std::vector<EpochStats> epochs;
};

class TrainingDiverged : public std::runtime_error {
public:
  explicit TrainingDiverged(int epoch);
  int epoch() const { return epoch_; }

private:
  int epoch_;
};

using EpochCallback = std::function<void(const EpochStats&)>;

/// ADAM on mean cross-entropy. The parameters left in the model are the
/// snapshot with the highest validation accuracy (the training set is used
/// when `val` is empty).
TrainReport train(EncDec& model, std::span<const PixelSample> train_set, std::span<const PixelSample> val,
                  const TrainConfig& cfg, const EpochCallback& on_epoch = {});
TrainReport train(EccNet& model, std::span<const GraphSample> train_set, std::span<const GraphSample> val,
                  const TrainConfig& cfg, const EpochCallback& on_epoch = {});

/// Easy set first, then the hard set with cfg_hard (typically a lower rate).
/// An empty easy set reduces to train(model, hard, val, cfg_hard).
TrainReport curriculum_train(EncDec& model, std::span<const PixelSample> easy, std::span<const PixelSample> hard,
                             std::span<const PixelSample> val, const TrainConfig& cfg_easy, const TrainConfig& cfg_hard,
                             const EpochCallback& on_epoch = {});

/// Weighted pixel accuracy: sum of mask * class weight over correct pixels
/// divided by the same sum over all pixels.
double accuracy(const EncDec& model, std::span<const PixelSample> samples, std::span<const double> class_weights = {});
double accuracy(const EccNet& model, std::span<const GraphSample> samples, std::span<const double> class_weights = {});

/// Rotates by quarter_turns * 90 degrees clockwise, then mirrors columns
/// (flip_h) and rows (flip_v).
PixelSample augment(const PixelSample& s, int quarter_turns, bool flip_h, bool flip_v);
/// Same transform on the geometric node features of a boundary graph.
GraphSample augment(const GraphSample& s, int quarter_turns, bool flip_h, bool flip_v);

/// Inverse-frequency class weights normalised to mean 1 over present classes.
std::vector<double> inverse_frequency_weights(std::span<const std::vector<int>> label_sets, int classes,
                                              std::span<const std::vector<double>> masks = {});

}  // namespace walkplan::nn
