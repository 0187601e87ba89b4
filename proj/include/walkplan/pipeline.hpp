#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "walkplan/floorplan.hpp"
#include "walkplan/gen.hpp"
#include "walkplan/metrics.hpp"
#include "walkplan/nn/ecc.hpp"
#include "walkplan/nn/encdec.hpp"
#include "walkplan/nn/train.hpp"
#include "walkplan/regularize.hpp"
#include "walkplan/simwalk.hpp"

namespace walkplan {

/// The three trained stages and their content ids.
struct CascadeModels {
  nn::EncDec stage1;
  nn::EccNet stage2;
  nn::EncDec stage3;

  std::vector<std::string> ids() const;
  void save(const std::filesystem::path& dir) const;
  static CascadeModels load(const std::filesystem::path& dir);
};

struct CascadeOptions {
  MrfConfig mrf;
  int door_width = 4;
  double walk_cutoff_m = 0.5;

  nlohmann::json to_json() const;
};

/// Stage 1 produced no interior; carries the per-cell IN probability.
class EmptyInteriorPrediction : public EmptyInteriorError {
public:
  explicit EmptyInteriorPrediction(CellMap probabilities) : probabilities(std::move(probabilities)) {}
  CellMap probabilities;
};

/// Intermediate products of one cascade run.
struct CascadeTrace {
  CellMap walk;
  CellMap stage1_raw;
  CellMap interior;
  BoundaryLoop loop;
  std::vector<SegmentLabel> door_labels;
};

// Stage inputs, shared by training and inference.
nn::Tensor stage1_input(const CellMap& walk);
nn::GraphInput stage2_input(const BoundaryLoop& loop, const CellMap& walk);
/// Cells touching at least one of the given segments.
CellMap segment_touch_map(int n, const std::vector<SegmentRef>& segments, Axis axis);
/// Channels: walk map, interior, cells touching horizontal door segments, cells touching vertical ones.
nn::Tensor stage3_input(const CellMap& walk, const CellMap& interior, const std::vector<SegmentRef>& door_segments);

/// Stage-1 interior of a walk map: argmax, MRF smoothing, connectivity repair.
/// Throws EmptyInteriorPrediction; `raw` receives the argmax labels.
CellMap predict_interior(const nn::EncDec& stage1, const CellMap& walk, const MrfConfig& mrf, CellMap* raw = nullptr);

/// Full trajectory-to-plan cascade. Later stages see only earlier stage
/// outputs and the trajectory.
FloorPlan run_cascade(const Trajectory& traj, const CascadeModels& models, int n, double cell_size_m,
                      const CascadeOptions& opts = {}, CascadeTrace* trace = nullptr);

struct Sample {
  std::string id;  // content hash of the room
  std::uint64_t room_seed = 0;
  std::uint64_t walk_seed = 0;
  Dfpg room;
  Trajectory trajectory;
};

struct Dataset {
  std::vector<Sample> train;
  std::vector<Sample> val;
  std::vector<Sample> test;
  int skipped = 0;
};

/// `count` rooms (duplicates and generation failures are skipped and
/// counted) split 80/10/10 in generation order. gen.seed and sim.seed are
/// base seeds; sample i uses seeds derived from them and i.
Dataset build_dataset(const GenConfig& gen, const SimConfig& sim, int count, std::ostream* log = nullptr);

/// Writes split/id/{room,trajectory,targets}.json plus manifest.json.
void write_dataset(const Dataset& data, const std::filesystem::path& dir);
Dataset read_dataset(const std::filesystem::path& dir);

nn::PixelSample stage1_sample(const Sample& s, double walk_cutoff_m = 0.5);
nn::GraphSample stage2_sample(const Sample& s, double walk_cutoff_m = 0.5);
nn::PixelSample stage3_sample(const Sample& s, double walk_cutoff_m = 0.5);
/// Stage targets as JSON, as written by write_dataset.
nlohmann::json sample_targets(const Sample& s);

/// DOOR on loop nodes whose segment is a ground-truth door segment or a
/// parallel one shifted by one cell across it.
std::vector<SegmentLabel> transfer_door_labels(const BoundaryLoop& loop, const Dfpg& gt);
/// Stage-2 sample on the loop of the stage-1 prediction, labels transferred
/// from the ground truth; nullopt when stage 1 predicts no interior.
std::optional<nn::GraphSample> stage2_predicted_sample(const Sample& s, const nn::EncDec& stage1,
                                                       const CascadeOptions& opts = {});

struct CascadeTrainConfig {
  nn::EncDecConfig stage1{3, 8, 1, 2};
  nn::EccConfig stage2{{16, 32, 32, 16, 2}, {16, 32}};
  nn::EncDecConfig stage3{3, 8, 4, 2};
  nn::TrainConfig stage1_easy{0.005, 0.5, 0.999, 4, 1, 0, true, {}};
  nn::TrainConfig stage1_hard{0.0001, 0.5, 0.999, 4, 1, 0, true, {}};
  nn::TrainConfig stage2_train{0.005, 0.5, 0.999, 20, 1, 0, true, {}};
  nn::TrainConfig stage3_train{0.005, 0.5, 0.999, 8, 1, 0, true, {}};
  /// Rectangle-only rooms for the first curriculum phase (0 skips it).
  int easy_count = 100;
  /// Inverse-frequency class weights for the door and furniture losses.
  bool balance_doors = true;
  bool balance_furniture = true;
  /// Adds stage-2 samples on stage-1 predicted loops when a stage-1 model is given.
  bool stage2_on_predicted = true;
  std::uint64_t seed = 0;
};

struct CascadeTrainReport {
  nn::TrainReport stage1;
  nn::TrainReport stage2;
  nn::TrainReport stage3;
};

/// Rectangle-only companion corpus for curriculum training.
std::vector<Sample> easy_samples(const GenConfig& gen, const SimConfig& sim, int count);

nn::EncDec train_stage1(const Dataset& data, const std::vector<Sample>& easy, const CascadeTrainConfig& cfg,
                        nn::TrainReport* report = nullptr, const nn::EpochCallback& on_epoch = {});
/// With `stage1`, validation runs on predicted loops as at inference.
nn::EccNet train_stage2(const Dataset& data, const CascadeTrainConfig& cfg, nn::TrainReport* report = nullptr,
                        const nn::EpochCallback& on_epoch = {}, const nn::EncDec* stage1 = nullptr);
nn::EncDec train_stage3(const Dataset& data, const CascadeTrainConfig& cfg, nn::TrainReport* report = nullptr,
                        const nn::EpochCallback& on_epoch = {});

/// Convex hull of the cells the dilated trajectory reaches (walk map > 0).
CellMap hull_baseline(const CellMap& walk);
/// `count` doors at random positions of the loop, each grown to `width`.
std::vector<DoorRun> random_door_baseline(const BoundaryLoop& loop, int count, int width, Rng& rng);

/// Door runs of a loop labelling, as segment lists.
std::vector<DoorRun> door_runs_as_segments(const BoundaryLoop& loop, const std::vector<SegmentLabel>& labels);

}  // namespace walkplan
