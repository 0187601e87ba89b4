// walkplan command line: data generation, training, inference, scoring and rendering.
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "acceptance.hpp"
#include "walkplan/boundary.hpp"
#include "walkplan/dfpg_io.hpp"
#include "walkplan/nn/checkpoint.hpp"
#include "walkplan/pipeline.hpp"
#include "walkplan/svg.hpp"

namespace fs = std::filesystem;
using namespace walkplan;

namespace {

struct GenOptions {
  int n = 64;
  double cell_size_m = 0.25;
  double min_side_m = 3.0;
  double max_side_m = 10.0;
  int max_concavities = 3;

  void add(CLI::App* cmd) {
    cmd->add_option("--n", n, "Grid size in cells")->capture_default_str();
    cmd->add_option("--cell-size", cell_size_m, "Cell size in meters")->capture_default_str();
    cmd->add_option("--min-side", min_side_m, "Smallest room side in meters")->capture_default_str();
    cmd->add_option("--max-side", max_side_m, "Largest room side in meters")->capture_default_str();
    cmd->add_option("--max-concavities", max_concavities, "Rectangular notches per room")->capture_default_str();
  }
  GenConfig config(std::uint64_t seed) const {
    GenConfig g;
    g.seed = seed;
    g.n = n;
    g.cell_size_m = cell_size_m;
    g.min_side_m = min_side_m;
    g.max_side_m = max_side_m;
    g.max_concavities = max_concavities;
    return g;
  }
};

struct MrfOptions {
  MrfConfig mrf;
  void add(CLI::App* cmd) {
    cmd->add_option("--gamma-in-out", mrf.gamma_in_to_out, "Cost of relabeling predicted IN as OUT")->capture_default_str();
    cmd->add_option("--gamma-out-in", mrf.gamma_out_to_in, "Cost of relabeling predicted OUT as IN")->capture_default_str();
    cmd->add_option("--gamma-border", mrf.gamma_border, "Cost per label change between neighbours")->capture_default_str();
  }
};

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_text_file(path, text);
}

void save_model(const fs::path& path, const nlohmann::json& header, const nn::ParamStore& params) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  nn::save_checkpoint(path, header, params);
  std::cerr << "wrote " << path.string() << '\n';
}

nn::EpochCallback progress(const char* stage) {
  return [stage](const nn::EpochStats& e) {
    std::fprintf(stderr, "%s epoch %d loss %.4f val %.4f\n", stage, e.epoch, e.train_loss, e.val_accuracy);
  };
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"walkplan: floor plans from walking trajectories"};
  app.set_config("--config", "", "Key-value file supplying any option");
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string out;

  // generate
  GenOptions gen_opts;
  auto* generate = app.add_subcommand("generate", "Generate a procedural room (Dfpg JSON)")->configurable();
  generate->add_option("--seed", seed, "Random seed")->required();
  generate->add_option("-o,--out", out, "Output file (stdout if omitted)");
  gen_opts.add(generate);

  // simulate
  std::string room_path;
  SimConfig sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate a walk through a room")->configurable();
  simulate->add_option("--room", room_path, "Room JSON")->required()->check(CLI::ExistingFile);
  simulate->add_option("--seed", seed, "Random seed")->required();
  simulate->add_option("--strat-cell", sim.strat_cell_m, "Stratification cell in meters")->capture_default_str();
  simulate->add_option("--wall-buffer", sim.wall_buffer_cells, "Cells kept clear of walls")->capture_default_str();
  simulate->add_option("-o,--out", out, "Output file (stdout if omitted)");

  // dataset
  int count = 500;
  auto* dataset = app.add_subcommand("dataset", "Build a train/val/test corpus on disk")->configurable();
  dataset->add_option("--seed", seed, "Random seed")->required();
  dataset->add_option("--count", count, "Number of rooms")->capture_default_str()->check(CLI::Range(10, 1000000));
  dataset->add_option("-o,--out", out, "Output directory")->required();
  gen_opts.add(dataset);

  // train
  int stage = 1;
  std::string data_dir;
  std::optional<int> epochs;
  std::optional<double> lr;
  std::optional<int> base_features;
  int easy_count = 100;
  std::string stage1_path;
  auto* train = app.add_subcommand("train", "Train one cascade stage")->configurable();
  train->add_option("--stage", stage, "Stage 1, 2 or 3")->required()->check(CLI::IsMember({1, 2, 3}));
  train->add_option("--data", data_dir, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  train->add_option("--seed", seed, "Random seed")->required();
  train->add_option("-o,--out", out, "Checkpoint file")->required();
  train->add_option("--epochs", epochs, "Epochs (stage 1: hard phase)");
  train->add_option("--lr", lr, "Learning rate (stage 1: hard phase)");
  train->add_option("--base-features", base_features, "Encoder-decoder width (stages 1 and 3)");
  train->add_option("--stage1", stage1_path, "Stage-1 checkpoint; stage 2 then also trains on its predicted loops")
      ->check(CLI::ExistingFile);
  train->add_option("--easy-count", easy_count, "Rectangle rooms for the stage-1 warm-up")->capture_default_str();

  // infer
  std::string models_dir, traj_path;
  int n = 64;
  double cell_size_m = 0.25;
  MrfOptions mrf_opts;
  auto* infer = app.add_subcommand("infer", "Run the cascade on a trajectory")->configurable();
  infer->add_option("--models", models_dir, "Directory with stage1/2/3.ckpt")->required()->check(CLI::ExistingDirectory);
  infer->add_option("--traj", traj_path, "Trajectory JSON")->required()->check(CLI::ExistingFile);
  infer->add_option("--n", n, "Grid size in cells")->capture_default_str();
  infer->add_option("--cell-size", cell_size_m, "Cell size in meters")->capture_default_str();
  infer->add_option("-o,--out", out, "Floor plan JSON (stdout if omitted)");
  mrf_opts.add(infer);

  // eval
  std::string split = "test";
  bool align = false;
  auto* eval = app.add_subcommand("eval", "Score the cascade on a dataset split")->configurable();
  eval->add_option("--models", models_dir, "Directory with stage1/2/3.ckpt")->required()->check(CLI::ExistingDirectory);
  eval->add_option("--data", data_dir, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  eval->add_option("--split", split, "train, val or test")->capture_default_str()->check(CLI::IsMember({"train", "val", "test"}));
  eval->add_flag("--align", align, "Align predictions to ground truth by bounding-box centers");
  eval->add_option("-o,--out", out, "Scores JSON (stdout if omitted)");
  mrf_opts.add(eval);

  // render
  std::string plan_path;
  double px = 8.0;
  auto* render = app.add_subcommand("render", "Draw a floor plan or room as SVG")->configurable();
  auto* plan_opt = render->add_option("--plan", plan_path, "Floor plan JSON")->check(CLI::ExistingFile);
  render->add_option("--room", room_path, "Ground-truth room JSON instead of a plan")->check(CLI::ExistingFile)->excludes(plan_opt);
  render->add_option("--traj", traj_path, "Trajectory overlay")->check(CLI::ExistingFile);
  render->add_option("--px", px, "Pixels per cell")->capture_default_str();
  render->add_option("-o,--out", out, "SVG file (stdout if omitted)");

  // repro
  acceptance::Settings acc;
  std::string json_out;
  auto* repro = app.add_subcommand("repro", "Run the full acceptance suite")->configurable();
  repro->add_option("--seed", acc.seed, "Random seed")->required();
  repro->add_option("--rooms", acc.rooms, "Corpus size")->capture_default_str();
  repro->add_option("--json", json_out, "Results JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) {
      write_or_print(out, dfpg_to_json(generate_room(gen_opts.config(seed))).dump() + "\n");
    } else if (*simulate) {
      sim.seed = seed;
      write_or_print(out, trajectory_to_json(simulate_walk(load_dfpg(room_path), sim)).dump() + "\n");
    } else if (*dataset) {
      SimConfig s;
      s.seed = seed;
      const auto data = build_dataset(gen_opts.config(seed), s, count, &std::cerr);
      write_dataset(data, out);
      std::cerr << "wrote " << data.train.size() << '/' << data.val.size() << '/' << data.test.size() << " samples to "
                << out << '\n';
    } else if (*train) {
      const auto data = read_dataset(data_dir);
      if (data.train.empty()) throw std::runtime_error("dataset has no training samples");
      CascadeTrainConfig cfg;
      cfg.seed = seed;
      cfg.easy_count = easy_count;
      if (stage == 1) {
        if (epochs) cfg.stage1_hard.epochs = *epochs;
        if (lr) cfg.stage1_hard.lr = *lr;
        if (base_features) cfg.stage1.base_features = *base_features;
        GenConfig g;
        g.seed = seed;
        g.n = data.train.front().room.n();
        g.cell_size_m = data.train.front().room.cell_size_m();
        g.max_side_m = std::min(g.max_side_m, g.n * g.cell_size_m);
        SimConfig s;
        s.seed = seed;
        const auto easy = easy_samples(g, s, cfg.easy_count);
        const auto model = train_stage1(data, easy, cfg, nullptr, progress("stage1"));
        save_model(out, nn::checkpoint_header(model), model.params());
      } else if (stage == 2) {
        if (epochs) cfg.stage2_train.epochs = *epochs;
        if (lr) cfg.stage2_train.lr = *lr;
        std::optional<nn::EncDec> stage1;
        if (!stage1_path.empty()) stage1.emplace(nn::encdec_from_checkpoint(nn::load_checkpoint(stage1_path)));
        const auto model = train_stage2(data, cfg, nullptr, progress("stage2"), stage1 ? &*stage1 : nullptr);
        save_model(out, nn::checkpoint_header(model), model.params());
      } else {
        if (epochs) cfg.stage3_train.epochs = *epochs;
        if (lr) cfg.stage3_train.lr = *lr;
        if (base_features) cfg.stage3.base_features = *base_features;
        const auto model = train_stage3(data, cfg, nullptr, progress("stage3"));
        save_model(out, nn::checkpoint_header(model), model.params());
      }
    } else if (*infer) {
      CascadeOptions opts;
      opts.mrf = mrf_opts.mrf;
      const auto plan = run_cascade(load_trajectory(traj_path), CascadeModels::load(models_dir), n, cell_size_m, opts);
      write_or_print(out, floorplan_to_json(plan).dump() + "\n");
    } else if (*eval) {
      const auto data = read_dataset(data_dir);
      const auto models = CascadeModels::load(models_dir);
      const auto& samples = split == "train" ? data.train : split == "val" ? data.val : data.test;
      CascadeOptions opts;
      opts.mrf = mrf_opts.mrf;
      std::vector<PlanScores> scores;
      int empty = 0;
      for (const auto& s : samples) {
        try {
          auto plan = run_cascade(s.trajectory, models, s.room.n(), s.room.cell_size_m(), opts);
          if (align) plan = align_by_bbox(plan, s.room);
          scores.push_back(score_plan(plan, s.room));
        } catch (const EmptyInteriorPrediction&) {
          ++empty;
          scores.push_back({{1, 0, 0}, {1, 0, 0}, {1, 0, 0}});
        }
      }
      nlohmann::json j = to_json(average_scores(scores));
      j["samples"] = samples.size();
      j["empty_interiors"] = empty;
      write_or_print(out, j.dump(2) + "\n");
    } else if (*render) {
      FloorPlan plan;
      if (!plan_path.empty())
        plan = floorplan_from_json(read_json_file(plan_path));
      else if (!room_path.empty())
        plan = floorplan_from_dfpg(load_dfpg(room_path));
      else
        throw std::runtime_error("render needs --plan or --room");
      std::optional<Trajectory> traj;
      if (!traj_path.empty()) traj = load_trajectory(traj_path);
      write_or_print(out, render_svg(plan, traj, {px}));
    } else if (*repro) {
      acc.log = &std::cerr;
      acceptance::Context ctx(acc);
      nlohmann::json results = nlohmann::json::array();
      int failed = 0;
      for (int id = 1; id <= 8; ++id) {
        const auto r = acceptance::run_criterion(id, ctx);
        failed += !r.pass;
        std::printf("criterion %d %s  %s: %s\n", r.id, r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
        std::fflush(stdout);
        results.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"seconds", r.seconds}});
      }
      if (!json_out.empty()) write_json_file(json_out, results);
      return failed == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
