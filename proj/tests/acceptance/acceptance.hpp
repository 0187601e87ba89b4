#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "walkplan/pipeline.hpp"

namespace walkplan::acceptance {

struct Result {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct Settings {
  std::uint64_t seed = 7;
  int rooms = 500;
  int repeat_rooms = 10;
  int repeat_seeds = 4;
  /// Progress lines; null for silence.
  std::ostream* log = nullptr;
};

/// Corpus and cascade shared by the structural, learnability and
/// repeatability checks. Built on first use.
class Context {
public:
  explicit Context(Settings s) : settings_(std::move(s)) {}

  const Settings& settings() const { return settings_; }
  const GenConfig& gen() const { return gen_; }
  const Dataset& data();
  const CascadeModels& models();
  /// Wall-clock seconds spent building the corpus and training.
  double build_seconds() const { return build_seconds_; }

private:
  void build();

  Settings settings_;
  GenConfig gen_;
  std::optional<Dataset> data_;
  std::optional<CascadeModels> models_;
  double build_seconds_ = 0.0;
};

Result gradient_oracle(const Settings& s);
Result mrf_exactness(const Settings& s);
Result structural_soundness(Context& ctx);
Result simulator_invariants(const Settings& s);
Result metric_consistency(const Settings& s);
Result learnability(Context& ctx);
Result repeatability(Context& ctx);
Result serialization(const Settings& s);

/// Runs criterion `id` (1..8).
Result run_criterion(int id, Context& ctx);

}  // namespace walkplan::acceptance
