#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "plsoff/ao_driver.hpp"
#include "plsoff/experiments.hpp"
#include "plsoff/keyvalue.hpp"
#include "plsoff/scenario.hpp"

namespace plsoff {

/// Everything a CLI run needs. Serialized with the same flat key-value
/// format as scenarios; unknown keys are rejected.
struct RunConfig {
  std::uint64_t seed = 42;
  ScenarioConfig scenario;
  AoSettings solver;
  SweepAxis sweep_axis = SweepAxis::kEdgeCapacity;
  std::vector<double> sweep_points = default_points(SweepAxis::kEdgeCapacity);
  int runs = 200;
  std::vector<SchemeId> schemes{kAllSchemes.begin(), kAllSchemes.end()};
  int threads = 0;

  /// Applies every key of doc in turn. `noise_dbm` and `p_max_dbm` are accepted
  /// as inputs and stored in watts.
  void apply(const kv::Document& doc);
  /// Applies `key=value` strings after any file.
  void apply_overrides(const std::vector<std::string>& overrides);

  std::string to_text() const;
  SweepSpec sweep_spec() const;
};

RunConfig load_config(const std::filesystem::path& path);

}  // namespace plsoff
