#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "plsoff/baselines.hpp"
#include "plsoff/scenario.hpp"

namespace plsoff {

enum class SweepAxis {
  kDataSize,      // points in KB; every device gets exactly that data size
  kEdgeCapacity,  // points in GHz
  kDeviceCount,   // points are K
};

std::string_view axis_name(SweepAxis axis);
SweepAxis parse_axis(std::string_view name);
std::vector<double> default_points(SweepAxis axis);

struct SweepSpec {
  SweepAxis axis = SweepAxis::kEdgeCapacity;
  std::vector<double> points;
  int runs = 200;
  std::vector<SchemeId> schemes{kAllSchemes.begin(), kAllSchemes.end()};
  ScenarioConfig base;
  AoSettings settings;
  std::uint64_t seed = 1;
  /// Worker threads; 0 picks the hardware concurrency. Does not affect results.
  int threads = 0;
  /// Fraction of non-converged runs above which the sweep fails.
  double max_exclusion_rate = 0.01;

  void validate() const;
};

/// Seed of Monte-Carlo run i; shared by every point and scheme so runs are paired.
std::uint64_t run_seed(std::uint64_t seed, int run);

/// Scenario config of one sweep point.
ScenarioConfig point_config(const SweepSpec& spec, double point);

struct SweepCell {
  double mean_latency_s = 0.0;
  double stderr_s = 0.0;
  int runs = 0;
  int excluded = 0;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::kEdgeCapacity;
  std::vector<double> points;
  std::vector<SchemeId> schemes;
  /// cells[point][scheme]
  std::vector<std::vector<SweepCell>> cells;
  /// samples[point][scheme][run]; NaN marks an excluded run.
  std::vector<std::vector<std::vector<double>>> samples;

  const SweepCell& cell(std::size_t point, SchemeId scheme) const;
  const std::vector<double>& runs_of(std::size_t point, SchemeId scheme) const;
};

SweepResult run_sweep(const SweepSpec& spec);

/// CSV with header `axis,point,scheme,mean_latency_s,stderr_s,runs`.
std::string sweep_csv(const SweepResult& result);
/// Standalone matplotlib script that plots sweep.csv next to it.
std::string plot_script(SweepAxis axis);

/// Writes sweep.csv and plot_sweep.py into out_dir (created if missing).
void emit(const SweepResult& result, const std::filesystem::path& out_dir);

}  // namespace plsoff
