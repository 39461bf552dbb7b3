#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <Eigen/Core>

#include "plsoff/random.hpp"

namespace plsoff {

/// Link budget and compute constants shared by every device.
struct SystemConstants {
  double bandwidth_hz = 500e6;
  double noise_power_w = 1e-14;  // -110 dBm, same at PQES and eavesdropper
  double local_cpu_hz = 168e6;
  double edge_cpu_hz = 2.45e9;
  double p_max_w = 0.19952623149688797;  // 23 dBm; not a published value
  double eps_fraction = 0.1;
  double ao_threshold = 1e-6;

  void validate() const;
};

/// Placement of the edge server (origin), eavesdropper and device disc.
struct Geometry {
  double radius_m = 50.0;
  double eve_x_m = 50.0;
  double eve_y_m = 0.0;
  double min_distance_m = 1.0;
};

struct ScenarioConfig {
  SystemConstants constants;
  Geometry geometry;
  int num_devices = 10;
  double data_kb_min = 10.0;
  double data_kb_max = 50.0;

  void validate() const;
};

inline constexpr double kBitsPerKb = 8192.0;

/// A fully instantiated problem. Gains are linear power gains.
struct Scenario {
  Eigen::VectorXd d_bits;
  Eigen::VectorXd cycles_per_bit;
  Eigen::VectorXd h;      // device -> edge server
  Eigen::VectorXd g_est;  // device -> eavesdropper, estimate
  Eigen::VectorXd eps;    // uncertainty radius on g_est
  SystemConstants constants;

  Eigen::Index size() const noexcept { return d_bits.size(); }

  /// Best case for the eavesdropper on its own link.
  Eigen::VectorXd g_plus() const { return g_est + eps; }
  /// Worst case jamming gain, clamped at zero.
  Eigen::VectorXd g_minus() const { return (g_est - eps).cwiseMax(0.0); }

  void validate() const;
  bool operator==(const Scenario& other) const;
};

/// Tags separating the per-device random substreams.
enum class StreamTag : std::uint64_t {
  kPosition = 1,
  kShadowEdge,
  kShadowEve,
  kFadeEdge,
  kFadeEve,
  kDataSize,
  kWorkload,
};

inline SplitMix64 device_stream(std::uint64_t seed, Eigen::Index device, StreamTag tag) {
  return SplitMix64(derive_seed(seed, static_cast<std::uint64_t>(device), static_cast<std::uint64_t>(tag)));
}

inline constexpr double kShadowingStdDb = 8.0;

/// Small-cell path loss 30.6 + 36.7 log10(d) plus a given shadowing term.
double path_loss_db(double distance_m, double shadowing_db);

/// Same, with one N(0, 8 dB) shadowing draw from g.
template <class Urbg>
double path_loss_db(double distance_m, Urbg& g) {
  return path_loss_db(distance_m, kShadowingStdDb * standard_normal(g));
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

Scenario generate(const ScenarioConfig& config, std::uint64_t seed);

/// Flat key-value serialization; parse_scenario(serialize(s)) == s bitwise.
std::string serialize(const Scenario& s);
Scenario parse_scenario(std::string_view text, const std::string& origin = "<string>");
void save_scenario(const Scenario& s, const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace plsoff
