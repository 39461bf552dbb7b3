#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "plsoff/scenario.hpp"
#include "plsoff/system_model.hpp"

namespace plsoff {

/// How edge capacity is split across the offloading set.
enum class ComputeRule {
  kKkt,      // f_k proportional to sqrt(d_k c_k)
  kUniform,  // f_k = f_tot / |offloaders|
};

/// Closed-form minimizer of sum d_k c_k / f_k subject to sum f_k <= f_tot,
/// taken over the offloading set only. Zero for non-offloaders.
Eigen::VectorXd allocate_compute(const Scenario& s, const OffloadMask& offload);

Eigen::VectorXd uniform_compute(const Scenario& s, const OffloadMask& offload);

Eigen::VectorXd allocate(const Scenario& s, const OffloadMask& offload, ComputeRule rule);

struct DeltaT {
  Eigen::Index k = 0;
  double delta = 0.0;  // T_tra + T_off - T_loc, +inf if the secrecy rate is zero
  double f_required = 0.0;
  double t_tra = 0.0;
};

/// Where the per-device f used by the greedy budget check comes from.
enum class GreedyMode {
  /// Re-derive the split over the tentative set for every candidate; accept a
  /// device only if the total latency still drops.
  kRederive,
  /// Use fixed per-device f values and check sum f <= f_tot.
  kFrozen,
};

struct CandidateRule {
  GreedyMode mode = GreedyMode::kRederive;
  ComputeRule compute = ComputeRule::kKkt;
  /// Current offloading set and its allocation. Devices outside the set get a
  /// candidate f from `compute` over (current set + device).
  OffloadMask current;
  Eigen::VectorXd f_current;
  /// Devices outside the current set are evaluated at no less than this
  /// transmit power, since a silent jammer has no secrecy rate of its own.
  double candidate_power = 0.0;
};

DeltaT delta_t(const Scenario& s, const Eigen::Ref<const Eigen::VectorXd>& p, Eigen::Index k, double f_k);

/// Ascending-delta greedy over precomputed gains. Devices with delta >= 0 or
/// +inf are skipped, ties go to the lower index, and a device is skipped when
/// its f_required would overflow the budget.
OffloadMask greedy_select(std::span<const DeltaT> deltas, Eigen::Index num_devices, double budget);

/// Ascending-delta greedy that re-derives the split over the tentative set and
/// keeps a device only if the total latency drops.
OffloadMask greedy_rederive(const Scenario& s, std::span<const DeltaT> deltas, ComputeRule rule);

OffloadMask greedy_offload(const Scenario& s, const Eigen::Ref<const Eigen::VectorXd>& p, const CandidateRule& rule);

/// Sum of T_off over the set under the given split rule.
double edge_latency_sum(const Scenario& s, const OffloadMask& offload, ComputeRule rule);

}  // namespace plsoff
