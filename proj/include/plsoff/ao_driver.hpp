#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plsoff/errors.hpp"
#include "plsoff/resource_alloc.hpp"
#include "plsoff/sca_power.hpp"
#include "plsoff/system_model.hpp"

namespace plsoff {

/// Knobs of the alternating scheme. The baselines are expressed as
/// restrictions of it (fixed power, uniform split).
struct AoSettings {
  int max_ao_iters = 100;
  ScaSettings sca;
  GreedyMode greedy = GreedyMode::kRederive;
  ComputeRule compute = ComputeRule::kKkt;
  /// When set, every device transmits at this power and the power step is skipped.
  std::optional<double> fixed_power;
  bool optimize_offloading = true;

  void validate() const;
};

struct AoTraceRow {
  int ao_iter = 0;
  ScaTraceRow sca;
};

struct SolveReport {
  std::string scheme = "PROPOSED";
  /// Entry 0 is the initial point, then one entry per AO iteration.
  std::vector<double> objective_trace;
  Decision final_decision;
  std::vector<LatencyBreakdown> per_device;
  int ao_iters = 0;
  int sca_iters_total = 0;
  double wall_time_s = 0.0;
  bool converged = false;
  /// Sum of worst-case latencies of the final decision (equals the last trace entry).
  double objective = 0.0;
  /// Sum of latencies with the eavesdropper exactly at its estimated channel.
  double objective_nominal = 0.0;
  /// Last surrogate objective reported by the power step, if it ran.
  double surrogate_objective = 0.0;
  std::vector<AoTraceRow> sca_trace;
  int sp1_stalls = 0;
  int forced_local = 0;
};

class NonConvergenceError : public Error {
 public:
  explicit NonConvergenceError(SolveReport report)
      : Error("alternating optimization did not converge in " + std::to_string(report.ao_iters) + " iterations"),
        report_(std::move(report)) {}
  const SolveReport& report() const noexcept { return report_; }

 private:
  SolveReport report_;
};

/// Feasible starting point: offloaders chosen by the greedy rule on
/// interference-free secrecy rates at full power, powers at p_max / 2 (or the
/// fixed power), compute split over the chosen set. Offloaders without a
/// positive worst-case secrecy rate at those powers are sent back local.
Decision initialize(const Scenario& s, const AoSettings& settings = {});

/// Alternates power (SCA), compute split and offloading until the objective
/// changes by less than the scenario's ao_threshold. Throws
/// NonConvergenceError at the iteration cap.
SolveReport solve(const Scenario& s, const AoSettings& settings = {});

/// Plain-text report; contains no timing so it is reproducible byte for byte.
std::string format_report(const SolveReport& report);

/// CSV with header `iter,objective`.
std::string objective_trace_csv(const SolveReport& report);
/// CSV with header `iter,objective,max_kkt_residual` over all power steps.
std::string sca_trace_csv(const SolveReport& report);

}  // namespace plsoff
