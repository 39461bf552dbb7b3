#include "plsoff/ao_driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <sstream>

#include "plsoff/keyvalue.hpp"

namespace plsoff {
namespace {

constexpr int kFlipScaIters = 3;

double start_power(const Scenario& s, const AoSettings& settings) {
  return settings.fixed_power.value_or(0.5 * s.constants.p_max_w);
}

// Recomputes f and the tight thresholds after alpha or p changed.
void refresh(const Scenario& s, const AoSettings& settings, Decision& d) {
  d.f = allocate(s, d.alpha, settings.compute);
  tighten_thresholds(s, d);
}

// Runs SP1 on d and adopts the powers when the objective does not rise.
// Returns the resulting objective; SP1 failures leave d untouched.
double improve_powers(const Scenario& s, const AoSettings& settings, int iteration, Decision& d, double current,
                      SolveReport& report) {
  Sp1Result sp1 = solve_sp1(s, d.alpha, d.f, d.p, settings.sca);
  report.sca_iters_total += static_cast<int>(sp1.trace.size());
  for (const auto& row : sp1.trace) report.sca_trace.push_back({iteration, row});
  if (!sp1.trace.empty()) report.surrogate_objective = sp1.trace.back().objective;
  Decision trial = d;
  trial.p = sp1.p;
  tighten_thresholds(s, trial);
  const double value = objective(s, trial);
  if (!(value <= current)) return current;
  d = std::move(trial);
  return value;
}

// Offloading set built from each device's gain when it transmits alone at
// `power`, admitting a device only if the objective with every admitted
// device at `power` and the rest silent still drops.
OffloadMask greedy_solo(const Scenario& s, const AoSettings& settings, double power) {
  const Eigen::Index n = s.size();
  std::vector<DeltaT> order;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::VectorXd probe = Eigen::VectorXd::Zero(n);
    probe[k] = power;
    OffloadMask only_k = OffloadMask::Constant(n, false);
    only_k[k] = true;
    const DeltaT d = delta_t(s, probe, k, allocate(s, only_k, settings.compute)[k]);
    if (d.delta < 0.0) order.push_back(d);
  }
  std::stable_sort(order.begin(), order.end(), [](const DeltaT& a, const DeltaT& b) { return a.delta < b.delta; });

  Decision d = Decision::all_local(s);
  double best = objective(s, d);
  for (const DeltaT& c : order) {
    Decision trial = d;
    trial.alpha[c.k] = true;
    trial.p[c.k] = power;
    trial.f = allocate(s, trial.alpha, settings.compute);
    const double value = objective(s, trial);
    if (value < best) {
      d = std::move(trial);
      best = value;
    }
  }
  return d.alpha;
}

}  // namespace

void AoSettings::validate() const {
  sca.validate();
  if (max_ao_iters < 1) throw InvalidConfigError("'max_ao_iters' must be at least 1");
  if (fixed_power && !(*fixed_power >= 0.0)) throw InvalidConfigError("fixed power must be nonnegative");
}

Decision initialize(const Scenario& s, const AoSettings& settings) {
  const Eigen::Index n = s.size();
  const auto& c = s.constants;
  const double p_probe = settings.fixed_power.value_or(c.p_max_w);
  const Eigen::VectorXd g_plus = s.g_plus();

  std::vector<DeltaT> deltas;
  deltas.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    OffloadMask only_k = OffloadMask::Constant(n, false);
    only_k[k] = true;
    const double f_k = allocate(s, only_k, settings.compute)[k];
    const double rate = link_rate(p_probe * s.h[k], 0.0, c.noise_power_w) -
                        link_rate(p_probe * g_plus[k], 0.0, c.noise_power_w);
    DeltaT d;
    d.k = k;
    d.f_required = f_k;
    if (rate > 0.0) {
      const double work = s.d_bits[k] * s.cycles_per_bit[k];
      d.t_tra = transmission_latency(s.d_bits[k], c.bandwidth_hz, rate);
      d.delta = d.t_tra + work / f_k - work / c.local_cpu_hz;
    } else {
      d.t_tra = d.delta = kInfiniteLatency;
    }
    deltas.push_back(d);
  }

  Decision d = Decision::all_local(s, start_power(s, settings));
  d.alpha = settings.optimize_offloading ? greedy_rederive(s, deltas, settings.compute)
                                         : OffloadMask::Constant(n, false);
  // Secrecy rates do not depend on roles, so offenders can be removed in one pass.
  for (Eigen::Index k = 0; k < n; ++k)
    if (d.alpha[k] && !(secrecy_rate_lb(s, d.p, k) > 0.0)) d.alpha[k] = false;
  refresh(s, settings, d);
  return d;
}

SolveReport solve(const Scenario& s, const AoSettings& settings) {
  settings.validate();
  s.validate();
  const auto started = std::chrono::steady_clock::now();

  SolveReport report;
  Decision d = initialize(s, settings);
  double current = objective(s, d);
  report.objective_trace.push_back(current);

  for (int it = 1; it <= settings.max_ao_iters; ++it) {
    const double before = current;

    // Step 1: transmit powers.
    if (!settings.fixed_power && d.alpha.any()) {
      try {
        current = improve_powers(s, settings, it, d, current, report);
      } catch (const InfeasibleStartError& e) {
        for (int k : e.offenders()) d.alpha[k] = false;
        report.forced_local += static_cast<int>(e.offenders().size());
        refresh(s, settings, d);
        current = objective(s, d);
      } catch (const SolverStallError& e) {
        ++report.sp1_stalls;
        for (const auto& row : e.trace()) report.sca_trace.push_back({it, row});
      }
    }

    // Step 2: compute split for the current offloading set.
    {
      Decision trial = d;
      refresh(s, settings, trial);
      const double value = objective(s, trial);
      if (value <= current) {
        d = std::move(trial);
        current = value;
      }
    }

    // Step 3: offloading decisions by the greedy rule; f is re-derived at once.
    if (settings.optimize_offloading) {
      CandidateRule rule;
      rule.mode = settings.greedy;
      rule.compute = settings.compute;
      rule.current = d.alpha;
      rule.f_current = d.f;
      rule.candidate_power = settings.fixed_power.value_or(s.constants.p_max_w);
      // Candidates are scored under the current powers, under full power for
      // everyone (a silent jammer can hide a profitable offloader), and each on
      // its own with the rest silent (a loud offloader can hide a better one).
      // Each proposed set is judged after its powers are re-optimized.
      const Eigen::VectorXd full = Eigen::VectorXd::Constant(s.size(), rule.candidate_power);
      const OffloadMask from_current = greedy_offload(s, d.p, rule);
      const OffloadMask from_full = greedy_offload(s, full, rule);
      const OffloadMask from_solo = greedy_solo(s, settings, rule.candidate_power);
      std::optional<Decision> best;
      double best_value = current;
      const auto consider = [&](const OffloadMask& next, const Eigen::VectorXd& start,
                                const AoSettings& scoring) {
        if (!(next != d.alpha).any() && start == d.p) return;
        Decision trial = d;
        trial.alpha = next;
        trial.p = start;
        for (Eigen::Index k = 0; k < s.size(); ++k)
          if (next[k] && !d.alpha[k]) trial.p[k] = std::max(trial.p[k], rule.candidate_power);
        refresh(s, settings, trial);
        double value = objective(s, trial);
        if (!settings.fixed_power && trial.alpha.any()) {
          try {
            value = improve_powers(s, scoring, it, trial, value, report);
          } catch (const InfeasibleStartError&) {
          } catch (const SolverStallError&) {
            ++report.sp1_stalls;
          }
        }
        if (value < best_value) {
          best = std::move(trial);
          best_value = value;
        }
      };
      consider(from_current, d.p, settings);
      if ((from_full != from_current).any()) consider(from_full, full, settings);
      if ((from_solo != from_current).any() && (from_solo != from_full).any())
        consider(from_solo, from_solo.select(full, Eigen::VectorXd::Zero(s.size())), settings);
      // When no greedy set helps, try adding or removing a single device,
      // scored after a few SCA iterations; later rounds finish the powers.
      if (!best) {
        AoSettings screening = settings;
        screening.sca.max_sca_iters = std::min(settings.sca.max_sca_iters, kFlipScaIters);
        for (Eigen::Index k = 0; k < s.size(); ++k) {
          OffloadMask next = d.alpha;
          next[k] = !next[k];
          consider(next, d.p, screening);
        }
      }
      if (best) {
        d = std::move(*best);
        current = best_value;
      }
    }

    report.objective_trace.push_back(current);
    report.ao_iters = it;
    if (std::abs(before - current) < s.constants.ao_threshold) {
      report.converged = true;
      break;
    }
  }

  report.final_decision = d;
  report.per_device = latency_breakdown(s, d);
  report.objective = current;
  report.objective_nominal = objective_at(s, d, s.g_est);
  report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (!report.converged) throw NonConvergenceError(std::move(report));
  return report;
}

std::string format_report(const SolveReport& r) {
  std::ostringstream os;
  os << "scheme = " << r.scheme << '\n'
     << "objective_s = " << kv::format_double(r.objective) << '\n'
     << "objective_nominal_s = " << kv::format_double(r.objective_nominal) << '\n'
     << "surrogate_objective_s = " << kv::format_double(r.surrogate_objective) << '\n'
     << "converged = " << (r.converged ? "true" : "false") << '\n'
     << "ao_iters = " << r.ao_iters << '\n'
     << "sca_iters_total = " << r.sca_iters_total << '\n'
     << "offloading = " << r.final_decision.alpha.count() << '/' << r.final_decision.alpha.size() << '\n'
     << '\n'
     << "device,alpha,p_w,f_hz,t_th_s,t_loc_s,t_tra_s,t_off_s,t_tot_s,sr_lb\n";
  const Decision& d = r.final_decision;
  for (std::size_t i = 0; i < r.per_device.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const auto& b = r.per_device[i];
    os << k << ',' << (d.alpha[k] ? 1 : 0) << ',' << kv::format_double(d.p[k]) << ',' << kv::format_double(d.f[k])
       << ',' << kv::format_double(d.t_th[k]) << ',' << kv::format_double(b.t_loc) << ','
       << kv::format_double(b.t_tra) << ',' << kv::format_double(b.t_off) << ',' << kv::format_double(b.t_tot) << ','
       << kv::format_double(b.sr_lb) << '\n';
  }
  return os.str();
}

std::string objective_trace_csv(const SolveReport& r) {
  std::ostringstream os;
  os << "iter,objective\n";
  for (std::size_t i = 0; i < r.objective_trace.size(); ++i)
    os << i << ',' << kv::format_double(r.objective_trace[i]) << '\n';
  return os.str();
}

std::string sca_trace_csv(const SolveReport& r) {
  std::ostringstream os;
  os << "iter,objective,max_kkt_residual\n";
  int i = 0;
  for (const auto& row : r.sca_trace)
    os << i++ << ',' << kv::format_double(row.sca.objective) << ',' << kv::format_double(row.sca.max_kkt_residual)
       << '\n';
  return os.str();
}

}  // namespace plsoff
