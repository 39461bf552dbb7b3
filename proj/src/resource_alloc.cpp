#include "plsoff/resource_alloc.hpp"

#include <algorithm>
#include <numeric>

#include "plsoff/errors.hpp"

namespace plsoff {

Eigen::VectorXd allocate_compute(const Scenario& s, const OffloadMask& offload) {
  if (!offload.any()) throw DomainError("compute allocation needs a nonempty offloading set");
  const double total = s.constants.edge_cpu_hz;
  if (!(total > 0.0)) throw DomainError("edge capacity must be positive");
  const Eigen::ArrayXd weight =
      offload.select((s.d_bits.array() * s.cycles_per_bit.array()).sqrt(), Eigen::ArrayXd::Zero(s.size()));
  Eigen::VectorXd f = (weight / weight.sum() * total).matrix();
  // Rescale once more so rounding in the first pass does not leave the sum a few ulps over.
  const double sum = f.sum();
  if (sum > total) f *= total / sum;
  return f;
}

Eigen::VectorXd uniform_compute(const Scenario& s, const OffloadMask& offload) {
  if (!offload.any()) throw DomainError("compute allocation needs a nonempty offloading set");
  const double share = s.constants.edge_cpu_hz / static_cast<double>(offload.count());
  return offload.select(Eigen::ArrayXd::Constant(s.size(), share), 0.0).matrix();
}

Eigen::VectorXd allocate(const Scenario& s, const OffloadMask& offload, ComputeRule rule) {
  if (!offload.any()) return Eigen::VectorXd::Zero(s.size());
  return rule == ComputeRule::kKkt ? allocate_compute(s, offload) : uniform_compute(s, offload);
}

double edge_latency_sum(const Scenario& s, const OffloadMask& offload, ComputeRule rule) {
  if (!offload.any()) return 0.0;
  const Eigen::VectorXd f = allocate(s, offload, rule);
  double sum = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (offload[k]) sum += s.d_bits[k] * s.cycles_per_bit[k] / f[k];
  return sum;
}

DeltaT delta_t(const Scenario& s, const Eigen::Ref<const Eigen::VectorXd>& p, Eigen::Index k, double f_k) {
  const auto& c = s.constants;
  const double sr = secrecy_rate_lb(s, p, k);
  DeltaT out;
  out.k = k;
  out.f_required = f_k;
  if (!(sr > 0.0) || !(f_k > 0.0)) {
    out.delta = kInfiniteLatency;
    out.t_tra = kInfiniteLatency;
    return out;
  }
  const double work = s.d_bits[k] * s.cycles_per_bit[k];
  out.t_tra = s.d_bits[k] / (c.bandwidth_hz * sr);
  out.delta = out.t_tra + work / f_k - work / c.local_cpu_hz;
  return out;
}

namespace {

std::vector<DeltaT> sorted_candidates(std::span<const DeltaT> deltas) {
  std::vector<DeltaT> order;
  for (const auto& d : deltas)
    if (d.delta < 0.0) order.push_back(d);
  std::stable_sort(order.begin(), order.end(), [](const DeltaT& a, const DeltaT& b) {
    return a.delta < b.delta || (a.delta == b.delta && a.k < b.k);
  });
  return order;
}

}  // namespace

OffloadMask greedy_select(std::span<const DeltaT> deltas, Eigen::Index num_devices, double budget) {
  OffloadMask alpha = OffloadMask::Constant(num_devices, false);
  double used = 0.0;
  for (const auto& d : sorted_candidates(deltas)) {
    if (used + d.f_required > budget * (1.0 + 1e-12)) continue;
    used += d.f_required;
    alpha[d.k] = true;
  }
  return alpha;
}

OffloadMask greedy_offload(const Scenario& s, const Eigen::Ref<const Eigen::VectorXd>& p, const CandidateRule& rule) {
  const Eigen::Index n = s.size();
  const OffloadMask current = rule.current.size() == n ? rule.current : OffloadMask::Constant(n, false);
  const bool have_f = rule.f_current.size() == n;

  std::vector<DeltaT> deltas;
  deltas.reserve(static_cast<std::size_t>(n));
  Eigen::VectorXd probe = p;
  for (Eigen::Index k = 0; k < n; ++k) {
    double f_k = 0.0;
    if (current[k] && have_f && rule.f_current[k] > 0.0) {
      f_k = rule.f_current[k];
    } else {
      OffloadMask with_k = current;
      with_k[k] = true;
      f_k = allocate(s, with_k, rule.compute)[k];
    }
    if (current[k] || !(rule.candidate_power > p[k])) {
      deltas.push_back(delta_t(s, p, k, f_k));
    } else {
      probe[k] = rule.candidate_power;
      deltas.push_back(delta_t(s, probe, k, f_k));
      probe[k] = p[k];
    }
  }

  if (rule.mode == GreedyMode::kFrozen) return greedy_select(deltas, n, s.constants.edge_cpu_hz);
  return greedy_rederive(s, deltas, rule.compute);
}

OffloadMask greedy_rederive(const Scenario& s, std::span<const DeltaT> deltas, ComputeRule rule) {
  const Eigen::Index n = s.size();
  OffloadMask alpha = OffloadMask::Constant(n, false);
  double edge_sum = 0.0;
  for (const auto& d : sorted_candidates(deltas)) {
    const Eigen::Index k = d.k;
    OffloadMask trial = alpha;
    trial[k] = true;
    const double trial_edge = edge_latency_sum(s, trial, rule);
    const double work = s.d_bits[k] * s.cycles_per_bit[k];
    const double marginal = (trial_edge - edge_sum) + d.t_tra - work / s.constants.local_cpu_hz;
    if (marginal < 0.0) {
      alpha = trial;
      edge_sum = trial_edge;
    }
  }
  return alpha;
}

}  // namespace plsoff
