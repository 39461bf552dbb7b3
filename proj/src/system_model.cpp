#include "plsoff/system_model.hpp"

#include "plsoff/errors.hpp"
#include "plsoff/keyvalue.hpp"

namespace plsoff {

Decision Decision::all_local(const Scenario& s, double power) {
  const Eigen::Index n = s.size();
  Decision d;
  d.alpha = OffloadMask::Constant(n, false);
  d.p = Eigen::VectorXd::Constant(n, power);
  d.f = Eigen::VectorXd::Zero(n);
  d.t_th.resize(n);
  for (Eigen::Index k = 0; k < n; ++k)
    d.t_th[k] = local_latency(s.d_bits[k], s.cycles_per_bit[k], s.constants.local_cpu_hz);
  return d;
}

void Decision::validate(const Scenario& s) const {
  const Eigen::Index n = s.size();
  if (alpha.size() != n || p.size() != n || f.size() != n || t_th.size() != n)
    throw DomainError("decision size does not match scenario");
  const double p_max = s.constants.p_max_w;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!(p[k] >= 0.0 && p[k] <= p_max * (1.0 + 1e-12)))
      throw DomainError("power of device " + std::to_string(k) + " outside [0, p_max]: " + kv::format_double(p[k]));
    if (alpha[k] && !(f[k] > 0.0))
      throw DomainError("offloading device " + std::to_string(k) + " has no compute allocation");
  }
  const double used = (alpha.cast<double>() * f.array()).sum();
  if (used > s.constants.edge_cpu_hz * (1.0 + 1e-12))
    throw DomainError("compute allocation " + kv::format_double(used) + " exceeds edge capacity");
}

Eigen::VectorXd secrecy_rates_lb(const Scenario& s, const Eigen::Ref<const Eigen::VectorXd>& p) {
  Eigen::VectorXd out(s.size());
  for (Eigen::Index k = 0; k < s.size(); ++k) out[k] = secrecy_rate_lb(s, p, k);
  return out;
}

double local_latency(double d_bits, double cycles_per_bit, double local_cpu_hz) {
  if (!(d_bits > 0.0) || !(cycles_per_bit > 0.0) || !(local_cpu_hz > 0.0))
    throw DomainError("local latency needs positive data size, cycle cost and CPU rate");
  return d_bits * cycles_per_bit / local_cpu_hz;
}

LatencyBreakdown total_latency(const Scenario& s, const Decision& decision, Eigen::Index k) {
  const auto& c = s.constants;
  LatencyBreakdown b;
  const double work = s.d_bits[k] * s.cycles_per_bit[k];
  b.t_loc = local_latency(s.d_bits[k], s.cycles_per_bit[k], c.local_cpu_hz);
  b.r_rcd = rcd_rate(s, decision.p, k);
  b.r_eve_ub = eve_rate_ub(s, decision.p, k);
  b.sr_lb = std::max(0.0, b.r_rcd - b.r_eve_ub);
  b.t_tra = transmission_latency(s.d_bits[k], c.bandwidth_hz, b.sr_lb);
  b.t_off = decision.f[k] > 0.0 ? work / decision.f[k] : kInfiniteLatency;
  b.t_tot = decision.alpha[k] ? b.t_tra + b.t_off : b.t_loc;
  return b;
}

std::vector<LatencyBreakdown> latency_breakdown(const Scenario& s, const Decision& decision) {
  std::vector<LatencyBreakdown> out;
  out.reserve(static_cast<std::size_t>(s.size()));
  for (Eigen::Index k = 0; k < s.size(); ++k) out.push_back(total_latency(s, decision, k));
  return out;
}

double objective(const Scenario& s, const Decision& decision) {
  double sum = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k) sum += total_latency(s, decision, k).t_tot;
  return sum;
}

double objective_at(const Scenario& s, const Decision& decision, const Eigen::Ref<const Eigen::VectorXd>& g) {
  const auto& c = s.constants;
  double sum = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (!decision.alpha[k]) {
      sum += local_latency(s.d_bits[k], s.cycles_per_bit[k], c.local_cpu_hz);
      continue;
    }
    const double sr = secrecy_rate(s, decision.p, g, k);
    sum += transmission_latency(s.d_bits[k], c.bandwidth_hz, sr) + s.d_bits[k] * s.cycles_per_bit[k] / decision.f[k];
  }
  return sum;
}

void tighten_thresholds(const Scenario& s, Decision& decision) {
  decision.t_th.resize(s.size());
  for (Eigen::Index k = 0; k < s.size(); ++k) decision.t_th[k] = total_latency(s, decision, k).t_tot;
}

}  // namespace plsoff
