#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "plsoff/scenario.hpp"

namespace plsoff {

using OffloadMask = Eigen::Array<bool, Eigen::Dynamic, 1>;

inline constexpr double kInfiniteLatency = std::numeric_limits<double>::infinity();

/// One candidate operating point. f is only meaningful where alpha is set;
/// t_th holds the per-device latency thresholds of the epigraph form.
struct Decision {
  OffloadMask alpha;
  Eigen::VectorXd p;
  Eigen::VectorXd f;
  Eigen::VectorXd t_th;

  static Decision all_local(const Scenario& s, double power = 0.0);
  Eigen::Index num_offloading() const { return alpha.count(); }

  /// Throws DomainError if the power box, the compute budget or f > 0 on
  /// offloaders is violated. Tolerances are relative, 1e-12.
  void validate(const Scenario& s) const;
};

struct LatencyBreakdown {
  double t_loc = 0.0;
  double t_tra = 0.0;
  double t_off = 0.0;
  double t_tot = 0.0;
  double sr_lb = 0.0;
  double r_rcd = 0.0;
  double r_eve_ub = 0.0;
};

/// log2(1 + signal / (interference + noise)).
template <typename Scalar>
Scalar link_rate(Scalar signal, Scalar interference, Scalar noise) {
  using std::log2;
  return log2(Scalar(1) + signal / (interference + noise));
}

/// sum_{j != k} gain_j p_j, summed in index order.
template <typename DerivedG, typename DerivedP>
typename DerivedP::Scalar interference_except(const Eigen::MatrixBase<DerivedG>& gain,
                                              const Eigen::MatrixBase<DerivedP>& p, Eigen::Index k) {
  typename DerivedP::Scalar acc(0);
  for (Eigen::Index j = 0; j < p.size(); ++j)
    if (j != k) acc += gain[j] * p[j];
  return acc;
}

/// Rate at the edge server; every other device interferes.
template <typename Derived>
typename Derived::Scalar rcd_rate(const Scenario& s, const Eigen::MatrixBase<Derived>& p, Eigen::Index k) {
  using Scalar = typename Derived::Scalar;
  const Eigen::VectorXd& h = s.h;
  return link_rate<Scalar>(p[k] * h[k], interference_except(h, p, k), Scalar(s.constants.noise_power_w));
}

/// Eavesdropper rate for a given realization of its channel gains.
template <typename Derived, typename DerivedG>
typename Derived::Scalar eve_rate(const Scenario& s, const Eigen::MatrixBase<Derived>& p,
                                  const Eigen::MatrixBase<DerivedG>& g, Eigen::Index k) {
  using Scalar = typename Derived::Scalar;
  return link_rate<Scalar>(p[k] * g[k], interference_except(g, p, k), Scalar(s.constants.noise_power_w));
}

/// Upper bound on the eavesdropper rate over the uncertainty set: own link at
/// g_est + eps, jammers at max(g_est - eps, 0).
template <typename Derived>
typename Derived::Scalar eve_rate_ub(const Scenario& s, const Eigen::MatrixBase<Derived>& p, Eigen::Index k) {
  using Scalar = typename Derived::Scalar;
  const Eigen::VectorXd g_minus = s.g_minus();
  const double g_plus_k = s.g_est[k] + s.eps[k];
  return link_rate<Scalar>(p[k] * g_plus_k, interference_except(g_minus, p, k), Scalar(s.constants.noise_power_w));
}

template <typename Derived>
typename Derived::Scalar secrecy_rate_lb(const Scenario& s, const Eigen::MatrixBase<Derived>& p, Eigen::Index k) {
  using std::max;
  using Scalar = typename Derived::Scalar;
  return max(Scalar(0), rcd_rate(s, p, k) - eve_rate_ub(s, p, k));
}

/// Secrecy rate against a known eavesdropper channel realization g.
template <typename Derived, typename DerivedG>
typename Derived::Scalar secrecy_rate(const Scenario& s, const Eigen::MatrixBase<Derived>& p,
                                      const Eigen::MatrixBase<DerivedG>& g, Eigen::Index k) {
  using std::max;
  using Scalar = typename Derived::Scalar;
  return max(Scalar(0), rcd_rate(s, p, k) - eve_rate(s, p, g, k));
}

Eigen::VectorXd secrecy_rates_lb(const Scenario& s, const Eigen::Ref<const Eigen::VectorXd>& p);

double local_latency(double d_bits, double cycles_per_bit, double local_cpu_hz);

/// d / (B * rate), +inf when the rate is zero.
inline double transmission_latency(double d_bits, double bandwidth_hz, double rate) {
  return rate > 0.0 ? d_bits / (bandwidth_hz * rate) : kInfiniteLatency;
}

/// Worst-case latency terms of device k under the decision.
LatencyBreakdown total_latency(const Scenario& s, const Decision& decision, Eigen::Index k);
std::vector<LatencyBreakdown> latency_breakdown(const Scenario& s, const Decision& decision);

/// Sum of worst-case per-device latencies.
double objective(const Scenario& s, const Decision& decision);

/// Sum of latencies when the eavesdropper gains are exactly g (no uncertainty).
double objective_at(const Scenario& s, const Decision& decision, const Eigen::Ref<const Eigen::VectorXd>& g);

/// Sets t_th to the tight worst-case latency of every device.
void tighten_thresholds(const Scenario& s, Decision& decision);

}  // namespace plsoff
