#pragma once

// Reference implementations used only by the tests. They are written from the
// model formulas with plain loops and share no code with the library beyond
// the Scenario data holder.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Core>

#include "plsoff/scenario.hpp"

namespace oracle {

inline double rate(double signal, double interference, double noise) {
  return std::log2(1.0 + signal / (interference + noise));
}

inline double rcd_rate(const plsoff::Scenario& s, const Eigen::VectorXd& p, Eigen::Index k) {
  double interference = 0.0;
  for (Eigen::Index j = 0; j < p.size(); ++j)
    if (j != k) interference += s.h[j] * p[j];
  return rate(s.h[k] * p[k], interference, s.constants.noise_power_w);
}

/// Eavesdropper rate for an exact channel realization g.
inline double eve_rate(const plsoff::Scenario& s, const Eigen::VectorXd& p, const Eigen::VectorXd& g,
                       Eigen::Index k) {
  double interference = 0.0;
  for (Eigen::Index j = 0; j < p.size(); ++j)
    if (j != k) interference += g[j] * p[j];
  return rate(g[k] * p[k], interference, s.constants.noise_power_w);
}

inline double eve_rate_ub(const plsoff::Scenario& s, const Eigen::VectorXd& p, Eigen::Index k) {
  double interference = 0.0;
  for (Eigen::Index j = 0; j < p.size(); ++j)
    if (j != k) interference += std::max(s.g_est[j] - s.eps[j], 0.0) * p[j];
  return rate((s.g_est[k] + s.eps[k]) * p[k], interference, s.constants.noise_power_w);
}

inline double sr_lb(const plsoff::Scenario& s, const Eigen::VectorXd& p, Eigen::Index k) {
  return std::max(0.0, rcd_rate(s, p, k) - eve_rate_ub(s, p, k));
}

/// Square-root split of the edge capacity over the offloaders.
inline Eigen::VectorXd sqrt_split(const plsoff::Scenario& s, const std::vector<bool>& alpha) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(s.size());
  double denom = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (alpha[static_cast<std::size_t>(k)]) denom += std::sqrt(s.d_bits[k] * s.cycles_per_bit[k]);
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (alpha[static_cast<std::size_t>(k)])
      f[k] = std::sqrt(s.d_bits[k] * s.cycles_per_bit[k]) / denom * s.constants.edge_cpu_hz;
  return f;
}

/// Worst-case total latency of a full decision.
inline double total_latency(const plsoff::Scenario& s, const std::vector<bool>& alpha, const Eigen::VectorXd& p,
                            const Eigen::VectorXd& f) {
  const auto& c = s.constants;
  double sum = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    const double work = s.d_bits[k] * s.cycles_per_bit[k];
    if (!alpha[static_cast<std::size_t>(k)]) {
      sum += work / c.local_cpu_hz;
      continue;
    }
    const double r = sr_lb(s, p, k);
    if (!(r > 0.0)) return std::numeric_limits<double>::infinity();
    sum += s.d_bits[k] / (c.bandwidth_hz * r) + work / f[k];
  }
  return sum;
}

/// Euclidean projection onto {x >= lo, sum x = total} by bisection on the shift.
inline Eigen::VectorXd project_simplex(const Eigen::VectorXd& y, double total, double lo) {
  double a = y.minCoeff() - total, b = y.maxCoeff();
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (a + b);
    const double sum = (y.array() - mid).max(lo).sum();
    (sum > total ? a : b) = mid;
  }
  return (y.array() - 0.5 * (a + b)).max(lo).matrix();
}

/// Minimizes sum w_k / f_k over f >= lo, sum f = total, by projected gradient
/// descent with Armijo backtracking, in units where total = 1.
inline Eigen::VectorXd projected_gradient_split(const Eigen::VectorXd& w, double total, int max_iters = 200000) {
  const Eigen::Index n = w.size();
  const Eigen::VectorXd wn = w / w.maxCoeff();
  const double lo = 1e-9;
  auto value = [&](const Eigen::VectorXd& f) { return (wn.array() / f.array()).sum(); };
  Eigen::VectorXd f = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  double step = 1e-3;
  double v = value(f);
  for (int it = 0; it < max_iters; ++it) {
    const Eigen::VectorXd grad = -(wn.array() / f.array().square()).matrix();
    Eigen::VectorXd next;
    double vn = 0.0;
    step *= 2.0;
    while (true) {
      next = project_simplex(f - step * grad, 1.0, lo);
      vn = value(next);
      if (vn <= v - 1e-4 * grad.dot(f - next) || step < 1e-300) break;
      step *= 0.5;
    }
    const double moved = (next - f).lpNorm<Eigen::Infinity>();
    f = next;
    if (std::abs(v - vn) <= 1e-15 * v && moved < 1e-13) break;
    v = vn;
  }
  return f * total;
}

/// Golden-section minimizer of a unimodal function on [a, b].
inline double golden_section(const std::function<double(double)>& fn, double a, double b, double tol = 1e-14) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = fn(c), fd = fn(d);
  while (b - a > tol * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = fn(d);
    }
  }
  return 0.5 * (a + b);
}

/// Evenly spaced grid over [0, p_max] including both ends.
inline std::vector<double> power_grid(double p_max, int points) {
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = p_max * i / (points - 1);
  return g;
}

/// Exhaustive minimum of the worst-case total latency over every offloading
/// set and a power grid per device, with the square-root compute split.
inline double brute_force_optimum(const plsoff::Scenario& s, int grid_points) {
  const Eigen::Index n = s.size();
  const std::vector<double> grid = power_grid(s.constants.p_max_w, grid_points);
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<bool> alpha(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) alpha[static_cast<std::size_t>(k)] = (mask >> k) & 1u;
    const Eigen::VectorXd f = sqrt_split(s, alpha);
    if (mask == 0) {
      best = std::min(best, total_latency(s, alpha, Eigen::VectorXd::Zero(n), f));
      continue;
    }
    std::fill(idx.begin(), idx.end(), 0);
    Eigen::VectorXd p(n);
    while (true) {
      for (Eigen::Index k = 0; k < n; ++k) p[k] = grid[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
      best = std::min(best, total_latency(s, alpha, p, f));
      Eigen::Index k = 0;
      while (k < n && ++idx[static_cast<std::size_t>(k)] == grid_points) idx[static_cast<std::size_t>(k++)] = 0;
      if (k == n) break;
    }
  }
  return best;
}

}  // namespace oracle
