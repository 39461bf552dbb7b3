#include "plsoff/sca_power.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include <Eigen/Cholesky>

#include "plsoff/keyvalue.hpp"

namespace plsoff {
namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kInteriorFraction = 1e-9;
constexpr double kStartSlack = 1.05;
constexpr double kMinAnchorRate = 1e-12;
constexpr int kLadderSteps = 10;
constexpr double kExtrapolationFloor = 1e-20;
constexpr double kMaxExtrapolation = 0x1p40;
// Squared steps shorter than this (a = -1 is the plain iterate) are not tried.
constexpr double kMinSquaredStep = 1.01;
constexpr double kWarmSlack = 1e-3;
constexpr int kPlateauWindow = 5;
constexpr double kPlateauResidual = 1e-5;

// Barrier reformulation of the convexified power problem over x = [p; u],
// u_i = t_i - T_i^Off for the i-th offloader:
//   minimize  tau * sum(u) - sum log(phi_i(p) - c_i / u_i) - sum log(u_i - margin)
//             - sum log(p) - sum log(p_max - p)
// with phi_i the surrogate secrecy rate and c_i = d_i / B. phi_i is evaluated
// as its anchor value plus log1p increments so the slack keeps its precision
// when phi_i and c_i / u_i nearly cancel.
class SurrogateBarrier {
 public:
  SurrogateBarrier(const Scenario& s, const SurrogatePoint& sp, const std::vector<Eigen::Index>& offloaders,
                   double margin)
      : h_(s.h),
        g_minus_(s.g_minus()),
        anchor_(sp.p_anchor),
        noise_(s.constants.noise_power_w),
        p_max_(s.constants.p_max_w),
        margin_(margin),
        devices_(offloaders),
        dim_p_(s.size()),
        n_(static_cast<Eigen::Index>(offloaders.size())) {
    c_.resize(n_);
    a_.resize(n_, dim_p_);
    phi_anchor_.resize(n_);
    jam_anchor_.resize(n_);
    total_anchor_ = h_.dot(anchor_) + noise_;
    for (Eigen::Index i = 0; i < n_; ++i) {
      const Eigen::Index k = devices_[static_cast<std::size_t>(i)];
      c_[i] = s.d_bits[k] / s.constants.bandwidth_hz;
      a_.row(i) = sp.j_grad.row(k) + sp.s_grad.row(k);
      phi_anchor_[i] = rcd_rate(s, anchor_, k) - eve_rate_ub(s, anchor_, k);
      jam_anchor_[i] = interference_except(g_minus_, anchor_, k) + noise_;
    }
  }

  Eigen::Index dim() const { return dim_p_ + n_; }
  Eigen::Index num_barrier_terms() const { return 2 * dim_p_ + 2 * n_; }
  const Eigen::VectorXd& c() const { return c_; }
  double phi_at_anchor(Eigen::Index i) const { return phi_anchor_[i]; }

  /// +inf outside the domain.
  double value(const Eigen::VectorXd& x, double tau) const {
    const auto p = x.head(dim_p_);
    const auto u = x.tail(n_);
    if ((p.array() <= 0.0).any() || (p.array() >= p_max_).any() || (u.array() <= margin_).any())
      return std::numeric_limits<double>::infinity();
    double f = tau * u.sum() - p.array().log().sum() - (p_max_ - p.array()).log().sum() -
               (u.array() - margin_).log().sum();
    const Eigen::VectorXd dp = p - anchor_;
    const double total_step = std::log1p(h_.dot(dp) / total_anchor_) / kLn2;
    for (Eigen::Index i = 0; i < n_; ++i) {
      const double slack = phi(i, dp, total_step) - c_[i] / u[i];
      if (!(slack > 0.0)) return std::numeric_limits<double>::infinity();
      f -= std::log(slack);
    }
    return f;
  }

  /// F(x + t dx) - F(x), accumulated term by term so that small changes
  /// survive when F itself is large. +inf if x + t dx leaves the domain.
  double change(const Eigen::VectorXd& x, const Eigen::VectorXd& dx, double t, double tau) const {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    const auto p = x.head(dim_p_);
    const auto u = x.tail(n_);
    double delta = tau * t * dx.tail(n_).sum();
    for (Eigen::Index j = 0; j < dim_p_; ++j) {
      const double step = t * dx[j];
      const double lo = step / p[j];
      const double hi = -step / (p_max_ - p[j]);
      if (!(lo > -1.0) || !(hi > -1.0)) return kInf;
      delta -= std::log1p(lo) + std::log1p(hi);
    }
    const Eigen::VectorXd dp = t * dx.head(dim_p_);
    const double x_total = h_.dot(p) + noise_;
    const double total_ratio = h_.dot(dp) / x_total;
    if (!(total_ratio > -1.0)) return kInf;
    const double total_change = std::log1p(total_ratio) / kLn2;
    const Eigen::VectorXd p_anchor_offset = p - anchor_;
    const double total_step = std::log1p(h_.dot(p_anchor_offset) / total_anchor_) / kLn2;
    for (Eigen::Index i = 0; i < n_; ++i) {
      const Eigen::Index k = devices_[static_cast<std::size_t>(i)];
      const double du = t * dx[dim_p_ + i];
      const double um = u[i] - margin_;
      if (!(du / um > -1.0)) return kInf;
      delta -= std::log1p(du / um);
      const double u_new = u[i] + du;
      const double x_jam = g_minus_.dot(p) - g_minus_[k] * p[k] + noise_;
      const double jam_ratio = (g_minus_.dot(dp) - g_minus_[k] * dp[k]) / x_jam;
      if (!(jam_ratio > -1.0)) return kInf;
      const double slack = phi(i, p_anchor_offset, total_step) - c_[i] / u[i];
      const double slack_change =
          total_change + std::log1p(jam_ratio) / kLn2 - a_.row(i).dot(dp) + c_[i] * du / (u[i] * u_new);
      if (!(slack > 0.0) || !(slack_change / slack > -1.0)) return kInf;
      delta -= std::log1p(slack_change / slack);
    }
    return delta;
  }

  void derivatives(const Eigen::VectorXd& x, double tau, Eigen::VectorXd& grad, Eigen::MatrixXd& hess) const {
    const auto p = x.head(dim_p_);
    const auto u = x.tail(n_);
    grad.setZero(dim());
    hess.setZero(dim(), dim());

    const Eigen::ArrayXd lo = p.array();
    const Eigen::ArrayXd hi = p_max_ - p.array();
    grad.head(dim_p_) = (-1.0 / lo + 1.0 / hi).matrix();
    hess.topLeftCorner(dim_p_, dim_p_).diagonal() = (1.0 / lo.square() + 1.0 / hi.square()).matrix();
    const Eigen::ArrayXd um = u.array() - margin_;
    grad.tail(n_) = (tau - 1.0 / um).matrix();
    hess.bottomRightCorner(n_, n_).diagonal() = (1.0 / um.square()).matrix();

    const Eigen::VectorXd dp = p - anchor_;
    const double total_step = std::log1p(h_.dot(dp) / total_anchor_) / kLn2;
    const double x_total = h_.dot(p) + noise_;
    const Eigen::VectorXd grad_total = h_ / (kLn2 * x_total);
    double total_curvature = 0.0;  // sum_i 1/s_i, weight of the shared h h^T term
    Eigen::VectorXd v(dim_p_);
    Eigen::VectorXd g_phi(dim_p_);
    for (Eigen::Index i = 0; i < n_; ++i) {
      const Eigen::Index k = devices_[static_cast<std::size_t>(i)];
      v = g_minus_;
      v[k] = 0.0;
      const double x_jam = v.dot(p) + noise_;
      const double slack = phi(i, dp, total_step) - c_[i] / u[i];
      const double ds_du = c_[i] / (u[i] * u[i]);
      g_phi = grad_total + v / (kLn2 * x_jam) - a_.row(i).transpose();

      const double inv_s = 1.0 / slack;
      const double inv_s2 = inv_s * inv_s;
      const Eigen::Index ui = dim_p_ + i;
      grad.head(dim_p_) -= g_phi * inv_s;
      grad[ui] -= ds_du * inv_s;

      auto hpp = hess.topLeftCorner(dim_p_, dim_p_);
      hpp.noalias() += inv_s2 * g_phi * g_phi.transpose();
      hpp.noalias() += (inv_s / (kLn2 * x_jam * x_jam)) * v * v.transpose();
      hess.col(ui).head(dim_p_) += inv_s2 * ds_du * g_phi;
      hess.row(ui).head(dim_p_) += inv_s2 * ds_du * g_phi.transpose();
      hess(ui, ui) += ds_du * ds_du * inv_s2 + 2.0 * c_[i] / (u[i] * u[i] * u[i]) * inv_s;
      total_curvature += inv_s;
    }
    hess.topLeftCorner(dim_p_, dim_p_).noalias() +=
        (total_curvature / (kLn2 * x_total * x_total)) * h_ * h_.transpose();
  }

 private:
  double phi(Eigen::Index i, const Eigen::VectorXd& dp, double total_step) const {
    const Eigen::Index k = devices_[static_cast<std::size_t>(i)];
    const double jam_delta = g_minus_.dot(dp) - g_minus_[k] * dp[k];
    return phi_anchor_[i] + total_step + std::log1p(jam_delta / jam_anchor_[i]) / kLn2 - a_.row(i).dot(dp);
  }

  const Eigen::VectorXd& h_;
  Eigen::VectorXd g_minus_;
  Eigen::VectorXd anchor_;
  double noise_;
  double p_max_;
  double margin_;
  std::vector<Eigen::Index> devices_;
  Eigen::Index dim_p_;
  Eigen::Index n_;
  Eigen::VectorXd c_;
  Eigen::MatrixXd a_;
  Eigen::VectorXd phi_anchor_;
  Eigen::VectorXd jam_anchor_;
  double total_anchor_ = 0.0;
};

struct CenteringResult {
  int steps = 0;
  double residual = 0.0;
};

// Damped Newton on the barrier function at fixed tau, with a diagonal
// equilibration of the Newton system.
CenteringResult center(const SurrogateBarrier& fn, Eigen::VectorXd& x, double tau, const ScaSettings& settings,
                       bool lenient, const std::vector<ScaTraceRow>& trace) {
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  CenteringResult out;
  std::array<double, kPlateauWindow> history{};
  // In lenient mode a stuck point is also kept when its objective error,
  // about residual / tau, is already within the final barrier gap.
  const auto negligible = [&] {
    return out.residual <= kPlateauResidual ||
           (lenient && out.residual / tau <= settings.barrier_gap * x.tail(fn.c().size()).sum());
  };
  for (int step = 0; step < settings.newton_max_steps; ++step) {
    fn.derivatives(x, tau, grad, hess);
    const Eigen::VectorXd scale = hess.diagonal().cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd scaled = scale.asDiagonal() * hess * scale.asDiagonal();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(scaled);
    Eigen::VectorXd dx = scale.asDiagonal() * ldlt.solve(-(scale.asDiagonal() * grad));
    double lambda2 = -grad.dot(dx);
    if (ldlt.info() != Eigen::Success || !dx.allFinite() || !(lambda2 > 0.0)) {
      // Indefinite due to roundoff; fall back to a scaled gradient step.
      dx = -(scale.array().square() * grad.array()).matrix();
      lambda2 = -grad.dot(dx);
    }
    out.residual = 0.5 * lambda2;
    out.steps = step;
    if (out.residual <= settings.newton_tol) return out;
    // Once the decrement is small, a stalled decrease means the roundoff floor
    // of the barrier has been reached; the objective error is about residual / tau.
    if (step >= kPlateauWindow && out.residual <= kPlateauResidual &&
        out.residual > 0.5 * history[static_cast<std::size_t>(step - kPlateauWindow) % kPlateauWindow])
      return out;
    history[static_cast<std::size_t>(step) % kPlateauWindow] = out.residual;

    const double slope = grad.dot(dx);
    double t = 1.0;
    bool accepted = false;
    while (t > 1e-20) {
      if (fn.change(x, dx, t, tau) <= 0.25 * t * slope) {
        x += t * dx;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (negligible()) return out;
      throw SolverStallError("barrier Newton line search failed (residual " + kv::format_double(out.residual) + ")",
                             trace);
    }
  }
  out.steps = settings.newton_max_steps;
  if (negligible()) return out;
  throw SolverStallError("barrier Newton hit the step cap (residual " + kv::format_double(out.residual) + ")", trace);
}

Eigen::VectorXd interior(const Eigen::Ref<const Eigen::VectorXd>& p, double p_max) {
  return p.cwiseMax(kInteriorFraction * p_max).cwiseMin((1.0 - kInteriorFraction) * p_max);
}

// Unclamped worst-case secrecy rate; equals the surrogate rate at its anchor.
double robust_rate_gap(const Scenario& s, const Eigen::Ref<const Eigen::VectorXd>& p, Eigen::Index k) {
  return rcd_rate(s, p, k) - eve_rate_ub(s, p, k);
}

std::vector<int> nonpositive_offloaders(const Scenario& s, const Eigen::VectorXd& p,
                                        const std::vector<Eigen::Index>& off) {
  std::vector<int> bad;
  for (Eigen::Index k : off)
    if (!(robust_rate_gap(s, p, k) > kMinAnchorRate)) bad.push_back(static_cast<int>(k));
  return bad;
}

}  // namespace

void ScaSettings::validate() const {
  if (max_sca_iters < 1 || !(sca_tol > 0.0) || !(barrier_mu > 1.0) || !(barrier_t0 > 0.0) || !(barrier_gap > 0.0) ||
      !(newton_tol > 0.0) || newton_max_steps < 1 || !(threshold_margin > 0.0))
    throw InvalidConfigError("SCA settings must be positive with barrier_mu > 1");
}

double total_received_term(const Scenario& s, const Eigen::Ref<const Eigen::VectorXd>& p) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < p.size(); ++j) acc += p[j] * s.h[j];
  return std::log2(acc + s.constants.noise_power_w);
}

double interference_term(const Scenario& s, const Eigen::Ref<const Eigen::VectorXd>& p, Eigen::Index k) {
  return std::log2(interference_except(s.h, p, k) + s.constants.noise_power_w);
}

double eve_received_term(const Scenario& s, const Eigen::Ref<const Eigen::VectorXd>& p, Eigen::Index k) {
  const Eigen::VectorXd gm = s.g_minus();
  return std::log2(p[k] * (s.g_est[k] + s.eps[k]) + interference_except(gm, p, k) + s.constants.noise_power_w);
}

double eve_jamming_term(const Scenario& s, const Eigen::Ref<const Eigen::VectorXd>& p, Eigen::Index k) {
  const Eigen::VectorXd gm = s.g_minus();
  return std::log2(interference_except(gm, p, k) + s.constants.noise_power_w);
}

SurrogatePoint linearize(const Scenario& s, const Eigen::Ref<const Eigen::VectorXd>& p_anchor) {
  const Eigen::Index n = s.size();
  const double noise = s.constants.noise_power_w;
  const Eigen::VectorXd gm = s.g_minus();
  const Eigen::VectorXd gp = s.g_plus();

  SurrogatePoint sp;
  sp.p_anchor = p_anchor;
  sp.j_value.resize(n);
  sp.s_value.resize(n);
  sp.j_grad.resize(n, n);
  sp.s_grad.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double x_j = interference_except(s.h, p_anchor, k) + noise;
    sp.j_value[k] = std::log2(x_j);
    sp.j_grad.row(k) = s.h.transpose() / (kLn2 * x_j);
    sp.j_grad(k, k) = 0.0;

    const double x_s = p_anchor[k] * gp[k] + interference_except(gm, p_anchor, k) + noise;
    sp.s_value[k] = std::log2(x_s);
    sp.s_grad.row(k) = gm.transpose() / (kLn2 * x_s);
    sp.s_grad(k, k) = gp[k] / (kLn2 * x_s);
  }
  return sp;
}

double surrogate_rate(const Scenario& s, const SurrogatePoint& sp, const Eigen::Ref<const Eigen::VectorXd>& p,
                      Eigen::Index k) {
  return total_received_term(s, p) - sp.j_hat(k, p) - sp.s_hat(k, p) + eve_jamming_term(s, p, k);
}

Sp1Result solve_sp1(const Scenario& s, const OffloadMask& alpha, const Eigen::Ref<const Eigen::VectorXd>& f,
                    const Eigen::Ref<const Eigen::VectorXd>& p_init, const ScaSettings& settings) {
  settings.validate();
  const Eigen::Index n = s.size();
  const auto& consts = s.constants;
  const double p_max = consts.p_max_w;

  std::vector<Eigen::Index> off;
  for (Eigen::Index k = 0; k < n; ++k)
    if (alpha[k]) off.push_back(k);

  Eigen::VectorXd t_loc(n);
  Eigen::VectorXd t_edge = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    t_loc[k] = local_latency(s.d_bits[k], s.cycles_per_bit[k], consts.local_cpu_hz);
    if (alpha[k]) {
      if (!(f[k] > 0.0)) throw DomainError("offloading device " + std::to_string(k) + " has no compute allocation");
      t_edge[k] = s.d_bits[k] * s.cycles_per_bit[k] / f[k];
    }
  }

  Sp1Result result;
  if (off.empty()) {
    result.p = p_init;
    result.t_th = t_loc;
    result.converged = true;
    return result;
  }

  // Feasible start: the given powers; the given powers with some offloaders
  // turned down step by step (those with a positive rate, those without, or
  // all); then full power for offloaders with a descending ladder for the
  // jammers. The last ladder is tried with every jammer on, then with only the
  // m jammers that reach the eavesdropper best relative to the edge server.
  Eigen::VectorXd p = interior(p_init, p_max);
  std::vector<int> offenders = nonpositive_offloaders(s, p, off);
  if (!offenders.empty()) {
    OffloadMask failing = OffloadMask::Constant(n, false);
    for (int k : offenders) failing[k] = true;
    const std::array<OffloadMask, 3> groups{alpha && !failing, failing, alpha};
    for (const OffloadMask& group : groups) {
      if (!group.any() || offenders.empty()) continue;
      for (int step = 1; step <= 2 * kLadderSteps; ++step) {
        const double scale = std::pow(10.0, -0.5 * step);
        const Eigen::VectorXd trial = interior(group.select(scale * p, p), p_max);
        if (nonpositive_offloaders(s, trial, off).empty()) {
          p = trial;
          offenders.clear();
          break;
        }
      }
    }
  }
  if (!offenders.empty()) {
    const Eigen::VectorXd g_minus = s.g_minus();
    std::vector<Eigen::Index> jammers;
    for (Eigen::Index j = 0; j < n; ++j)
      if (!alpha[j]) jammers.push_back(j);
    std::stable_sort(jammers.begin(), jammers.end(), [&](Eigen::Index a, Eigen::Index b) {
      return g_minus[a] * s.h[b] > g_minus[b] * s.h[a];
    });
    bool found = false;
    for (std::size_t m = jammers.size(); m-- > 0 && !found;) {
      Eigen::VectorXd on = Eigen::VectorXd::Zero(n);
      for (std::size_t i = 0; i <= m; ++i) on[jammers[i]] = 1.0;
      for (int step = 0; step < kLadderSteps && !found; ++step) {
        const double jam = p_max * std::pow(10.0, -0.5 * step);
        Eigen::VectorXd trial = alpha.select(Eigen::VectorXd::Constant(n, p_max), jam * on);
        trial = interior(trial, p_max);
        auto bad = nonpositive_offloaders(s, trial, off);
        if (bad.empty()) {
          p = trial;
          found = true;
        } else if (bad.size() < offenders.size()) {
          offenders = std::move(bad);
        }
      }
    }
    if (!found && jammers.empty()) {
      const Eigen::VectorXd trial = interior(Eigen::VectorXd::Constant(n, p_max), p_max);
      if (nonpositive_offloaders(s, trial, off).empty()) {
        p = trial;
        found = true;
      }
    }
    if (!found) throw InfeasibleStartError(offenders);
  }

  const Eigen::Index n_off = static_cast<Eigen::Index>(off.size());
  // Sum of d / (B SR) over the offloaders, +inf if any secrecy rate vanishes.
  const auto tight_sum = [&](const Eigen::VectorXd& powers) {
    double sum = 0.0;
    for (Eigen::Index k : off) sum += transmission_latency(s.d_bits[k], consts.bandwidth_hz, secrecy_rate_lb(s, powers, k));
    return sum;
  };
  double previous_tight = std::numeric_limits<double>::infinity();
  std::optional<Eigen::VectorXd> previous_anchor;
  double final_tau = 0.0;
  Eigen::VectorXd previous_u;
  for (int r = 0; r < settings.max_sca_iters; ++r) {
    const SurrogatePoint sp = linearize(s, p);
    const SurrogateBarrier fn(s, sp, off, settings.threshold_margin);

    Eigen::VectorXd x(fn.dim());
    x.head(n) = p;
    for (Eigen::Index i = 0; i < n_off; ++i) {
      const double rate = fn.phi_at_anchor(i);
      x[n + i] = std::max(kStartSlack * fn.c()[i] / rate, 2.0 * settings.threshold_margin);
    }
    const double m = static_cast<double>(fn.num_barrier_terms());
    const double cold_tau = settings.barrier_t0 * m / x.tail(n_off).sum();
    const auto follow_path = [&](Eigen::VectorXd& z, double tau, bool lenient, int& steps) {
      while (true) {
        const CenteringResult cr = center(fn, z, tau, settings, lenient, result.trace);
        steps += cr.steps;
        if (m / tau <= settings.barrier_gap * z.tail(n_off).sum()) return std::pair{cr, tau};
        tau *= settings.barrier_mu;
      }
    };

    int newton_steps = 0;
    std::optional<std::pair<CenteringResult, double>> outcome;
    // The previous iterate stays strictly feasible for the new surrogate, so
    // the path can resume at the final barrier weight; a stalled warm start
    // falls back to the full path.
    if (r > 0) {
      Eigen::VectorXd warm = x;
      for (Eigen::Index i = 0; i < n_off; ++i)
        warm[n + i] = std::max(previous_u[i], (1.0 + kWarmSlack) * fn.c()[i] / fn.phi_at_anchor(i));
      const double warm_tau = std::max(cold_tau, final_tau);
      if (std::isfinite(fn.value(warm, warm_tau))) {
        try {
          outcome = follow_path(warm, warm_tau, false, newton_steps);
          x = std::move(warm);
        } catch (const SolverStallError&) {
          outcome.reset();
        }
      }
    }
    if (!outcome) outcome = follow_path(x, cold_tau, true, newton_steps);
    const auto [cr, tau] = *outcome;

    const Eigen::VectorXd anchor = p;
    p = x.head(n);
    previous_u = x.tail(n_off);
    final_tau = tau;

    // Any anchor yields a conservative surrogate, so the next anchor may be
    // any point that lowers the true transmission latency. The plain iterate
    // first takes every non-offloader to the power floor if that helps; then a
    // doubling push along the last move in log-power space and a squared
    // extrapolation over the last two plain iterates are tried.
    double tight = tight_sum(p);
    {
      const Eigen::VectorXd silenced = alpha.select(p, Eigen::VectorXd::Constant(n, kExtrapolationFloor * p_max));
      const double value = tight_sum(silenced);
      if (value < tight) {
        p = silenced;
        tight = value;
      }
    }
    Eigen::VectorXd best = p;
    double best_value = tight;
    const auto offer = [&](const Eigen::VectorXd& trial) {
      const double value = tight_sum(trial);
      if (!(value < best_value)) return false;
      best = trial;
      best_value = value;
      return true;
    };
    if (r > 0) {
      const Eigen::ArrayXd x1 = anchor.array().log();
      const Eigen::ArrayXd x2 = p.array().log();
      const auto clamp = [&](const Eigen::ArrayXd& y) {
        return y.exp().max(kExtrapolationFloor * p_max).min((1.0 - kInteriorFraction) * p_max).matrix().eval();
      };
      for (double scale = 2.0; scale <= kMaxExtrapolation; scale *= 2.0)
        if (!offer(clamp(x1 + scale * (x2 - x1)))) break;
      if (previous_anchor) {
        const Eigen::ArrayXd x0 = previous_anchor->array().log();
        const Eigen::ArrayXd step = x1 - x0;
        const Eigen::ArrayXd curve = x2 - 2.0 * x1 + x0;
        const double norm = std::sqrt(curve.square().sum());
        if (norm > 0.0) {
          for (double a = -std::sqrt(step.square().sum()) / norm; a < -kMinSquaredStep; a = 0.5 * (a - 1.0))
            if (offer(clamp(x0 - 2.0 * a * step + a * a * curve))) break;
        }
      }
    }
    if (best_value < tight) {
      p = best;
      tight = best_value;
      previous_anchor.reset();
      for (Eigen::Index i = 0; i < n_off; ++i)
        previous_u[i] = fn.c()[i] / secrecy_rate_lb(s, p, off[static_cast<std::size_t>(i)]);
    } else {
      previous_anchor = anchor;
    }

    double objective = tight;
    for (Eigen::Index k = 0; k < n; ++k) objective += alpha[k] ? t_edge[k] : t_loc[k];
    result.trace.push_back({r, objective, cr.residual / tau, newton_steps});

    if (r > 0 && std::abs(previous_tight - tight) <= settings.sca_tol * previous_tight) {
      result.converged = true;
      break;
    }
    previous_tight = tight;
  }

  result.p = p;
  result.t_th = t_loc;
  for (Eigen::Index k : off)
    result.t_th[k] = t_edge[k] + transmission_latency(s.d_bits[k], consts.bandwidth_hz, secrecy_rate_lb(s, p, k));
  return result;
}

std::string trace_csv(std::span<const ScaTraceRow> rows) {
  std::ostringstream os;
  os << "iter,objective,max_kkt_residual\n";
  for (const auto& r : rows)
    os << r.iter << ',' << kv::format_double(r.objective) << ',' << kv::format_double(r.max_kkt_residual) << '\n';
  return os.str();
}

}  // namespace plsoff
