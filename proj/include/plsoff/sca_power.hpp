#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "plsoff/errors.hpp"
#include "plsoff/scenario.hpp"
#include "plsoff/system_model.hpp"

namespace plsoff {

/// Settings of the successive convex approximation and of the inner
/// log-barrier Newton method.
struct ScaSettings {
  int max_sca_iters = 50;
  /// Relative change of the transmission part of the surrogate objective.
  double sca_tol = 1e-6;
  double barrier_mu = 10.0;
  /// Initial barrier weight, in units of (barrier terms / slack objective).
  double barrier_t0 = 1.0;
  /// Stop when the duality gap bound falls below this fraction of the slack objective.
  double barrier_gap = 1e-8;
  /// Exit tolerance on half the squared Newton decrement.
  double newton_tol = 1e-8;
  int newton_max_steps = 100;
  /// Lower bound on t_k - T_k^Off inside the barrier, seconds.
  double threshold_margin = 1e-9;

  void validate() const;
};

// Difference-of-concave pieces of the robust secrecy rate, all in bits/s/Hz:
//   R_RCD = I(p) - J_k(p),  R_EVE_UB = S_k(p) - W_k(p).
double total_received_term(const Scenario& s, const Eigen::Ref<const Eigen::VectorXd>& p);  // I
double interference_term(const Scenario& s, const Eigen::Ref<const Eigen::VectorXd>& p, Eigen::Index k);  // J_k
double eve_received_term(const Scenario& s, const Eigen::Ref<const Eigen::VectorXd>& p, Eigen::Index k);  // S_k
double eve_jamming_term(const Scenario& s, const Eigen::Ref<const Eigen::VectorXd>& p, Eigen::Index k);   // W_k

/// First-order expansions of J_k and S_k at an anchor. Both are concave, so
/// the affine expansions over-estimate them everywhere and touch at the anchor.
struct SurrogatePoint {
  Eigen::VectorXd p_anchor;
  Eigen::VectorXd j_value;
  Eigen::MatrixXd j_grad;  // row k: gradient of the J_k expansion
  Eigen::VectorXd s_value;
  Eigen::MatrixXd s_grad;

  double j_hat(Eigen::Index k, const Eigen::Ref<const Eigen::VectorXd>& p) const {
    return j_value[k] + j_grad.row(k).dot(p - p_anchor);
  }
  double s_hat(Eigen::Index k, const Eigen::Ref<const Eigen::VectorXd>& p) const {
    return s_value[k] + s_grad.row(k).dot(p - p_anchor);
  }
};

SurrogatePoint linearize(const Scenario& s, const Eigen::Ref<const Eigen::VectorXd>& p_anchor);

/// Concave under-estimator of R_RCD - R_EVE_UB (no [x]+ clamp).
double surrogate_rate(const Scenario& s, const SurrogatePoint& sp, const Eigen::Ref<const Eigen::VectorXd>& p,
                      Eigen::Index k);

struct ScaTraceRow {
  int iter = 0;
  double objective = 0.0;         // sum of t_th at the surrogate optimum, seconds
  double max_kkt_residual = 0.0;  // half squared Newton decrement over tau at exit (seconds)
  int newton_steps = 0;
};

class SolverStallError : public Error {
 public:
  SolverStallError(const std::string& what, std::vector<ScaTraceRow> trace)
      : Error(what), trace_(std::move(trace)) {}
  const std::vector<ScaTraceRow>& trace() const noexcept { return trace_; }

 private:
  std::vector<ScaTraceRow> trace_;
};

struct Sp1Result {
  Eigen::VectorXd p;
  /// Tight worst-case thresholds: T_off + d / (B SR_LB) for offloaders, T_loc otherwise.
  Eigen::VectorXd t_th;
  std::vector<ScaTraceRow> trace;
  bool converged = false;
};

/// Transmit-power step of the alternating scheme. alpha and f are held fixed;
/// every device's power is optimized (offloaders transmit, the rest jam).
/// Throws InfeasibleStartError or SolverStallError.
Sp1Result solve_sp1(const Scenario& s, const OffloadMask& alpha, const Eigen::Ref<const Eigen::VectorXd>& f,
                    const Eigen::Ref<const Eigen::VectorXd>& p_init, const ScaSettings& settings = {});

/// CSV with header `iter,objective,max_kkt_residual`.
std::string trace_csv(std::span<const ScaTraceRow> rows);

}  // namespace plsoff
