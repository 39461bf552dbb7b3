#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "oracles.hpp"
#include "plsoff/ao_driver.hpp"
#include "plsoff/baselines.hpp"
#include "support.hpp"

using namespace plsoff;
using testing_support::manual;
using testing_support::vec;

namespace {

double all_local_latency(const Scenario& s) {
  double sum = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    sum += s.d_bits[k] * s.cycles_per_bit[k] / s.constants.local_cpu_hz;
  return sum;
}

}  // namespace

TEST_CASE("single device matches a golden-section search over its power") {
  for (double g : {0.0, 2e-11}) {
    Scenario s = manual(vec({1e-10}), vec({g}), vec({0.1 * g}), 1e-14);
    const SolveReport r = solve(s);
    REQUIRE(r.converged);
    CHECK(r.final_decision.alpha[0]);

    const std::vector<bool> alpha{true};
    const Eigen::VectorXd f = oracle::sqrt_split(s, alpha);
    const auto latency = [&](double p) { return oracle::total_latency(s, alpha, vec({p}), f); };
    const double p_max = s.constants.p_max_w;
    const double best_p = oracle::golden_section(latency, 1e-6 * p_max, p_max);
    const double best = std::min(latency(best_p), latency(p_max));
    CHECK(r.objective == doctest::Approx(best).epsilon(1e-6));
    CHECK(r.objective < all_local_latency(s));
  }
}

TEST_CASE("tiny edge capacity keeps every device local") {
  ScenarioConfig c;
  c.constants.edge_cpu_hz = 1e3;
  const Scenario s = generate(c, 7);
  const SolveReport r = solve(s);
  CHECK_FALSE(r.final_decision.alpha.any());
  CHECK(r.objective == doctest::Approx(all_local_latency(s)).epsilon(1e-12));
}

TEST_CASE("initial point is feasible with half power") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Scenario s = generate(ScenarioConfig{}, seed);
    const Decision d = initialize(s);
    CHECK_NOTHROW(d.validate(s));
    CHECK((d.p.array() == 0.5 * s.constants.p_max_w).all());
    for (Eigen::Index k = 0; k < s.size(); ++k)
      if (d.alpha[k]) CHECK(secrecy_rate_lb(s, d.p, k) > 0.0);
    CHECK(std::isfinite(objective(s, d)));
  }
}

TEST_CASE("eavesdropper at the edge server blocks offloading") {
  Scenario s = generate(ScenarioConfig{}, 11);
  s.g_est = s.h;
  s.eps = 0.1 * s.h;
  CHECK_FALSE(initialize(s).alpha.any());
  const SolveReport r = solve(s);
  CHECK_FALSE(r.final_decision.alpha.any());
  CHECK(r.objective == doctest::Approx(all_local_latency(s)).epsilon(1e-12));
}

TEST_CASE("objective trace is non-increasing and ends at the reported objective") {
  const Scenario s = generate(ScenarioConfig{}, 42);
  const SolveReport r = solve(s);
  REQUIRE(r.converged);
  REQUIRE(r.objective_trace.size() == static_cast<std::size_t>(r.ao_iters) + 1);
  CHECK(r.objective_trace.front() >= r.objective);
  for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
    CHECK(r.objective_trace[i] <= r.objective_trace[i - 1] + 1e-9);
  CHECK(r.objective == r.objective_trace.back());
  CHECK_NOTHROW(r.final_decision.validate(s));
  CHECK(r.objective == doctest::Approx(objective(s, r.final_decision)).epsilon(1e-12));
}

TEST_CASE("final decision matches the independent latency oracle") {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const Scenario s = generate(ScenarioConfig{}, seed);
    const SolveReport r = solve(s);
    const Decision& d = r.final_decision;
    const std::vector<bool> alpha(d.alpha.begin(), d.alpha.end());
    CHECK(r.objective == doctest::Approx(oracle::total_latency(s, alpha, d.p, d.f)).epsilon(1e-12));
  }
}

TEST_CASE("solve is deterministic") {
  const Scenario s = generate(ScenarioConfig{}, 42);
  const SolveReport a = solve(s);
  const SolveReport b = solve(s);
  CHECK(format_report(a) == format_report(b));
  CHECK(objective_trace_csv(a) == objective_trace_csv(b));
  CHECK(sca_trace_csv(a) == sca_trace_csv(b));
}

TEST_CASE("report formats") {
  const SolveReport r = solve(generate(ScenarioConfig{}, 42));
  const std::string text = format_report(r);
  CHECK(text.rfind("scheme = PROPOSED\n", 0) == 0);
  CHECK(text.find("device,alpha,p_w,f_hz,t_th_s,t_loc_s,t_tra_s,t_off_s,t_tot_s,sr_lb\n") != std::string::npos);
  CHECK(objective_trace_csv(r).rfind("iter,objective\n0,", 0) == 0);
  CHECK(sca_trace_csv(r).rfind("iter,objective,max_kkt_residual\n", 0) == 0);
}

TEST_CASE("settings validation") {
  AoSettings bad;
  bad.max_ao_iters = 0;
  CHECK_THROWS_AS(solve(generate(ScenarioConfig{}, 1), bad), InvalidConfigError);
  AoSettings negative;
  negative.fixed_power = -1.0;
  CHECK_THROWS_AS(negative.validate(), InvalidConfigError);
}

TEST_CASE("iteration cap raises with the partial report") {
  AoSettings one;
  one.max_ao_iters = 1;
  bool raised = false;
  for (std::uint64_t seed = 0; seed < 20 && !raised; ++seed) {
    try {
      solve(generate(ScenarioConfig{}, seed), one);
    } catch (const NonConvergenceError& e) {
      raised = true;
      CHECK(e.report().ao_iters == 1);
      CHECK(e.report().objective_trace.size() == 2);
    }
  }
  CHECK(raised);
}

TEST_CASE("time per SCA iterate grows no faster than K^4") {
  std::vector<double> log_k, log_t;
  for (int k : {4, 8, 16, 32}) {
    ScenarioConfig c;
    c.num_devices = k;
    double time = 0.0;
    int iters = 0;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const SolveReport r = solve(generate(c, 300 + seed));
      time += r.wall_time_s;
      iters += r.sca_iters_total;
    }
    REQUIRE(iters > 0);
    log_k.push_back(std::log(static_cast<double>(k)));
    log_t.push_back(std::log(time / iters));
  }
  const double mk = std::accumulate(log_k.begin(), log_k.end(), 0.0) / 4.0;
  const double mt = std::accumulate(log_t.begin(), log_t.end(), 0.0) / 4.0;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    num += (log_k[i] - mk) * (log_t[i] - mt);
    den += (log_k[i] - mk) * (log_k[i] - mk);
  }
  MESSAGE("log-log slope " << num / den);
  CHECK(num / den <= 4.0);
}
