// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "oracles.hpp"
#include "plsoff/baselines.hpp"
#include "plsoff/catalog.hpp"
#include "plsoff/config.hpp"
#include "plsoff/experiments.hpp"
#include "plsoff/resource_alloc.hpp"
#include "plsoff/sca_power.hpp"

using namespace plsoff;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
  return buf;
}

Eigen::VectorXd log_uniform_powers(SplitMix64& g, Eigen::Index n, double p_max) {
  Eigen::VectorXd p(n);
  for (Eigen::Index j = 0; j < n; ++j) p[j] = p_max * std::pow(10.0, -6.0 * uniform01(g));
  return p;
}

// Concave terms of the rate split, evaluated directly.
double j_term(const Scenario& s, const Eigen::VectorXd& p, Eigen::Index k) {
  double acc = s.constants.noise_power_w;
  for (Eigen::Index j = 0; j < p.size(); ++j)
    if (j != k) acc += s.h[j] * p[j];
  return std::log2(acc);
}

double s_term(const Scenario& s, const Eigen::VectorXd& p, Eigen::Index k) {
  double acc = s.constants.noise_power_w + (s.g_est[k] + s.eps[k]) * p[k];
  for (Eigen::Index j = 0; j < p.size(); ++j)
    if (j != k) acc += std::max(s.g_est[j] - s.eps[j], 0.0) * p[j];
  return std::log2(acc);
}

Outcome compute_split_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  SplitMix64 g(101);
  double worst_obj = 0.0, worst_sum = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    ScenarioConfig c;
    c.num_devices = 8;
    const Scenario s = generate(c, 1000 + static_cast<std::uint64_t>(trial));
    const int count = 1 + static_cast<int>(uniform_index(g, 8));
    OffloadMask alpha = OffloadMask::Constant(8, false);
    for (int i = 0; i < count; ++i) alpha[i] = true;
    const Eigen::VectorXd f = allocate_compute(s, alpha);

    Eigen::VectorXd w(count);
    for (int i = 0; i < count; ++i) w[i] = s.d_bits[i] * s.cycles_per_bit[i];
    const Eigen::VectorXd ref = oracle::projected_gradient_split(w, s.constants.edge_cpu_hz);
    double mine = 0.0, theirs = 0.0;
    for (int i = 0; i < count; ++i) {
      mine += w[i] / f[i];
      theirs += w[i] / ref[i];
    }
    worst_obj = std::max(worst_obj, std::abs(mine - theirs) / theirs);
    worst_sum = std::max(worst_sum, std::abs(f.sum() - s.constants.edge_cpu_hz) / s.constants.edge_cpu_hz);
  }
  const double t = seconds_since(t0);
  return {worst_obj <= 1e-6 && worst_sum <= 1e-12 && t < 5.0,
          fmt("max rel objective err %.2e, max rel sum err %.2e, %.2f s", worst_obj, worst_sum, t)};
}

Outcome surrogate_safety() {
  const auto t0 = std::chrono::steady_clock::now();
  SplitMix64 g(202);
  int violations = 0;
  double worst_anchor = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Scenario s = generate(ScenarioConfig{}, 2000 + static_cast<std::uint64_t>(trial));
    const double p_max = s.constants.p_max_w;
    const Eigen::VectorXd anchor = log_uniform_powers(g, s.size(), p_max);
    const Eigen::VectorXd p = log_uniform_powers(g, s.size(), p_max);
    const SurrogatePoint sp = linearize(s, anchor);
    for (Eigen::Index k = 0; k < s.size(); ++k) {
      const double j = j_term(s, p, k), st = s_term(s, p, k);
      if (sp.j_hat(k, p) < j - 1e-12 * std::abs(j)) ++violations;
      if (sp.s_hat(k, p) < st - 1e-12 * std::abs(st)) ++violations;
      const double ja = j_term(s, anchor, k), sa = s_term(s, anchor, k);
      worst_anchor = std::max(worst_anchor, std::abs(sp.j_hat(k, anchor) - ja) / std::abs(ja));
      worst_anchor = std::max(worst_anchor, std::abs(sp.s_hat(k, anchor) - sa) / std::abs(sa));
      if (surrogate_rate(s, sp, p, k) > oracle::sr_lb(s, p, k) + 1e-12) ++violations;
    }
  }
  const double t = seconds_since(t0);
  return {violations == 0 && worst_anchor <= 1e-12 && t < 10.0,
          fmt("%.0f violations, max rel anchor gap %.2e, %.2f s", violations, worst_anchor, t)};
}

Outcome robustness() {
  const auto t0 = std::chrono::steady_clock::now();
  SplitMix64 g(303);
  long violations = 0, checks = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Scenario s = generate(ScenarioConfig{}, 3000 + static_cast<std::uint64_t>(trial));
    const Eigen::VectorXd p = log_uniform_powers(g, s.size(), s.constants.p_max_w);
    Eigen::VectorXd lb(s.size());
    for (Eigen::Index k = 0; k < s.size(); ++k) lb[k] = oracle::sr_lb(s, p, k);
    for (int draw = 0; draw < 1000; ++draw) {
      Eigen::VectorXd gain(s.size());
      for (Eigen::Index j = 0; j < s.size(); ++j)
        gain[j] = std::max(0.0, s.g_est[j] + s.eps[j] * (2.0 * uniform01(g) - 1.0));
      for (Eigen::Index k = 0; k < s.size(); ++k) {
        const double sr = std::max(0.0, oracle::rcd_rate(s, p, k) - oracle::eve_rate(s, p, gain, k));
        ++checks;
        if (sr < lb[k]) ++violations;
      }
    }
  }
  const double t = seconds_since(t0);
  return {violations == 0 && t < 30.0,
          fmt("%.0f violations in %.0f checks, %.2f s", static_cast<double>(violations), static_cast<double>(checks), t)};
}

Outcome small_instance_gap() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  int failures = 0;
  for (int trial = 0; trial < 50; ++trial) {
    ScenarioConfig c;
    c.num_devices = 3;
    const Scenario s = generate(c, 4000 + static_cast<std::uint64_t>(trial));
    double value = 0.0;
    try {
      value = solve(s).objective;
    } catch (const Error&) {
      ++failures;
      continue;
    }
    worst = std::max(worst, value / oracle::brute_force_optimum(s, 50));
  }
  const double t = seconds_since(t0);
  return {failures == 0 && worst <= 1.05 && t < 600.0,
          fmt("max ratio to grid optimum %.6f, %.0f solver failures, %.1f s", worst, failures, t)};
}

Outcome monotone_convergence() {
  const auto t0 = std::chrono::steady_clock::now();
  int converged = 0, non_monotone = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Scenario s = generate(ScenarioConfig{}, 5000 + static_cast<std::uint64_t>(trial));
    SolveReport r;
    try {
      r = solve(s);
      ++converged;
    } catch (const NonConvergenceError& e) {
      r = e.report();
    } catch (const Error&) {
      continue;
    }
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
      if (r.objective_trace[i] > r.objective_trace[i - 1] + 1e-9) {
        ++non_monotone;
        break;
      }
  }
  const double t = seconds_since(t0);
  return {non_monotone == 0 && converged >= 198,
          fmt("%.0f/200 converged, %.0f non-monotone traces, %.1f s", converged, non_monotone, t)};
}

SweepResult figure_sweep(const char* name) {
  const RunConfig c = load_config(fs::path(PLSOFF_SOURCE_DIR) / "configs" / name);
  return run_sweep(c.sweep_spec());
}

double mean(const SweepResult& r, std::size_t point, SchemeId id) { return r.cell(point, id).mean_latency_s; }

Outcome figure_trends() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> problems;
  int excluded = 0;
  const auto count_excluded = [&](const SweepResult& r) {
    for (const auto& row : r.cells)
      for (const auto& cell : row) excluded += cell.excluded;
  };

  const SweepResult fig2 = figure_sweep("fig2.cfg");
  count_excluded(fig2);
  for (std::size_t i = 0; i < fig2.points.size(); ++i) {
    const double no_eve = mean(fig2, i, SchemeId::kNoEve), prop = mean(fig2, i, SchemeId::kProposed);
    const double ucc = mean(fig2, i, SchemeId::kUcc), ctp = mean(fig2, i, SchemeId::kCtp);
    const double flc = mean(fig2, i, SchemeId::kFlc);
    if (!(no_eve <= prop && prop <= ucc && ucc <= ctp && prop <= flc))
      problems.push_back(fmt("data-size ordering broken at %g KB", fig2.points[i]));
  }

  const SweepResult fig3 = figure_sweep("fig3.cfg");
  count_excluded(fig3);
  for (std::size_t i = 1; i < fig3.points.size(); ++i) {
    if (mean(fig3, i, SchemeId::kFlc) != mean(fig3, 0, SchemeId::kFlc))
      problems.push_back(fmt("local computing not flat at %g GHz", fig3.points[i]));
    if (!(mean(fig3, i, SchemeId::kProposed) < mean(fig3, i - 1, SchemeId::kProposed)))
      problems.push_back(fmt("proposed not decreasing at %g GHz", fig3.points[i]));
  }

  const SweepResult fig4 = figure_sweep("fig4.cfg");
  count_excluded(fig4);
  for (SchemeId id : kAllSchemes)
    for (std::size_t i = 1; i < fig4.points.size(); ++i)
      if (mean(fig4, i, id) < mean(fig4, i - 1, id))
        problems.push_back(std::string(scheme_name(id)) + fmt(" decreasing at K = %g", fig4.points[i]));

  // The default configuration is the 2.45 GHz point of the capacity sweep.
  const auto at = std::find(fig3.points.begin(), fig3.points.end(), 2.45);
  const auto idx = static_cast<std::size_t>(at - fig3.points.begin());
  const double ratio = mean(fig3, idx, SchemeId::kCtp) / mean(fig3, idx, SchemeId::kProposed);
  if (!(ratio >= 1.2)) problems.push_back(fmt("CTP / PROPOSED = %.4f at the default config (needs >= 1.2)", ratio));

  const double t = seconds_since(t0);
  if (t >= 1800.0) problems.push_back("runtime over 30 min");
  std::string detail = fmt("CTP/PROPOSED %.4f, %.0f excluded runs, %.1f s", ratio, excluded, t);
  for (const auto& p : problems) detail += "; " + p;
  return {problems.empty(), detail};
}

Outcome catalog_fidelity() {
  // name, level, pub, priv, ct/sig, cycles/bit
  const char* expected =
      "name,level,pub,priv,ct_sig,cycles_per_bit\n"
      "RSA-2048,NA,256,256,256,113\n"
      "ECC-256,NA,64,32,256,281\n"
      "Kyber-512,1,800,1632,768,2193\n"
      "Kyber-768,3,1184,2400,1088,3577\n"
      "Kyber-1024,5,1568,3264,1568,5499\n"
      "Dilithium-2,1,1312,2528,2420,24051\n"
      "Dilithium-3,3,1952,4000,3293,36287\n"
      "Dilithium-5,5,2592,4864,4595,33085\n"
      "Falcon-512,1,897,1281,690,148791\n"
      "Falcon-1024,3,1793,2305,1330,326105\n"
      "SPHINCS+-128f,1,32,64,17088,2038919\n"
      "SPHINCS+-192f,3,48,96,35664,2686303\n"
      "SPHINCS+-256f,5,64,128,49856,6070970\n";
  const std::string csv = catalog_csv();
  return {csv == expected, csv == expected ? "13 x 5 cells match" : "catalog CSV differs:\n" + csv};
}

int run_cli(const std::string& args, const fs::path& stdout_path) {
  const std::string cmd = std::string("\"") + PLSOFF_CLI + "\" " + args + " > \"" + stdout_path.string() + "\" 2> /dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "plsoff_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::vector<std::string> problems;

  const int a = run_cli("solve --seed 42", dir / "solve_a.txt");
  const int b = run_cli("solve --seed 42", dir / "solve_b.txt");
  const std::string ra = slurp(dir / "solve_a.txt");
  if (a != 0 || b != 0 || ra.empty() || ra != slurp(dir / "solve_b.txt")) problems.push_back("solve reports differ");

  for (const char* fig : {"fig2", "fig3", "fig4"}) {
    const std::string config = (fs::path(PLSOFF_SOURCE_DIR) / "configs" / (std::string(fig) + ".cfg")).string();
    for (const char* run : {"a", "b"}) {
      const fs::path out = dir / (std::string(fig) + "_" + run);
      if (run_cli("sweep --config \"" + config + "\" --runs 20 --out \"" + out.string() + "\"", dir / "log.txt") != 0)
        problems.push_back(std::string(fig) + " sweep failed");
    }
    const std::string csv = slurp(dir / (std::string(fig) + "_a") / "sweep.csv");
    if (csv.empty() || csv != slurp(dir / (std::string(fig) + "_b") / "sweep.csv"))
      problems.push_back(std::string(fig) + " sweep CSVs differ");
  }
  fs::remove_all(dir);
  std::string detail = "solve --seed 42 twice, three sweeps twice";
  for (const auto& p : problems) detail += "; " + p;
  return {problems.empty(), detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"compute split matches numerical minimizer", compute_split_oracle},
      {"surrogate safety", surrogate_safety},
      {"robustness dominance", robustness},
      {"small-instance global gap", small_instance_gap},
      {"monotone convergence", monotone_convergence},
      {"figure trends", figure_trends},
      {"catalog fidelity", catalog_fidelity},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first
              << "): " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
