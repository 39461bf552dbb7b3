#include "plsoff/baselines.hpp"

#include <cctype>
#include <chrono>
#include <string>

namespace plsoff {

std::string_view scheme_name(SchemeId id) {
  switch (id) {
    case SchemeId::kProposed: return "PROPOSED";
    case SchemeId::kCtp: return "CTP";
    case SchemeId::kUcc: return "UCC";
    case SchemeId::kFlc: return "FLC";
    case SchemeId::kNoEve: return "NO_EVE";
  }
  return "?";
}

SchemeId parse_scheme(std::string_view name) {
  std::string upper;
  for (char c : name) upper.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  for (SchemeId id : kAllSchemes)
    if (scheme_name(id) == upper) return id;
  throw InvalidConfigError("unknown scheme '" + std::string(name) + "' (expected PROPOSED, CTP, UCC, FLC or NO_EVE)");
}

Scenario without_eavesdropper(const Scenario& s) {
  Scenario out = s;
  out.g_est.setZero();
  out.eps.setZero();
  return out;
}

SolveReport run_scheme(SchemeId scheme, const Scenario& s, const AoSettings& settings) {
  AoSettings cfg = settings;
  SolveReport report;
  switch (scheme) {
    case SchemeId::kProposed:
      report = solve(s, cfg);
      break;
    case SchemeId::kCtp:
      cfg.fixed_power = s.constants.p_max_w;
      report = solve(s, cfg);
      break;
    case SchemeId::kUcc:
      cfg.compute = ComputeRule::kUniform;
      report = solve(s, cfg);
      break;
    case SchemeId::kNoEve:
      report = solve(without_eavesdropper(s), cfg);
      break;
    case SchemeId::kFlc: {
      s.validate();
      const auto started = std::chrono::steady_clock::now();
      report.final_decision = Decision::all_local(s);
      report.per_device = latency_breakdown(s, report.final_decision);
      report.objective = report.final_decision.t_th.sum();
      report.objective_nominal = report.objective;
      report.objective_trace = {report.objective};
      report.converged = true;
      report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      break;
    }
  }
  report.scheme = std::string(scheme_name(scheme));
  return report;
}

}  // namespace plsoff
