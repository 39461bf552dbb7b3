#include "plsoff/config.hpp"

#include <functional>
#include <map>
#include <sstream>

#include "plsoff/errors.hpp"

namespace plsoff {
namespace {

using Setter = std::function<void(RunConfig&, const kv::Document&, const std::string&)>;

int to_int(const kv::Document& doc, const std::string& key) {
  const auto v = doc.get_int(key);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw InvalidConfigError(doc.origin() + ": key '" + key + "' out of range");
  return static_cast<int>(v);
}

GreedyMode parse_greedy(const std::string& v, const std::string& origin) {
  if (v == "rederive") return GreedyMode::kRederive;
  if (v == "frozen") return GreedyMode::kFrozen;
  throw InvalidConfigError(origin + ": 'greedy_rule' must be 'rederive' or 'frozen', got '" + v + "'");
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"seed", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.seed = d.get_uint(k); }},
      {"K", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.scenario.num_devices = to_int(d, k); }},
      {"radius_m", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.scenario.geometry.radius_m = d.get_double(k); }},
      {"eve_x_m", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.scenario.geometry.eve_x_m = d.get_double(k); }},
      {"eve_y_m", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.scenario.geometry.eve_y_m = d.get_double(k); }},
      {"min_distance_m", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.scenario.geometry.min_distance_m = d.get_double(k); }},
      {"data_kb_min", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.scenario.data_kb_min = d.get_double(k); }},
      {"data_kb_max", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.scenario.data_kb_max = d.get_double(k); }},
      {"bandwidth_hz", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.scenario.constants.bandwidth_hz = d.get_double(k); }},
      {"noise_power_w", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.scenario.constants.noise_power_w = d.get_double(k); }},
      {"noise_dbm", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.scenario.constants.noise_power_w = dbm_to_watts(d.get_double(k)); }},
      {"local_cpu_hz", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.scenario.constants.local_cpu_hz = d.get_double(k); }},
      {"edge_cpu_hz", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.scenario.constants.edge_cpu_hz = d.get_double(k); }},
      {"p_max_w", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.scenario.constants.p_max_w = d.get_double(k); }},
      {"p_max_dbm", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.scenario.constants.p_max_w = dbm_to_watts(d.get_double(k)); }},
      {"eps_fraction", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.scenario.constants.eps_fraction = d.get_double(k); }},
      {"ao_threshold", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.scenario.constants.ao_threshold = d.get_double(k); }},
      {"max_ao_iters", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.solver.max_ao_iters = to_int(d, k); }},
      {"greedy_rule", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.solver.greedy = parse_greedy(d.at(k), d.origin()); }},
      {"sca_max_iters", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.solver.sca.max_sca_iters = to_int(d, k); }},
      {"sca_tol", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.solver.sca.sca_tol = d.get_double(k); }},
      {"barrier_mu", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.solver.sca.barrier_mu = d.get_double(k); }},
      {"barrier_t0", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.solver.sca.barrier_t0 = d.get_double(k); }},
      {"barrier_gap", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.solver.sca.barrier_gap = d.get_double(k); }},
      {"newton_tol", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.solver.sca.newton_tol = d.get_double(k); }},
      {"newton_max_steps", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.solver.sca.newton_max_steps = to_int(d, k); }},
      {"threshold_margin", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.solver.sca.threshold_margin = d.get_double(k); }},
      {"sweep_axis", [](RunConfig& c, const kv::Document& d, const std::string& k) {
         c.sweep_axis = parse_axis(d.at(k));
         if (!d.contains("sweep_points")) c.sweep_points = default_points(c.sweep_axis);
       }},
      {"sweep_points", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.sweep_points = d.get_doubles(k); }},
      {"runs", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.runs = to_int(d, k); }},
      {"schemes", [](RunConfig& c, const kv::Document& d, const std::string& k) {
         c.schemes.clear();
         for (const auto& name : d.get_strings(k)) c.schemes.push_back(parse_scheme(name));
       }},
      {"threads", [](RunConfig& c, const kv::Document& d, const std::string& k) { c.threads = to_int(d, k); }},
  };
  return table;
}

}  // namespace

void RunConfig::apply(const kv::Document& doc) {
  const auto& table = setters();
  for (const auto& [key, value] : doc.entries()) {
    const auto it = table.find(key);
    if (it == table.end()) throw InvalidConfigError(doc.origin() + ": unknown key '" + key + "'");
  }
  // sweep_axis first so an explicit sweep_points is not replaced by its defaults.
  if (doc.contains("sweep_axis")) table.at("sweep_axis")(*this, doc, "sweep_axis");
  for (const auto& [key, value] : doc.entries())
    if (key != "sweep_axis") table.at(key)(*this, doc, key);
}

void RunConfig::apply_overrides(const std::vector<std::string>& overrides) {
  std::string text;
  for (const auto& o : overrides) {
    if (o.find('=') == std::string::npos)
      throw InvalidConfigError("override '" + o + "' is not of the form key=value");
    text += o;
    text += '\n';
  }
  apply(kv::Document::parse(text, "<overrides>"));
}

std::string RunConfig::to_text() const {
  const auto& c = scenario.constants;
  const auto& g = scenario.geometry;
  const auto& sca = solver.sca;
  std::ostringstream os;
  os << "seed = " << seed << '\n'
     << "K = " << scenario.num_devices << '\n'
     << "radius_m = " << kv::format_double(g.radius_m) << '\n'
     << "eve_x_m = " << kv::format_double(g.eve_x_m) << '\n'
     << "eve_y_m = " << kv::format_double(g.eve_y_m) << '\n'
     << "min_distance_m = " << kv::format_double(g.min_distance_m) << '\n'
     << "data_kb_min = " << kv::format_double(scenario.data_kb_min) << '\n'
     << "data_kb_max = " << kv::format_double(scenario.data_kb_max) << '\n'
     << "bandwidth_hz = " << kv::format_double(c.bandwidth_hz) << '\n'
     << "noise_power_w = " << kv::format_double(c.noise_power_w) << '\n'
     << "local_cpu_hz = " << kv::format_double(c.local_cpu_hz) << '\n'
     << "edge_cpu_hz = " << kv::format_double(c.edge_cpu_hz) << '\n'
     << "# 23 dBm; not a published value\n"
     << "p_max_w = " << kv::format_double(c.p_max_w) << '\n'
     << "eps_fraction = " << kv::format_double(c.eps_fraction) << '\n'
     << "ao_threshold = " << kv::format_double(c.ao_threshold) << '\n'
     << "max_ao_iters = " << solver.max_ao_iters << '\n'
     << "greedy_rule = " << (solver.greedy == GreedyMode::kRederive ? "rederive" : "frozen") << '\n'
     << "sca_max_iters = " << sca.max_sca_iters << '\n'
     << "sca_tol = " << kv::format_double(sca.sca_tol) << '\n'
     << "barrier_mu = " << kv::format_double(sca.barrier_mu) << '\n'
     << "barrier_t0 = " << kv::format_double(sca.barrier_t0) << '\n'
     << "barrier_gap = " << kv::format_double(sca.barrier_gap) << '\n'
     << "newton_tol = " << kv::format_double(sca.newton_tol) << '\n'
     << "newton_max_steps = " << sca.newton_max_steps << '\n'
     << "threshold_margin = " << kv::format_double(sca.threshold_margin) << '\n'
     << "sweep_axis = " << axis_name(sweep_axis) << '\n'
     << "sweep_points = ";
  for (std::size_t i = 0; i < sweep_points.size(); ++i) os << (i ? ", " : "") << kv::format_double(sweep_points[i]);
  os << '\n' << "runs = " << runs << '\n' << "schemes = ";
  for (std::size_t i = 0; i < schemes.size(); ++i) os << (i ? ", " : "") << scheme_name(schemes[i]);
  os << '\n' << "threads = " << threads << '\n';
  return os.str();
}

SweepSpec RunConfig::sweep_spec() const {
  SweepSpec spec;
  spec.axis = sweep_axis;
  spec.points = sweep_points;
  spec.runs = runs;
  spec.schemes = schemes;
  spec.base = scenario;
  spec.settings = solver;
  spec.seed = seed;
  spec.threads = threads;
  return spec;
}

RunConfig load_config(const std::filesystem::path& path) {
  RunConfig cfg;
  cfg.apply(kv::Document::load(path));
  return cfg;
}

}  // namespace plsoff
