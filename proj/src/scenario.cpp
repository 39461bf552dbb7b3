#include "plsoff/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "plsoff/catalog.hpp"
#include "plsoff/errors.hpp"
#include "plsoff/keyvalue.hpp"

namespace plsoff {
namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw InvalidConfigError(std::string("'") + name + "' must be positive and finite, got " + kv::format_double(v));
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

void SystemConstants::validate() const {
  require_positive(bandwidth_hz, "bandwidth_hz");
  require_positive(noise_power_w, "noise_power_w");
  require_positive(local_cpu_hz, "local_cpu_hz");
  require_positive(edge_cpu_hz, "edge_cpu_hz");
  require_positive(p_max_w, "p_max_w");
  require_positive(ao_threshold, "ao_threshold");
  if (!(eps_fraction >= 0.0 && eps_fraction < 1.0))
    throw InvalidConfigError("'eps_fraction' must lie in [0, 1), got " + kv::format_double(eps_fraction));
}

void ScenarioConfig::validate() const {
  constants.validate();
  if (num_devices < 1) throw InvalidConfigError("'K' must be at least 1");
  require_positive(geometry.radius_m, "radius_m");
  require_positive(geometry.min_distance_m, "min_distance_m");
  if (geometry.min_distance_m >= geometry.radius_m)
    throw InvalidConfigError("'min_distance_m' must be smaller than 'radius_m'");
  require_positive(data_kb_min, "data_kb_min");
  require_positive(data_kb_max, "data_kb_max");
  if (data_kb_max < data_kb_min) throw InvalidConfigError("'data_kb_max' must not be below 'data_kb_min'");
}

void Scenario::validate() const {
  constants.validate();
  const Eigen::Index n = size();
  if (n < 1) throw InvalidConfigError("scenario has no devices");
  if (cycles_per_bit.size() != n || h.size() != n || g_est.size() != n || eps.size() != n)
    throw InvalidConfigError("scenario vectors have mismatched lengths");
  if (!(d_bits.array() > 0.0).all() || !(cycles_per_bit.array() > 0.0).all())
    throw InvalidConfigError("scenario data sizes and cycle costs must be positive");
  if (!(h.array() >= 0.0).all() || !(g_est.array() >= 0.0).all() || !(eps.array() >= 0.0).all())
    throw InvalidConfigError("scenario gains and uncertainty radii must be nonnegative");
  if (!h.allFinite() || !g_est.allFinite() || !eps.allFinite() || !d_bits.allFinite())
    throw InvalidConfigError("scenario contains non-finite values");
}

bool Scenario::operator==(const Scenario& o) const {
  const auto& a = constants;
  const auto& b = o.constants;
  return d_bits == o.d_bits && cycles_per_bit == o.cycles_per_bit && h == o.h && g_est == o.g_est &&
         eps == o.eps && a.bandwidth_hz == b.bandwidth_hz && a.noise_power_w == b.noise_power_w &&
         a.local_cpu_hz == b.local_cpu_hz && a.edge_cpu_hz == b.edge_cpu_hz && a.p_max_w == b.p_max_w &&
         a.eps_fraction == b.eps_fraction && a.ao_threshold == b.ao_threshold;
}

double path_loss_db(double distance_m, double shadowing_db) {
  if (!(distance_m > 0.0)) throw DomainError("path loss needs a positive distance, got " + kv::format_double(distance_m));
  return 30.6 + 36.7 * std::log10(distance_m) + shadowing_db;
}

Scenario generate(const ScenarioConfig& config, std::uint64_t seed) {
  config.validate();
  const Eigen::Index n = config.num_devices;
  const Geometry& geo = config.geometry;

  Scenario s;
  s.constants = config.constants;
  s.d_bits.resize(n);
  s.cycles_per_bit.resize(n);
  s.h.resize(n);
  s.g_est.resize(n);
  s.eps.resize(n);

  for (Eigen::Index k = 0; k < n; ++k) {
    auto pos = device_stream(seed, k, StreamTag::kPosition);
    double x = 0.0, y = 0.0, r = 0.0;
    do {
      r = geo.radius_m * std::sqrt(uniform01(pos));
      const double theta = 2.0 * std::numbers::pi * uniform01(pos);
      x = r * std::cos(theta);
      y = r * std::sin(theta);
    } while (r < geo.min_distance_m);
    const double d_eve = std::max(std::hypot(x - geo.eve_x_m, y - geo.eve_y_m), geo.min_distance_m);

    auto shadow_edge = device_stream(seed, k, StreamTag::kShadowEdge);
    auto shadow_eve = device_stream(seed, k, StreamTag::kShadowEve);
    auto fade_edge = device_stream(seed, k, StreamTag::kFadeEdge);
    auto fade_eve = device_stream(seed, k, StreamTag::kFadeEve);
    s.h[k] = db_to_linear(-path_loss_db(r, shadow_edge)) * exponential(fade_edge, 1.0);
    s.g_est[k] = db_to_linear(-path_loss_db(d_eve, shadow_eve)) * exponential(fade_eve, 1.0);
    s.eps[k] = config.constants.eps_fraction * s.g_est[k];

    auto data = device_stream(seed, k, StreamTag::kDataSize);
    s.d_bits[k] = uniform(data, config.data_kb_min * kBitsPerKb, config.data_kb_max * kBitsPerKb);
    auto work = device_stream(seed, k, StreamTag::kWorkload);
    s.cycles_per_bit[k] = sample_cycles(work);
  }
  return s;
}

std::string serialize(const Scenario& s) {
  const auto& c = s.constants;
  std::ostringstream os;
  os << "K = " << s.size() << '\n'
     << "bandwidth_hz = " << kv::format_double(c.bandwidth_hz) << '\n'
     << "noise_power_w = " << kv::format_double(c.noise_power_w) << '\n'
     << "local_cpu_hz = " << kv::format_double(c.local_cpu_hz) << '\n'
     << "edge_cpu_hz = " << kv::format_double(c.edge_cpu_hz) << '\n'
     << "p_max_w = " << kv::format_double(c.p_max_w) << '\n'
     << "eps_fraction = " << kv::format_double(c.eps_fraction) << '\n'
     << "ao_threshold = " << kv::format_double(c.ao_threshold) << '\n'
     << "d_bits = " << kv::format_doubles(s.d_bits) << '\n'
     << "cycles_per_bit = " << kv::format_doubles(s.cycles_per_bit) << '\n'
     << "h = " << kv::format_doubles(s.h) << '\n'
     << "g_est = " << kv::format_doubles(s.g_est) << '\n'
     << "eps = " << kv::format_doubles(s.eps) << '\n';
  return os.str();
}

Scenario parse_scenario(std::string_view text, const std::string& origin) {
  const auto doc = kv::Document::parse(text, origin);
  static const char* const kKeys[] = {"K", "bandwidth_hz", "noise_power_w", "local_cpu_hz", "edge_cpu_hz",
                                      "p_max_w", "eps_fraction", "ao_threshold", "d_bits", "cycles_per_bit",
                                      "h", "g_est", "eps"};
  for (const auto& [key, value] : doc.entries()) {
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys))
      throw InvalidConfigError(origin + ": unknown scenario key '" + key + "'");
  }
  Scenario s;
  auto& c = s.constants;
  c.bandwidth_hz = doc.get_double("bandwidth_hz");
  c.noise_power_w = doc.get_double("noise_power_w");
  c.local_cpu_hz = doc.get_double("local_cpu_hz");
  c.edge_cpu_hz = doc.get_double("edge_cpu_hz");
  c.p_max_w = doc.get_double("p_max_w");
  c.eps_fraction = doc.get_double("eps_fraction");
  c.ao_threshold = doc.get_double("ao_threshold");
  s.d_bits = to_vector(doc.get_doubles("d_bits"));
  s.cycles_per_bit = to_vector(doc.get_doubles("cycles_per_bit"));
  s.h = to_vector(doc.get_doubles("h"));
  s.g_est = to_vector(doc.get_doubles("g_est"));
  s.eps = to_vector(doc.get_doubles("eps"));
  if (doc.get_int("K") != s.size())
    throw InvalidConfigError(origin + ": 'K' does not match the length of 'd_bits'");
  s.validate();
  return s;
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << serialize(s);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.string());
}

}  // namespace plsoff
