#include "plsoff/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "plsoff/keyvalue.hpp"

namespace plsoff {

std::string_view axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kDataSize: return "data_size";
    case SweepAxis::kEdgeCapacity: return "edge_capacity";
    case SweepAxis::kDeviceCount: return "device_count";
  }
  return "?";
}

SweepAxis parse_axis(std::string_view name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  for (SweepAxis a : {SweepAxis::kDataSize, SweepAxis::kEdgeCapacity, SweepAxis::kDeviceCount})
    if (axis_name(a) == lower) return a;
  throw InvalidConfigError("unknown sweep axis '" + std::string(name) +
                           "' (expected data_size, edge_capacity or device_count)");
}

std::vector<double> default_points(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kDataSize: return {10, 20, 30, 40, 50};
    case SweepAxis::kEdgeCapacity: return {0.5, 1.0, 1.5, 1.7, 2.0, 2.45, 3.0};
    case SweepAxis::kDeviceCount: return {4, 6, 8, 10, 12, 14, 16, 18};
  }
  return {};
}

void SweepSpec::validate() const {
  if (runs < 1) throw InvalidConfigError("'runs' must be at least 1");
  if (points.empty()) throw InvalidConfigError("'sweep_points' must not be empty");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i] > 0.0)) throw InvalidConfigError("sweep points must be positive");
    if (i > 0 && !(points[i] > points[i - 1])) throw InvalidConfigError("sweep points must be strictly increasing");
    if (axis == SweepAxis::kDeviceCount && points[i] != std::floor(points[i]))
      throw InvalidConfigError("device_count sweep points must be integers");
  }
  base.validate();
  settings.validate();
}

std::uint64_t run_seed(std::uint64_t seed, int run) {
  return derive_seed(seed, static_cast<std::uint64_t>(run), 0x5EEDULL);
}

ScenarioConfig point_config(const SweepSpec& spec, double point) {
  ScenarioConfig cfg = spec.base;
  switch (spec.axis) {
    case SweepAxis::kDataSize:
      cfg.data_kb_min = cfg.data_kb_max = point;
      break;
    case SweepAxis::kEdgeCapacity:
      cfg.constants.edge_cpu_hz = point * 1e9;
      break;
    case SweepAxis::kDeviceCount:
      cfg.num_devices = static_cast<int>(point);
      break;
  }
  return cfg;
}

const SweepCell& SweepResult::cell(std::size_t point, SchemeId scheme) const {
  const auto it = std::find(schemes.begin(), schemes.end(), scheme);
  if (it == schemes.end()) throw InvalidConfigError("scheme not part of this sweep");
  return cells.at(point)[static_cast<std::size_t>(it - schemes.begin())];
}

const std::vector<double>& SweepResult::runs_of(std::size_t point, SchemeId scheme) const {
  const auto it = std::find(schemes.begin(), schemes.end(), scheme);
  if (it == schemes.end()) throw InvalidConfigError("scheme not part of this sweep");
  return samples.at(point)[static_cast<std::size_t>(it - schemes.begin())];
}

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::size_t n_points = spec.points.size();
  const std::size_t n_schemes = spec.schemes.size();
  const auto n_runs = static_cast<std::size_t>(spec.runs);

  SweepResult result;
  result.axis = spec.axis;
  result.points = spec.points;
  result.schemes = spec.schemes;
  result.samples.assign(n_points, std::vector<std::vector<double>>(n_schemes, std::vector<double>(n_runs)));

  const std::size_t n_tasks = n_points * n_runs;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t task = next.fetch_add(1);
      if (task >= n_tasks) return;
      const std::size_t pi = task / n_runs;
      const std::size_t run = task % n_runs;
      try {
        const Scenario s = generate(point_config(spec, spec.points[pi]), run_seed(spec.seed, static_cast<int>(run)));
        for (std::size_t si = 0; si < n_schemes; ++si) {
          double value = std::numeric_limits<double>::quiet_NaN();
          try {
            value = run_scheme(spec.schemes[si], s, spec.settings).objective;
          } catch (const NonConvergenceError&) {
          }
          result.samples[pi][si][run] = value;
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n_tasks);
      }
    }
  };

  unsigned n_threads = spec.threads > 0 ? static_cast<unsigned>(spec.threads) : std::thread::hardware_concurrency();
  n_threads = std::max(1u, std::min<unsigned>(n_threads, static_cast<unsigned>(n_tasks)));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Aggregate in run order so the numbers do not depend on scheduling.
  std::size_t excluded_total = 0;
  result.cells.assign(n_points, std::vector<SweepCell>(n_schemes));
  for (std::size_t pi = 0; pi < n_points; ++pi) {
    for (std::size_t si = 0; si < n_schemes; ++si) {
      const auto& xs = result.samples[pi][si];
      SweepCell& cell = result.cells[pi][si];
      double sum = 0.0;
      for (double x : xs) {
        if (std::isnan(x)) {
          ++cell.excluded;
          continue;
        }
        sum += x;
        ++cell.runs;
      }
      excluded_total += static_cast<std::size_t>(cell.excluded);
      if (cell.runs == 0) {
        cell.mean_latency_s = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      cell.mean_latency_s = sum / cell.runs;
      if (cell.runs > 1) {
        double ss = 0.0;
        for (double x : xs)
          if (!std::isnan(x)) ss += (x - cell.mean_latency_s) * (x - cell.mean_latency_s);
        cell.stderr_s = std::sqrt(ss / (cell.runs - 1)) / std::sqrt(static_cast<double>(cell.runs));
      }
    }
  }
  const double total = static_cast<double>(n_points * n_schemes * n_runs);
  if (total > 0 && static_cast<double>(excluded_total) / total > spec.max_exclusion_rate)
    throw Error("sweep excluded " + std::to_string(excluded_total) + " of " +
                std::to_string(static_cast<std::size_t>(total)) + " runs for non-convergence");
  return result;
}

std::string sweep_csv(const SweepResult& r) {
  std::ostringstream os;
  os << "axis,point,scheme,mean_latency_s,stderr_s,runs\n";
  for (std::size_t pi = 0; pi < r.points.size(); ++pi) {
    for (std::size_t si = 0; si < r.schemes.size(); ++si) {
      const auto& c = r.cells[pi][si];
      os << axis_name(r.axis) << ',' << kv::format_double(r.points[pi]) << ',' << scheme_name(r.schemes[si]) << ','
         << kv::format_double(c.mean_latency_s) << ',' << kv::format_double(c.stderr_s) << ',' << c.runs << '\n';
    }
  }
  return os.str();
}

std::string plot_script(SweepAxis axis) {
  std::string xlabel;
  switch (axis) {
    case SweepAxis::kDataSize: xlabel = "Data size per device d_k (KB)"; break;
    case SweepAxis::kEdgeCapacity: xlabel = "Edge computing capacity f_Tot (GHz)"; break;
    case SweepAxis::kDeviceCount: xlabel = "Number of devices K"; break;
  }
  std::ostringstream os;
  os << "#!/usr/bin/env python3\n"
        "\"\"\"Plot sweep.csv (written next to this script) as total latency per scheme.\"\"\"\n"
        "import csv\n"
        "import os\n"
        "import sys\n"
        "\n"
        "import matplotlib\n"
        "matplotlib.use(\"Agg\")\n"
        "import matplotlib.pyplot as plt\n"
        "\n"
        "here = os.path.dirname(os.path.abspath(__file__))\n"
        "path = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, \"sweep.csv\")\n"
        "series = {}\n"
        "with open(path, newline=\"\") as fh:\n"
        "    for row in csv.DictReader(fh):\n"
        "        xs, ys, es = series.setdefault(row[\"scheme\"], ([], [], []))\n"
        "        xs.append(float(row[\"point\"]))\n"
        "        ys.append(float(row[\"mean_latency_s\"]))\n"
        "        es.append(float(row[\"stderr_s\"]))\n"
        "\n"
        "styles = {\"PROPOSED\": \"o-\", \"CTP\": \"s--\", \"UCC\": \"^--\", \"FLC\": \"x-.\", \"NO_EVE\": \"d:\"}\n"
        "fig, ax = plt.subplots(figsize=(5, 4))\n"
        "for name, (xs, ys, es) in series.items():\n"
        "    ax.errorbar(xs, ys, yerr=es, fmt=styles.get(name, \"o-\"), label=name, capsize=2)\n"
        "ax.set_xlabel(\""
     << xlabel
     << "\")\n"
        "ax.set_ylabel(\"System total latency (s)\")\n"
        "ax.grid(True, alpha=0.3)\n"
        "ax.legend()\n"
        "fig.tight_layout()\n"
        "fig.savefig(os.path.join(os.path.dirname(path), \"sweep.png\"), dpi=150)\n";
  return os.str();
}

void emit(const SweepResult& result, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());
  auto write = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw IoError("write failed for '" + path.string() + "'");
  };
  write(out_dir / "sweep.csv", sweep_csv(result));
  write(out_dir / "plot_sweep.py", plot_script(result.axis));
}

}  // namespace plsoff
