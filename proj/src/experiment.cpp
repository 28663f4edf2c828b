#include "rtda/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "rtda/csv_io.hpp"

namespace rtda {

using nlohmann::json;

std::vector<FilterSpec> default_filters() {
  std::vector<FilterSpec> out;
  for (auto mode : {FilterMode::ellipsoidal, FilterMode::spherical, FilterMode::knn, FilterMode::moving_average,
                    FilterMode::adaptive_moving_average}) {
    DenoiseParams p;
    p.mode = mode;
    out.push_back({std::string(to_string(mode)), p});
  }
  return out;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("unknown key '" + (path.empty() ? key : path + "." + key) + "'");
  }
}

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

double get_number(const json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  fail(path, "expected a number");
}

int get_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  const auto x = v.get<long long>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) fail(path, "integer out of range");
  return static_cast<int>(x);
}

template <typename T, typename Get>
void read_opt(const json& obj, const std::string& path, std::string_view key, T& dst, Get get) {
  if (auto it = obj.find(std::string(key)); it != obj.end()) dst = get(*it, join(path, key));
}

SignalSpec parse_signal(const json& obj, const std::string& path) {
  reject_unknown(obj, path, {"f_start", "f_end", "t_max", "n", "squeeze_depth", "squeeze_width", "amplitudes"});
  SignalSpec s;
  read_opt(obj, path, "f_start", s.f_start, get_number);
  read_opt(obj, path, "f_end", s.f_end, get_number);
  read_opt(obj, path, "t_max", s.t_max, get_number);
  read_opt(obj, path, "n", s.n, get_int);
  read_opt(obj, path, "squeeze_depth", s.squeeze_depth, get_number);
  read_opt(obj, path, "squeeze_width", s.squeeze_width, get_number);
  if (auto it = obj.find("amplitudes"); it != obj.end()) {
    const std::string p = join(path, "amplitudes");
    if (!it->is_array() || it->size() != 2) fail(p, "expected [x, y]");
    s.amplitude_x = get_number((*it)[0], p + "[0]");
    s.amplitude_y = get_number((*it)[1], p + "[1]");
  }
  if (!(s.f_start > 0.0)) fail(join(path, "f_start"), "must be positive");
  if (!(s.f_end >= s.f_start)) fail(join(path, "f_end"), "must be >= f_start");
  if (!(s.t_max > 0.0) || !std::isfinite(s.t_max)) fail(join(path, "t_max"), "must be positive");
  if (s.n < 2) fail(join(path, "n"), "must be >= 2");
  if (!(s.squeeze_depth >= 0.0 && s.squeeze_depth < 1.0)) fail(join(path, "squeeze_depth"), "must lie in [0, 1)");
  if (!std::isfinite(s.squeeze_width)) fail(join(path, "squeeze_width"), "must be finite");
  if (!std::isfinite(s.amplitude_x) || !std::isfinite(s.amplitude_y)) fail(join(path, "amplitudes"), "must be finite");
  return s;
}

FilterSpec parse_filter(const json& obj, const std::string& path) {
  reject_unknown(obj, path, {"mode", "label", "rho", "k", "window", "segment", "gradient_window",
                             "degenerate_tolerance", "search_tol", "alpha_max", "neighbourhood"});
  auto mode_it = obj.find("mode");
  if (mode_it == obj.end()) fail(join(path, "mode"), "required");
  if (!mode_it->is_string()) fail(join(path, "mode"), "expected a string");
  FilterSpec f;
  try {
    f.params.mode = parse_filter_mode(mode_it->get<std::string>());
  } catch (const std::invalid_argument& e) {
    fail(join(path, "mode"), e.what());
  }
  f.label = std::string(to_string(f.params.mode));
  if (auto it = obj.find("label"); it != obj.end()) {
    if (!it->is_string() || it->get<std::string>().empty()) fail(join(path, "label"), "expected a non-empty string");
    f.label = it->get<std::string>();
    if (f.label.find_first_of(",\n\"/\\") != std::string::npos) fail(join(path, "label"), "contains a reserved character");
  }
  auto& p = f.params;
  if (auto it = obj.find("neighbourhood"); it != obj.end()) {
    if (!it->is_string()) fail(join(path, "neighbourhood"), "expected a string");
    try {
      p.neighbourhood = parse_neighbourhood_rule(it->get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail(join(path, "neighbourhood"), e.what());
    }
  }
  read_opt(obj, path, "rho", p.rho, get_number);
  read_opt(obj, path, "k", p.k, get_int);
  read_opt(obj, path, "window", p.window, get_int);
  read_opt(obj, path, "segment", p.segment, get_int);
  read_opt(obj, path, "gradient_window", p.gradient_window, get_int);
  read_opt(obj, path, "degenerate_tolerance", p.degenerate_tolerance, get_number);
  read_opt(obj, path, "search_tol", p.search_tol, get_number);
  read_opt(obj, path, "alpha_max", p.alpha_max, get_number);

  if (!(p.rho >= 1.0) || !std::isfinite(p.rho)) fail(join(path, "rho"), "must be >= 1");
  if (p.k < 1) fail(join(path, "k"), "must be >= 1");
  if (p.window < 1) fail(join(path, "window"), "must be >= 1");
  if (p.segment < 4) fail(join(path, "segment"), "must be >= 4");
  if (p.gradient_window < 1) fail(join(path, "gradient_window"), "must be >= 1");
  if (!(p.degenerate_tolerance > 0.0)) fail(join(path, "degenerate_tolerance"), "must be positive");
  if (!(p.search_tol > 0.0)) fail(join(path, "search_tol"), "must be positive");
  if (!(p.alpha_max > 0.0)) fail(join(path, "alpha_max"), "must be positive");
  return f;
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  reject_unknown(root, "", {"signal", "snr_db_list", "seeds", "filters", "output_dir", "write_diagrams"});

  ExperimentConfig cfg;
  if (auto it = root.find("signal"); it != root.end()) cfg.signal = parse_signal(*it, "signal");

  if (auto it = root.find("snr_db_list"); it != root.end()) {
    if (!it->is_array() || it->empty()) fail("snr_db_list", "expected a non-empty array");
    cfg.snr_db_list.clear();
    for (std::size_t k = 0; k < it->size(); ++k) {
      const std::string p = "snr_db_list[" + std::to_string(k) + "]";
      const double snr = get_number((*it)[k], p);
      if (std::isnan(snr) || snr == -std::numeric_limits<double>::infinity()) fail(p, "must be finite or inf");
      cfg.snr_db_list.push_back(snr);
    }
  }

  if (auto it = root.find("seeds"); it != root.end()) {
    if (!it->is_array() || it->empty()) fail("seeds", "expected a non-empty array");
    cfg.seeds.clear();
    for (std::size_t k = 0; k < it->size(); ++k) {
      const auto& v = (*it)[k];
      if (!v.is_number_unsigned()) fail("seeds[" + std::to_string(k) + "]", "expected a non-negative integer");
      cfg.seeds.push_back(v.get<std::uint64_t>());
    }
  }

  if (auto it = root.find("filters"); it != root.end()) {
    if (!it->is_array() || it->empty()) fail("filters", "expected a non-empty array");
    for (std::size_t k = 0; k < it->size(); ++k)
      cfg.filters.push_back(parse_filter((*it)[k], "filters[" + std::to_string(k) + "]"));
  } else {
    cfg.filters = default_filters();
  }
  std::set<std::string> labels;
  for (std::size_t k = 0; k < cfg.filters.size(); ++k)
    if (!labels.insert(cfg.filters[k].label).second)
      fail("filters[" + std::to_string(k) + "].label", "duplicate label '" + cfg.filters[k].label + "'");

  if (auto it = root.find("output_dir"); it != root.end()) {
    if (!it->is_string() || it->get<std::string>().empty()) fail("output_dir", "expected a non-empty string");
    cfg.output_dir = it->get<std::string>();
  }
  if (auto it = root.find("write_diagrams"); it != root.end()) {
    if (!it->is_boolean()) fail("write_diagrams", "expected a boolean");
    cfg.write_diagrams = it->get<bool>();
  }
  return cfg;
}

unsigned thread_count_from_env() {
  const char* raw = std::getenv("RECURRENT_TDA_THREADS");
  unsigned n = 0;
  if (raw && *raw) {
    char* end = nullptr;
    const long v = std::strtol(raw, &end, 10);
    if (end && *end == '\0' && v > 0) n = static_cast<unsigned>(v);
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

std::string snr_tag(double snr_db) { return format_number(snr_db); }

std::string format_results_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << "snr_db,seed,filter,channel,rmse\n";
  for (const auto& r : rows)
    out << format_number(r.snr_db) << ',' << r.seed << ',' << r.filter << ',' << r.channel << ','
        << format_number(r.error.empty() ? r.rmse : std::numeric_limits<double>::quiet_NaN()) << '\n';
  return out.str();
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned threads) {
  if (cfg.snr_db_list.empty() || cfg.seeds.empty() || cfg.filters.empty())
    throw ConfigError("experiment: snr_db_list, seeds and filters must be non-empty");

  const SignalFrame clean = generate_signal(cfg.signal);
  const std::size_t channels = clean.channels();
  const std::size_t n_filters = cfg.filters.size();
  const std::size_t n_seeds = cfg.seeds.size();
  const std::size_t n_cells = cfg.snr_db_list.size() * n_seeds * n_filters;

  std::filesystem::create_directories(cfg.output_dir);
  const auto diagram_dir = cfg.output_dir / "diagrams";
  if (cfg.write_diagrams) std::filesystem::create_directories(diagram_dir);

  std::vector<ResultRow> rows(n_cells * channels);
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;

  auto run_cell = [&](std::size_t cell) {
    const std::size_t f = cell % n_filters;
    const std::size_t s = (cell / n_filters) % n_seeds;
    const std::size_t q = cell / (n_filters * n_seeds);
    const double snr = cfg.snr_db_list[q];
    const std::uint64_t seed = cfg.seeds[s];
    const FilterSpec& filter = cfg.filters[f];

    for (std::size_t c = 0; c < channels; ++c) rows[cell * channels + c] = {snr, seed, filter.label, c, 0.0, {}, false};
    auto record_failure = [&](const std::string& what, bool declared) {
      for (std::size_t c = 0; c < channels; ++c) {
        auto& row = rows[cell * channels + c];
        row.rmse = std::numeric_limits<double>::quiet_NaN();
        row.error = what;
        row.declared_failure = declared;
      }
      std::lock_guard lock(log_mutex);
      std::clog << (declared ? "warning" : "error") << ": snr=" << snr_tag(snr) << " seed=" << seed
                << " filter=" << filter.label << ": " << what << '\n';
    };

    try {
      const SignalFrame noisy = add_noise(clean, NoiseSpec{snr, seed});
      std::optional<PersistenceDiagram> diagram;
      DenoiseParams params = filter.params;
      params.threads = 1;
      const SignalFrame out = denoise(noisy, params, &diagram);
      for (std::size_t c = 0; c < channels; ++c) rows[cell * channels + c].rmse = rmse(out, clean, c);
      if (cfg.write_diagrams && diagram) {
        std::ostringstream csv;
        write_diagram_csv(csv, *diagram);
        write_file((diagram_dir / ("snr" + snr_tag(snr) + "_seed" + std::to_string(seed) + "_" + filter.label + ".csv")).string(),
                   csv.str());
      }
    } catch (const NoRecurrentLoop& e) {
      record_failure(e.what(), true);
    } catch (const std::exception& e) {
      record_failure(e.what(), false);
    }
  };

  auto worker = [&] {
    for (std::size_t cell = next++; cell < n_cells; cell = next++) run_cell(cell);
  };
  threads = static_cast<unsigned>(std::clamp<std::size_t>(threads == 0 ? thread_count_from_env() : threads, 1, n_cells));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  ExperimentResult result;
  for (std::size_t r = 0; r < rows.size(); r += channels) {
    if (rows[r].error.empty()) continue;
    (rows[r].declared_failure ? result.declared_failures : result.internal_errors)++;
  }
  write_file((cfg.output_dir / "results.csv").string(), format_results_csv(rows));
  result.rows = std::move(rows);
  return result;
}

}  // namespace rtda
