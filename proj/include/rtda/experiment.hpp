#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rtda/denoise.hpp"
#include "rtda/synth.hpp"

namespace rtda {

struct FilterSpec {
  std::string label;
  DenoiseParams params;
};

struct ExperimentConfig {
  SignalSpec signal;
  std::vector<double> snr_db_list{10.0, 15.0, 20.0, 25.0, 30.0};
  std::vector<std::uint64_t> seeds{0};
  std::vector<FilterSpec> filters;
  std::filesystem::path output_dir{"results"};
  bool write_diagrams = true;
};

/// The five filters with their default parameters, labelled by mode.
std::vector<FilterSpec> default_filters();

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Parse a JSON experiment description. Omitted fields take their defaults;
/// unknown keys and invalid values raise ConfigError naming the field path
/// (e.g. `filters[0].k`).
ExperimentConfig parse_config(std::string_view json_text);

struct ResultRow {
  double snr_db;
  std::uint64_t seed;
  std::string filter;
  std::size_t channel;
  double rmse;
  /// Empty on success; otherwise the failure message.
  std::string error;
  /// True when the filter itself declared the failure (no recurrent loop).
  bool declared_failure = false;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::size_t declared_failures = 0;
  std::size_t internal_errors = 0;
};

/// Number of worker threads: RECURRENT_TDA_THREADS, 0 or unset = hardware.
unsigned thread_count_from_env();

/// Runs every (snr, seed, filter) cell and writes `results.csv` (plus a
/// diagram CSV per topological run) under cfg.output_dir. Rows follow the
/// config order of snr, seed, filter, then channel, independent of threads.
ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned threads = 1);

std::string format_results_csv(const std::vector<ResultRow>& rows);

/// "20", "7.5", "inf" -> used in diagram file names.
std::string snr_tag(double snr_db);

}  // namespace rtda
