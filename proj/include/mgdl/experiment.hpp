#pragma once

#include <set>
#include <string>

#include "mgdl/grade.hpp"
#include "mgdl/metrics.hpp"

namespace mgdl {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat key=value experiment description. Unknown keys are rejected at
/// parse time; structural violations are reported by validate_config.
struct ExperimentConfig {
  std::string task = "synthetic-1";
  std::string method = "mgdl";
  std::uint64_t seed = 1;

  // architecture: hidden widths per grade (mgdl) or of the whole net (sgdl)
  std::size_t grades = 3;
  std::vector<std::size_t> hidden_widths = {32, 32};

  // per-grade training schedule
  double t_max = 1e-2;
  double t_min = 1e-3;
  std::size_t epochs = 2000;
  std::size_t batch_size = kFullBatch;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;

  // synthetic / manifold targets
  std::size_t components = 5;
  double freq_step = 2.0;
  std::uint64_t phase_seed = 0;
  std::size_t n_train = 256;
  std::size_t n_val = 128;
  std::size_t n_test = 128;
  std::uint64_t val_seed = 0;
  std::uint64_t test_seed = 1;
  long long manifold_q = 0;

  // image task
  std::string image_path;

  // mnist task
  std::string mnist_train_images;
  std::string mnist_train_labels;
  std::string mnist_test_images;
  std::string mnist_test_labels;
  double mnist_beta = 1.0;
  double mnist_kappa = 1.0;
  std::uint64_t split_seed = 7;

  // diagnostics
  std::size_t snapshot_every = 25;
  std::size_t spectrum_grid = 256;
  std::size_t log_every = 1;

  std::set<std::string> keys_set;

  bool is_synthetic() const { return task.rfind("synthetic-", 0) == 0; }
  bool is_manifold() const { return task.rfind("manifold-", 0) == 0; }
};

/// Applies one key=value assignment; throws ConfigError on unknown keys or
/// unparseable values.
void apply_config_key(ExperimentConfig& cfg, const std::string& key,
                      const std::string& value);

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

/// Full structural validation without running; returns every violation.
std::vector<std::string> validate_config(const ExperimentConfig& cfg);

struct RunResult {
  MetricReport final;
  std::vector<MetricReport> per_grade;
  std::vector<double> residue_norms;
  bool monotonic_pass = true;
  double wall_seconds = 0.0;
};

/// Builds the dataset, runs the configured method, and writes all artifacts
/// (metrics.json, train_log.jsonl, run_info.json, predictions.csv, plus
/// spectrum.csv/evolution.csv for scalar tasks and reconstruction.ppm for
/// image tasks) into out_dir. metrics.json is written last and contains
/// only deterministic fields.
RunResult run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

/// Simple CSV reader: first row is the header, every other row split on
/// commas. Used by the spectrum/report subcommands and round-trip tests.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
CsvTable read_csv(std::istream& in);

/// Sample values for a standalone spectrum: the last column of a CSV.
std::vector<double> read_samples_csv(std::istream& in);

/// Aggregates run directories into a comparison table (one row per run:
/// task, method, schedule, wall time, RSE/PSNR columns).
std::string report_table_csv(const std::vector<std::string>& run_dirs);

}  // namespace mgdl
