#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "mgdl/experiment.hpp"
#include "mgdl/spectrum.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitConfig = 1;
constexpr int kExitFile = 2;
constexpr int kExitDiverged = 3;

#ifndef MGDL_DEFAULT_PRESET_DIR
#define MGDL_DEFAULT_PRESET_DIR ""
#endif

fs::path preset_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("MGDL_PRESETS")) return env;
  return MGDL_DEFAULT_PRESET_DIR;
}

/// `spec` is either a config file path or a preset name like "synthetic-1".
fs::path resolve_config(const std::string& spec, const std::string& presets_flag) {
  if (fs::exists(spec)) return spec;
  const fs::path preset = preset_dir(presets_flag) / (spec + ".cfg");
  if (fs::exists(preset)) return preset;
  throw mgdl::FileError("no config file or preset named '" + spec + "'");
}

struct Overrides {
  std::vector<std::pair<std::string, std::string>> pairs;

  void add_if(const std::string& key, const std::string& value) {
    if (!value.empty()) pairs.emplace_back(key, value);
  }
};

int run_command(const std::string& config_spec, const std::string& out_dir,
                const std::string& presets_flag, const Overrides& overrides) {
  const fs::path config_path = resolve_config(config_spec, presets_flag);
  mgdl::ExperimentConfig cfg = mgdl::parse_config_file(config_path.string());
  for (const auto& [key, value] : overrides.pairs)
    mgdl::apply_config_key(cfg, key, value);

  std::string out = out_dir;
  if (out.empty())
    out = "runs/" + cfg.task + "_" + cfg.method + "_seed" +
          std::to_string(cfg.seed);

  const mgdl::RunResult result = mgdl::run_experiment(cfg, out);
  std::cout << "wrote " << out << "/metrics.json"
            << "  tr_rse=" << result.final.tr_rse
            << " va_rse=" << result.final.va_rse
            << " te_rse=" << result.final.te_rse;
  if (result.final.te_psnr) std::cout << " te_psnr=" << *result.final.te_psnr;
  std::cout << "  (" << result.wall_seconds << " s)\n";
  return 0;
}

int validate_command(const std::string& config_path) {
  mgdl::ExperimentConfig cfg;
  try {
    cfg = mgdl::parse_config_file(config_path);
  } catch (const mgdl::ConfigError& e) {
    std::cout << "violation: " << e.what() << '\n';
    return kExitConfig;
  }
  const auto violations = mgdl::validate_config(cfg);
  for (const auto& v : violations) std::cout << "violation: " << v << '\n';
  if (violations.empty()) {
    std::cout << "ok\n";
    return 0;
  }
  return kExitConfig;
}

int spectrum_command(const std::string& input, const std::string& output) {
  std::ifstream in(input);
  if (!in.good()) throw mgdl::FileError("cannot open " + input);
  const std::vector<double> samples = mgdl::read_samples_csv(in);
  const mgdl::SpectrumSeries spectrum = mgdl::one_side_spectrum(samples);
  if (output.empty()) {
    mgdl::write_spectrum_csv(std::cout, spectrum);
  } else {
    std::ofstream out(output);
    if (!out.good()) throw mgdl::FileError("cannot write " + output);
    mgdl::write_spectrum_csv(out, spectrum);
  }
  return 0;
}

int report_command(const std::vector<std::string>& dirs, const std::string& output) {
  const std::string table = mgdl::report_table_csv(dirs);
  if (output.empty()) {
    std::cout << table;
  } else {
    std::ofstream out(output);
    if (!out.good()) throw mgdl::FileError("cannot write " + output);
    out << table;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-grade training of shallow ReLU networks with spectral diagnostics"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run an experiment from a config or preset");
  std::string run_config, run_out, run_presets;
  std::string ov_method, ov_grades, ov_epochs, ov_seed, ov_tmax, ov_tmin,
      ov_batch, ov_image;
  run->add_option("config", run_config, "config file or preset name")->required();
  run->add_option("--out", run_out, "output directory");
  run->add_option("--presets", run_presets, "preset directory");
  run->add_option("--method", ov_method, "override: mgdl or sgdl");
  run->add_option("--grades", ov_grades, "override: grade count");
  run->add_option("--epochs", ov_epochs, "override: epochs per grade");
  run->add_option("--seed", ov_seed, "override: run seed");
  run->add_option("--t-max", ov_tmax, "override: max learning rate");
  run->add_option("--t-min", ov_tmin, "override: min learning rate");
  run->add_option("--batch", ov_batch, "override: batch size or 'full'");
  run->add_option("--image", ov_image, "override: image path");

  // validate
  auto* validate = app.add_subcommand("validate", "check a config without running");
  std::string validate_config_path;
  validate->add_option("config", validate_config_path, "config file")->required();

  // spectrum
  auto* spectrum = app.add_subcommand(
      "spectrum", "one-side amplitude spectrum of CSV samples (last column)");
  std::string spectrum_in, spectrum_out;
  spectrum->add_option("input", spectrum_in, "CSV of uniform-grid samples")
      ->required();
  spectrum->add_option("--out", spectrum_out, "output CSV (default stdout)");

  // report
  auto* report = app.add_subcommand("report", "aggregate runs into a table");
  std::vector<std::string> report_dirs;
  std::string report_out;
  report->add_option("dirs", report_dirs, "run directories")->required();
  report->add_option("--out", report_out, "output CSV (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      Overrides ov;
      ov.add_if("method", ov_method);
      ov.add_if("grades", ov_grades);
      ov.add_if("epochs", ov_epochs);
      ov.add_if("seed", ov_seed);
      ov.add_if("t_max", ov_tmax);
      ov.add_if("t_min", ov_tmin);
      ov.add_if("batch_size", ov_batch);
      ov.add_if("image_path", ov_image);
      return run_command(run_config, run_out, run_presets, ov);
    }
    if (validate->parsed()) return validate_command(validate_config_path);
    if (spectrum->parsed()) return spectrum_command(spectrum_in, spectrum_out);
    if (report->parsed()) return report_command(report_dirs, report_out);
  } catch (const mgdl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const mgdl::FileError& e) {
    std::cerr << "file error: " << e.what() << '\n';
    return kExitFile;
  } catch (const mgdl::DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << '\n';
    return kExitDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
