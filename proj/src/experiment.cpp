#include "mgdl/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mgdl/spectrum.hpp"

namespace mgdl {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(value, &pos);
    if (pos != value.size() || value.front() == '-') throw std::invalid_argument("");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("config value for '" + key +
                      "' must be a non-negative integer, got '" + value + "'");
  }
}

long long parse_i64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("config value for '" + key + "' must be an integer, got '" +
                      value + "'");
  }
}

double parse_f64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("config value for '" + key + "' must be a number, got '" +
                      value + "'");
  }
}

std::vector<std::size_t> parse_widths(const std::string& key,
                                      const std::string& value) {
  std::vector<std::size_t> widths;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    widths.push_back(parse_u64(key, item));
  }
  if (widths.empty())
    throw ConfigError("config value for '" + key + "' must list widths");
  return widths;
}

}  // namespace

void apply_config_key(ExperimentConfig& cfg, const std::string& key,
                      const std::string& value) {
  if (key == "task") cfg.task = value;
  else if (key == "method") cfg.method = value;
  else if (key == "seed") cfg.seed = parse_u64(key, value);
  else if (key == "grades") cfg.grades = parse_u64(key, value);
  else if (key == "hidden_widths") cfg.hidden_widths = parse_widths(key, value);
  else if (key == "t_max") cfg.t_max = parse_f64(key, value);
  else if (key == "t_min") cfg.t_min = parse_f64(key, value);
  else if (key == "epochs") cfg.epochs = parse_u64(key, value);
  else if (key == "batch_size") {
    if (value == "full" || value == "Full" || value == "FULL")
      cfg.batch_size = kFullBatch;
    else {
      cfg.batch_size = parse_u64(key, value);
      if (cfg.batch_size == 0)
        throw ConfigError("batch_size must be 'full' or a positive integer");
    }
  } else if (key == "adam_beta1") cfg.adam_beta1 = parse_f64(key, value);
  else if (key == "adam_beta2") cfg.adam_beta2 = parse_f64(key, value);
  else if (key == "adam_eps") cfg.adam_eps = parse_f64(key, value);
  else if (key == "components") cfg.components = parse_u64(key, value);
  else if (key == "freq_step") cfg.freq_step = parse_f64(key, value);
  else if (key == "phase_seed") cfg.phase_seed = parse_u64(key, value);
  else if (key == "n_train") cfg.n_train = parse_u64(key, value);
  else if (key == "n_val") cfg.n_val = parse_u64(key, value);
  else if (key == "n_test") cfg.n_test = parse_u64(key, value);
  else if (key == "val_seed") cfg.val_seed = parse_u64(key, value);
  else if (key == "test_seed") cfg.test_seed = parse_u64(key, value);
  else if (key == "manifold_q") cfg.manifold_q = parse_i64(key, value);
  else if (key == "image_path") cfg.image_path = value;
  else if (key == "mnist_train_images") cfg.mnist_train_images = value;
  else if (key == "mnist_train_labels") cfg.mnist_train_labels = value;
  else if (key == "mnist_test_images") cfg.mnist_test_images = value;
  else if (key == "mnist_test_labels") cfg.mnist_test_labels = value;
  else if (key == "mnist_beta") cfg.mnist_beta = parse_f64(key, value);
  else if (key == "mnist_kappa") cfg.mnist_kappa = parse_f64(key, value);
  else if (key == "split_seed") cfg.split_seed = parse_u64(key, value);
  else if (key == "snapshot_every") cfg.snapshot_every = parse_u64(key, value);
  else if (key == "spectrum_grid") cfg.spectrum_grid = parse_u64(key, value);
  else if (key == "log_every") cfg.log_every = parse_u64(key, value);
  else throw ConfigError("unknown config key: '" + key + "'");
  cfg.keys_set.insert(key);
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected 'key = value', got '" + line + "'");
    apply_config_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw FileError("cannot open config file: " + path);
  return parse_config(in);
}

namespace {

/// Task-dependent defaults for keys the config left unset.
ExperimentConfig resolve_defaults(ExperimentConfig cfg) {
  if (cfg.task == "mnist") {
    if (!cfg.keys_set.count("n_train")) cfg.n_train = 45000;
    if (!cfg.keys_set.count("n_val")) cfg.n_val = 15000;
    if (!cfg.keys_set.count("n_test")) cfg.n_test = 10000;
  }
  return cfg;
}

bool known_task(const std::string& task) {
  return task == "synthetic-1" || task == "synthetic-2" || task == "synthetic-3" ||
         task == "synthetic-4" || task == "manifold-1" || task == "manifold-2" ||
         task == "image" || task == "mnist";
}

}  // namespace

std::vector<std::string> validate_config(const ExperimentConfig& raw) {
  const ExperimentConfig cfg = resolve_defaults(raw);
  std::vector<std::string> violations;
  const auto flag = [&](const std::string& msg) { violations.push_back(msg); };

  if (!known_task(cfg.task)) flag("task: unknown task '" + cfg.task + "'");
  if (cfg.method != "mgdl" && cfg.method != "sgdl")
    flag("method: must be 'mgdl' or 'sgdl', got '" + cfg.method + "'");
  if (cfg.method == "mgdl" && cfg.grades < 1)
    flag("grades: mgdl requires at least one grade");
  if (cfg.method == "sgdl" && cfg.grades != 1)
    flag("grades: sgdl trains a single network; set grades = 1");
  if (cfg.hidden_widths.empty()) flag("hidden_widths: at least one hidden layer");
  for (std::size_t w : cfg.hidden_widths)
    if (w < 1) {
      flag("hidden_widths: widths must be >= 1");
      break;
    }
  if (!(cfg.t_min > 0.0)) flag("t_min: must be positive");
  if (cfg.t_min > cfg.t_max) flag("t_min: must not exceed t_max");
  if (cfg.epochs < 1) flag("epochs: must be >= 1");
  if (!(cfg.adam_beta1 >= 0.0 && cfg.adam_beta1 < 1.0))
    flag("adam_beta1: must be in [0, 1)");
  if (!(cfg.adam_beta2 >= 0.0 && cfg.adam_beta2 < 1.0))
    flag("adam_beta2: must be in [0, 1)");
  if (!(cfg.adam_eps > 0.0)) flag("adam_eps: must be positive");
  if (cfg.log_every < 1) flag("log_every: must be >= 1");

  if (cfg.is_synthetic() || cfg.is_manifold()) {
    if (cfg.components < 1) flag("components: must be >= 1");
    if (!(cfg.freq_step > 0.0)) flag("freq_step: must be positive");
    if (cfg.n_train < 1 || cfg.n_val < 1 || cfg.n_test < 1)
      flag("n_train/n_val/n_test: must be >= 1");
    if (cfg.spectrum_grid < 2) flag("spectrum_grid: must be >= 2");
    const double max_freq = cfg.freq_step * static_cast<double>(cfg.components);
    if (max_freq > static_cast<double>(cfg.spectrum_grid / 2))
      flag("spectrum_grid: Nyquist bin below the highest target frequency");
  }
  if (cfg.is_manifold() && cfg.manifold_q < 0)
    flag("manifold_q: must be non-negative");
  if (cfg.task == "image" && cfg.image_path.empty())
    flag("image_path: required for the image task");
  if (cfg.task == "mnist") {
    if (cfg.mnist_train_images.empty() || cfg.mnist_train_labels.empty() ||
        cfg.mnist_test_images.empty() || cfg.mnist_test_labels.empty())
      flag("mnist_*: all four IDX file paths are required for the mnist task");
    if (cfg.mnist_beta < 0.0) flag("mnist_beta: must be >= 0");
    if (!(cfg.mnist_kappa > 0.0)) flag("mnist_kappa: must be positive");
  }
  return violations;
}

// ---------------------------------------------------------------------------

namespace {

SyntheticSpec make_synthetic_spec(const ExperimentConfig& cfg) {
  const int setting = cfg.task.back() - '0';
  return synthetic_setting(setting, cfg.components, cfg.freq_step, cfg.phase_seed);
}

ManifoldSpec make_manifold_spec(const ExperimentConfig& cfg) {
  ManifoldSpec spec;
  spec.petals = static_cast<int>(cfg.manifold_q);
  // Manifold setting 1 uses increasing amplitudes with slope 0.025,
  // setting 2 the x-varying rule.
  if (cfg.task == "manifold-1") {
    spec.target = synthetic_setting(4, cfg.components, cfg.freq_step, cfg.phase_seed);
    spec.target.amp_slope = 0.025;
  } else {
    spec.target = synthetic_setting(3, cfg.components, cfg.freq_step, cfg.phase_seed);
  }
  return spec;
}

DatasetSplit build_dataset(const ExperimentConfig& cfg, SyntheticSpec* synth_out) {
  if (cfg.is_synthetic()) {
    const SyntheticSpec spec = make_synthetic_spec(cfg);
    if (synth_out) *synth_out = spec;
    return build_synthetic_split(spec, cfg.n_train, cfg.n_val, cfg.n_test,
                                 cfg.val_seed, cfg.test_seed);
  }
  if (cfg.is_manifold()) {
    const ManifoldSpec spec = make_manifold_spec(cfg);
    if (synth_out) *synth_out = spec.target;
    return build_manifold_split(spec, cfg.n_train, cfg.n_val, cfg.n_test,
                                cfg.val_seed, cfg.test_seed);
  }
  if (cfg.task == "image") {
    if (!std::filesystem::exists(cfg.image_path))
      throw FileError("image file not found: " + cfg.image_path);
    return build_image_split(read_ppm_file(cfg.image_path));
  }
  // mnist
  for (const std::string& p :
       {cfg.mnist_train_images, cfg.mnist_train_labels, cfg.mnist_test_images,
        cfg.mnist_test_labels})
    if (!std::filesystem::exists(p)) throw FileError("IDX file not found: " + p);
  MnistTargetSpec spec;
  spec.beta = cfg.mnist_beta;
  spec.kappa = cfg.mnist_kappa;
  spec.n_train = cfg.n_train;
  spec.n_val = cfg.n_val;
  spec.n_test = cfg.n_test;
  return build_mnist_split(parse_idx_file(cfg.mnist_train_images),
                           parse_idx_file(cfg.mnist_train_labels),
                           parse_idx_file(cfg.mnist_test_images),
                           parse_idx_file(cfg.mnist_test_labels), spec,
                           cfg.split_seed);
}

Matrix snapshot_grid_inputs(const ExperimentConfig& cfg) {
  const std::size_t n = cfg.spectrum_grid;
  if (cfg.is_synthetic()) {
    Matrix grid(n, 1);
    for (std::size_t l = 0; l < n; ++l)
      grid.at(l, 0) = static_cast<double>(l) / static_cast<double>(n);
    return grid;
  }
  Matrix grid(n, 2);
  for (std::size_t l = 0; l < n; ++l) {
    const auto p = eval_gamma(static_cast<int>(cfg.manifold_q),
                              static_cast<double>(l) / static_cast<double>(n));
    grid.at(l, 0) = p[0];
    grid.at(l, 1) = p[1];
  }
  return grid;
}

json config_echo(const ExperimentConfig& cfg) {
  json j;
  j["task"] = cfg.task;
  j["method"] = cfg.method;
  j["seed"] = cfg.seed;
  j["grades"] = cfg.grades;
  j["hidden_widths"] = cfg.hidden_widths;
  j["t_max"] = cfg.t_max;
  j["t_min"] = cfg.t_min;
  j["epochs"] = cfg.epochs;
  j["batch_size"] = cfg.batch_size == kFullBatch
                        ? json("full")
                        : json(cfg.batch_size);
  j["adam_beta1"] = cfg.adam_beta1;
  j["adam_beta2"] = cfg.adam_beta2;
  j["adam_eps"] = cfg.adam_eps;
  if (cfg.is_synthetic() || cfg.is_manifold()) {
    j["components"] = cfg.components;
    j["freq_step"] = cfg.freq_step;
    j["phase_seed"] = cfg.phase_seed;
    j["n_train"] = cfg.n_train;
    j["n_val"] = cfg.n_val;
    j["n_test"] = cfg.n_test;
    j["val_seed"] = cfg.val_seed;
    j["test_seed"] = cfg.test_seed;
    j["snapshot_every"] = cfg.snapshot_every;
    j["spectrum_grid"] = cfg.spectrum_grid;
  }
  if (cfg.is_manifold()) j["manifold_q"] = cfg.manifold_q;
  if (cfg.task == "image") j["image_path"] = cfg.image_path;
  if (cfg.task == "mnist") {
    j["mnist_beta"] = cfg.mnist_beta;
    j["mnist_kappa"] = cfg.mnist_kappa;
    j["split_seed"] = cfg.split_seed;
    j["n_train"] = cfg.n_train;
    j["n_val"] = cfg.n_val;
    j["n_test"] = cfg.n_test;
  }
  return j;
}

MetricReport split_metrics(const ExperimentConfig& cfg, const DatasetSplit& data,
                           const Matrix& pred_train, const Matrix& pred_val,
                           const Matrix& pred_test) {
  MetricReport m;
  m.tr_rse = rse(pred_train, data.train.targets);
  m.va_rse = pred_val.rows > 0 ? rse(pred_val, data.validation.targets) : m.tr_rse;
  m.te_rse = pred_test.rows > 0 ? rse(pred_test, data.test.targets) : 0.0;
  if (cfg.task == "image") {
    m.tr_psnr = psnr_unit(data.train.targets.values, pred_train.values);
    if (pred_test.rows > 0)
      m.te_psnr = psnr_unit(data.test.targets.values, pred_test.values);
  }
  return m;
}

json metric_json(const MetricReport& m) {
  json j = {{"tr_rse", m.tr_rse}, {"va_rse", m.va_rse}, {"te_rse", m.te_rse}};
  const auto enc = [](double v) -> json {
    return std::isinf(v) ? json("+inf") : json(v);
  };
  if (m.tr_psnr) j["tr_psnr"] = enc(*m.tr_psnr);
  if (m.te_psnr) j["te_psnr"] = enc(*m.te_psnr);
  return j;
}

void write_predictions_csv(std::ostream& out, const ExperimentConfig& cfg,
                           const DatasetSplit& data,
                           const std::vector<Matrix>& per_grade_test) {
  out.precision(17);
  const bool with_inputs = cfg.task != "mnist";
  if (with_inputs)
    for (std::size_t c = 0; c < data.test.inputs.cols; ++c) out << 'x' << c << ',';
  else
    out << "index,";
  for (std::size_t c = 0; c < data.test.targets.cols; ++c) out << 'y' << c << ',';
  for (std::size_t g = 0; g < per_grade_test.size(); ++g) {
    for (std::size_t c = 0; c < data.test.targets.cols; ++c) {
      out << "pred_g" << (g + 1) << '_' << c;
      if (g + 1 < per_grade_test.size() || c + 1 < data.test.targets.cols)
        out << ',';
    }
  }
  out << '\n';
  for (std::size_t r = 0; r < data.test.inputs.rows; ++r) {
    if (with_inputs)
      for (std::size_t c = 0; c < data.test.inputs.cols; ++c)
        out << data.test.inputs.at(r, c) << ',';
    else
      out << r << ',';
    for (std::size_t c = 0; c < data.test.targets.cols; ++c)
      out << data.test.targets.at(r, c) << ',';
    for (std::size_t g = 0; g < per_grade_test.size(); ++g) {
      for (std::size_t c = 0; c < data.test.targets.cols; ++c) {
        out << per_grade_test[g].at(r, c);
        if (g + 1 < per_grade_test.size() || c + 1 < data.test.targets.cols)
          out << ',';
      }
    }
    out << '\n';
  }
}

void write_reconstruction_ppm(const std::string& path, const DatasetSplit& data,
                              const Matrix& pred_test) {
  const std::size_t w = std::stoul(data.provenance.fields.at("width"));
  const std::size_t h = std::stoul(data.provenance.fields.at("height"));
  Image img;
  img.width = w;
  img.height = h;
  img.rgb.resize(w * h * 3);
  for (std::size_t i = 0; i < pred_test.values.size(); ++i) {
    const double v = std::clamp(pred_test.values[i], 0.0, 1.0) * 255.0;
    img.rgb[i] = static_cast<std::uint8_t>(std::lround(v));
  }
  write_ppm_file(path, img);
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& raw, const std::string& out_dir) {
  const ExperimentConfig cfg = resolve_defaults(raw);
  {
    const auto violations = validate_config(cfg);
    if (!violations.empty()) {
      std::string msg = "invalid config:";
      for (const auto& v : violations) msg += "\n  " + v;
      throw ConfigError(msg);
    }
  }

  const auto t0 = std::chrono::steady_clock::now();
  std::filesystem::create_directories(out_dir);
  const auto path = [&](const char* name) {
    return (std::filesystem::path(out_dir) / name).string();
  };

  SyntheticSpec synth;
  const DatasetSplit data = build_dataset(cfg, &synth);
  const bool scalar_task = cfg.is_synthetic() || cfg.is_manifold();
  const std::size_t out_dim = data.train.targets.cols;

  std::ofstream log_file(path("train_log.jsonl"));
  if (!log_file.good()) throw FileError("cannot write to " + out_dir);
  RunOptions options;
  options.log = [&log_file](const std::string& line) { log_file << line << '\n'; };
  options.log_every = cfg.log_every;
  if (scalar_task && cfg.snapshot_every > 0) {
    options.snapshot_inputs = snapshot_grid_inputs(cfg);
    options.snapshot_every = cfg.snapshot_every;
  }

  RunResult result;
  std::vector<Matrix> per_grade_test;
  std::vector<double> grade_walls;
  std::vector<std::size_t> best_epochs;
  std::vector<std::size_t> snapshot_epochs;
  std::vector<std::vector<double>> snapshots;
  Matrix final_test;
  std::vector<double> grid_values;  // final predictor on the spectrum grid

  if (cfg.method == "mgdl") {
    std::vector<GradeSpec> grades(cfg.grades);
    for (std::size_t l = 0; l < cfg.grades; ++l) {
      grades[l].new_layer_widths = cfg.hidden_widths;
      grades[l].new_layer_widths.push_back(out_dim);
      grades[l].train.t_max = cfg.t_max;
      grades[l].train.t_min = cfg.t_min;
      grades[l].train.epochs = cfg.epochs;
      grades[l].train.batch_size = cfg.batch_size;
      grades[l].train.seed = Rng::derive(cfg.seed, l);
      grades[l].train.adam_beta1 = cfg.adam_beta1;
      grades[l].train.adam_beta2 = cfg.adam_beta2;
      grades[l].train.adam_eps = cfg.adam_eps;
    }
    MgdlResult run = run_mgdl(data, grades, options);
    if (scalar_task) {
      const Matrix grid_pred = predict(run.model, snapshot_grid_inputs(cfg));
      grid_values.assign(grid_pred.values.begin(), grid_pred.values.end());
    }
    for (std::size_t l = 0; l < cfg.grades; ++l) {
      result.per_grade.push_back(split_metrics(cfg, data, run.cumulative_train[l],
                                               run.cumulative_val[l],
                                               run.cumulative_test[l]));
      grade_walls.push_back(run.model.grades[l].wall_seconds);
      best_epochs.push_back(run.model.grades[l].best_epoch);
    }
    result.final = result.per_grade.back();
    result.residue_norms = run.residue_norms;
    result.monotonic_pass = run.monotonic.pass;
    per_grade_test = run.cumulative_test;
    final_test = run.cumulative_test.back();
    snapshot_epochs = run.snapshot_epochs;
    snapshots = run.snapshots;
  } else {
    TrainConfig tc;
    tc.t_max = cfg.t_max;
    tc.t_min = cfg.t_min;
    tc.epochs = cfg.epochs;
    tc.batch_size = cfg.batch_size;
    tc.seed = cfg.seed;
    tc.adam_beta1 = cfg.adam_beta1;
    tc.adam_beta2 = cfg.adam_beta2;
    tc.adam_eps = cfg.adam_eps;
    MlpSpec spec;
    spec.widths.push_back(data.train.inputs.cols);
    spec.widths.insert(spec.widths.end(), cfg.hidden_widths.begin(),
                       cfg.hidden_widths.end());
    spec.widths.push_back(out_dim);
    SgdlResult run = run_sgdl(data, spec, tc, options);
    if (scalar_task) {
      const Matrix grid_pred =
          batch_forward(spec, run.params, snapshot_grid_inputs(cfg));
      grid_values.assign(grid_pred.values.begin(), grid_pred.values.end());
    }
    result.per_grade.push_back(split_metrics(cfg, data, run.pred_train,
                                             run.pred_val, run.pred_test));
    result.final = result.per_grade.back();
    grade_walls.push_back(run.train.wall_seconds);
    best_epochs.push_back(run.train.best_epoch);
    per_grade_test.push_back(run.pred_test);
    final_test = run.pred_test;
    snapshot_epochs = run.snapshot_epochs;
    snapshots = run.snapshots;
  }

  // Final model spectrum + evolution for scalar tasks.
  if (scalar_task) {
    std::ofstream f(path("spectrum.csv"));
    write_spectrum_csv(f, one_side_spectrum(grid_values));
    if (!snapshots.empty()) {
      const EvolutionMatrix evo =
          record_evolution(snapshots, snapshot_epochs, synth);
      std::ofstream ef(path("evolution.csv"));
      write_evolution_csv(ef, evo);
    }
  }

  {
    std::ofstream f(path("predictions.csv"));
    write_predictions_csv(f, cfg, data, per_grade_test);
  }
  if (cfg.task == "image")
    write_reconstruction_ppm(path("reconstruction.ppm"), data, final_test);

  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  {
    json info;
    info["config"] = config_echo(cfg);
    info["provenance"] = {{"generator", data.provenance.generator},
                          {"fields", data.provenance.fields}};
    if (!data.provenance.phases.empty())
      info["provenance"]["phases"] = data.provenance.phases;
    info["wall_seconds"] = result.wall_seconds;
    info["per_grade_wall_seconds"] = grade_walls;
    info["best_epochs"] = best_epochs;
    std::ofstream f(path("run_info.json"));
    f << info.dump(2) << '\n';
  }

  // metrics.json last: its presence signals a completed run, and it holds
  // only deterministic fields.
  {
    json metrics;
    metrics["task"] = cfg.task;
    metrics["method"] = cfg.method;
    metrics["seed"] = cfg.seed;
    const json final_json = metric_json(result.final);
    for (auto it = final_json.begin(); it != final_json.end(); ++it)
      metrics[it.key()] = it.value();
    json per_grade = json::array();
    for (std::size_t g = 0; g < result.per_grade.size(); ++g) {
      json entry = metric_json(result.per_grade[g]);
      entry["grade"] = g + 1;
      per_grade.push_back(entry);
    }
    metrics["per_grade"] = per_grade;
    if (cfg.method == "mgdl") {
      metrics["residue_norms"] = result.residue_norms;
      metrics["monotonic_pass"] = result.monotonic_pass;
    }
    std::ofstream f(path("metrics.json"));
    if (!f.good()) throw FileError("cannot write metrics.json");
    f << metrics.dump(2) << '\n';
    if (!f.good()) throw FileError("failed writing metrics.json");
  }
  return result;
}

// ---------------------------------------------------------------------------

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) fields.push_back(item);
    if (first) {
      table.header = fields;
      first = false;
    } else {
      table.rows.push_back(fields);
    }
  }
  return table;
}

std::vector<double> read_samples_csv(std::istream& in) {
  const CsvTable table = read_csv(in);
  require(!table.rows.empty(), "read_samples_csv: no data rows");
  std::vector<double> samples;
  samples.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    require(!row.empty(), "read_samples_csv: empty row");
    samples.push_back(std::stod(row.back()));
  }
  return samples;
}

std::string report_table_csv(const std::vector<std::string>& run_dirs) {
  std::ostringstream out;
  out.precision(17);
  out << "run,task,method,t_max,t_min,batch_size,time_s,tr_rse,va_rse,te_rse,"
         "tr_psnr,te_psnr\n";
  for (const auto& dir : run_dirs) {
    const auto metrics_path = std::filesystem::path(dir) / "metrics.json";
    const auto info_path = std::filesystem::path(dir) / "run_info.json";
    if (!std::filesystem::exists(metrics_path))
      throw FileError("no metrics.json in " + dir);
    std::ifstream mf(metrics_path);
    const json metrics = json::parse(mf);
    json info;
    if (std::filesystem::exists(info_path)) {
      std::ifstream inf(info_path);
      info = json::parse(inf);
    }
    const json config = info.value("config", json::object());
    const auto get_or = [](const json& j, const char* key) -> std::string {
      if (!j.contains(key)) return "";
      const auto& v = j.at(key);
      return v.is_string() ? v.get<std::string>() : v.dump();
    };
    out << dir << ',' << get_or(metrics, "task") << ','
        << get_or(metrics, "method") << ',' << get_or(config, "t_max") << ','
        << get_or(config, "t_min") << ',' << get_or(config, "batch_size") << ','
        << get_or(info, "wall_seconds") << ',' << get_or(metrics, "tr_rse") << ','
        << get_or(metrics, "va_rse") << ',' << get_or(metrics, "te_rse") << ','
        << get_or(metrics, "tr_psnr") << ',' << get_or(metrics, "te_psnr")
        << '\n';
  }
  return out.str();
}

}  // namespace mgdl
