// Acceptance suite: runs the numbered criteria and prints one pass/fail
// line per criterion. Criteria are selected by number on the command line;
// no arguments runs all of them. Exits nonzero if any selected criterion
// fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "mgdl/experiment.hpp"
#include "mgdl/grade.hpp"
#include "mgdl/spectrum.hpp"

#ifndef MGDL_PRESET_DIR
#define MGDL_PRESET_DIR "presets"
#endif
#ifndef MGDL_CLI_PATH
#define MGDL_CLI_PATH "mgdl"
#endif

using namespace mgdl;
namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Context {
  fs::path root;
  std::map<std::string, RunResult> runs;
  std::string detail;

  Context() {
    root = fs::temp_directory_path() / "mgdl_acceptance";
    fs::remove_all(root);
    fs::create_directories(root);
  }

  /// Runs a shipped preset once and caches the result.
  const RunResult& preset_run(const std::string& name,
                              const std::string& image_path = "") {
    auto it = runs.find(name);
    if (it != runs.end()) return it->second;
    ExperimentConfig cfg =
        parse_config_file((fs::path(MGDL_PRESET_DIR) / (name + ".cfg")).string());
    if (!image_path.empty()) apply_config_key(cfg, "image_path", image_path);
    RunResult result = run_experiment(cfg, (root / name).string());
    return runs.emplace(name, std::move(result)).first->second;
  }
};

Context& ctx() {
  static Context instance;
  return instance;
}

// ---------------------------------------------------------------------------

bool criterion_gradients() {
  Rng rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const MlpSpec spec = testing::random_spec(rng, 8, 4);
    const MlpParams params = testing::random_params(spec, rng);
    const Matrix inputs = testing::random_matrix(rng, 4, spec.input_dim());
    const Matrix targets = testing::random_matrix(rng, 4, spec.output_dim());
    worst = std::max(worst,
                     testing::max_gradient_error(spec, params, inputs, targets));
  }
  ctx().detail = "worst relative error " + std::to_string(worst);
  return worst < 1e-5;
}

bool criterion_single_grade_equivalence() {
  const SyntheticSpec target = synthetic_setting(1, 3, 2.0, 4);
  const DatasetSplit data = build_synthetic_split(target, 128, 32, 32, 0, 1);

  GradeSpec grade;
  grade.new_layer_widths = {16, 16, 1};
  grade.train.epochs = 200;
  grade.train.t_max = 5e-3;
  grade.train.t_min = 5e-4;
  grade.train.batch_size = 16;
  grade.train.seed = 77;
  const MgdlResult mg = run_mgdl(data, {grade});

  const MlpSpec spec{{1, 16, 16, 1}};
  const SgdlResult sg = run_sgdl(data, spec, grade.train);

  const bool params_equal = mg.model.grades[0].params == sg.params;
  const bool losses_equal = mg.model.grades[0].train_loss == sg.train.train_loss &&
                            mg.model.grades[0].val_loss == sg.train.val_loss;
  ctx().detail = std::string("parameters ") +
                 (params_equal ? "identical" : "DIFFER") + ", losses " +
                 (losses_equal ? "identical" : "DIFFER");
  return params_equal && losses_equal;
}

bool criterion_residual_monotonicity() {
  bool all_pass = true;
  std::string detail;
  for (int setting = 1; setting <= 4; ++setting) {
    const std::string name = "synthetic-" + std::to_string(setting);
    const RunResult& run = ctx().preset_run(name);
    detail += name + (run.monotonic_pass ? " ok [" : " VIOLATED [");
    char buf[64];
    for (double n : run.residue_norms) {
      std::snprintf(buf, sizeof(buf), "%.3g ", n);
      detail += buf;
    }
    detail += "] ";
    all_pass = all_pass && run.monotonic_pass;
  }
  ctx().detail = detail;
  return all_pass;
}

bool criterion_spectral_bias_gap() {
  const RunResult& mgdl_run = ctx().preset_run("synthetic-1");
  const RunResult& sgdl_run = ctx().preset_run("synthetic-1-sgdl");
  const double ratio = mgdl_run.final.tr_rse / sgdl_run.final.tr_rse;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "mgdl TrRSE %.3e vs sgdl %.3e, ratio %.4f",
                mgdl_run.final.tr_rse, sgdl_run.final.tr_rse, ratio);
  ctx().detail = buf;
  return ratio <= 0.1;
}

bool criterion_frequency_ordering() {
  ctx().preset_run("synthetic-1");
  std::ifstream in(ctx().root / "synthetic-1" / "evolution.csv");
  if (!in.good()) {
    ctx().detail = "evolution.csv missing";
    return false;
  }
  const CsvTable table = read_csv(in);
  const std::size_t cols = table.header.size() - 1;
  std::string detail = "first epoch reaching 0.9 per frequency:";
  bool ordered = true;
  std::size_t prev = 0;
  for (std::size_t j = 0; j < cols; ++j) {
    std::size_t first = std::numeric_limits<std::size_t>::max();
    for (const auto& row : table.rows) {
      if (std::stod(row[j + 1]) >= 0.9) {
        first = std::stoul(row[0]);
        break;
      }
    }
    detail += first == std::numeric_limits<std::size_t>::max()
                  ? " never"
                  : " " + std::to_string(first);
    if (j > 0 && first < prev) ordered = false;
    prev = first;
  }
  ctx().detail = detail;
  return ordered;
}

bool criterion_carson_jacobi() {
  Rng rng(5);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = rng.uniform01();
    worst = std::max(worst, std::abs(jacobi_anger_lhs(3.0, 2.0, x) -
                                     jacobi_anger_series(3.0, 2.0, x, 30)));
  }
  std::vector<double> samples(1024);
  for (std::size_t l = 0; l < samples.size(); ++l)
    samples[l] = std::cos(5.0 * std::sin(kTwoPi * static_cast<double>(l) / 1024.0));
  const double fraction =
      band_energy_fraction(samples, carson_band_edge(5.0, kTwoPi));
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "series error %.2e (<=1e-8), band energy %.4f (>=0.98)", worst,
                fraction);
  ctx().detail = buf;
  return worst <= 1e-8 && fraction >= 0.98;
}

bool criterion_spectrum_oracle() {
  Rng rng(6);
  double worst = 0.0;
  for (std::size_t n : {std::size_t(64), std::size_t(257), std::size_t(1024)}) {
    std::vector<double> samples(n);
    for (double& v : samples) v = rng.uniform(-1.0, 1.0);
    const SpectrumSeries fast = one_side_spectrum(samples);
    const SpectrumSeries direct = ref::one_side_spectrum(samples);
    for (std::size_t k = 0; k < fast.amplitudes.size(); ++k)
      worst = std::max(worst, std::abs(fast.amplitudes[k] - direct.amplitudes[k]));
  }
  std::vector<double> tones(512);
  for (std::size_t l = 0; l < tones.size(); ++l) {
    const double x = static_cast<double>(l) / 512.0;
    tones[l] = 2.0 * std::sin(kTwoPi * 3.0 * x) + 0.5 * std::sin(kTwoPi * 7.0 * x);
  }
  const SpectrumSeries s = one_side_spectrum(tones);
  const double tone_err =
      std::max(std::abs(s.amplitudes[3] - 2.0), std::abs(s.amplitudes[7] - 0.5));
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "max dft deviation %.2e (<=1e-9), tone error %.3f (<=0.05)",
                worst, tone_err);
  ctx().detail = buf;
  return worst <= 1e-9 && tone_err <= 0.05;
}

Image procedural_image(std::size_t size) {
  Image img;
  img.width = img.height = size;
  img.rgb.resize(size * size * 3);
  for (std::size_t r = 0; r < size; ++r) {
    for (std::size_t c = 0; c < size; ++c) {
      const double y = static_cast<double>(r) / static_cast<double>(size - 1);
      const double x = static_cast<double>(c) / static_cast<double>(size - 1);
      const double rad = std::hypot(x - 0.35, y - 0.45);
      const double red = 0.5 + 0.3 * std::sin(kTwoPi * 1.5 * x) * std::cos(kTwoPi * y) +
                         0.15 * std::sin(kTwoPi * 6 * x + 1.0) +
                         0.05 * std::sin(kTwoPi * 12 * (x + y));
      const double green = 0.45 + 0.25 * std::cos(kTwoPi * 2 * y) +
                           0.18 * std::sin(kTwoPi * 5 * (x - y) + 0.7) +
                           0.06 * std::cos(kTwoPi * 14 * y);
      const double blue = 0.5 + 0.35 * std::cos(kTwoPi * 10 * rad) * std::exp(-3 * rad) +
                          0.12 * std::sin(kTwoPi * 8 * x * y + 2.1) +
                          0.04 * std::sin(kTwoPi * 16 * x);
      const auto q = [](double v) {
        return static_cast<std::uint8_t>(
            std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
      };
      img.rgb[(r * size + c) * 3 + 0] = q(red);
      img.rgb[(r * size + c) * 3 + 1] = q(green);
      img.rgb[(r * size + c) * 3 + 2] = q(blue);
    }
  }
  return img;
}

bool criterion_image_psnr() {
  const fs::path image_path = ctx().root / "acceptance_image.ppm";
  write_ppm_file(image_path.string(), procedural_image(64));
  const RunResult& run = ctx().preset_run("image", image_path.string());

  bool tr_monotone = true;
  std::string detail = "TrPSNR";
  char buf[32];
  for (std::size_t g = 0; g < run.per_grade.size(); ++g) {
    const double v = run.per_grade[g].tr_psnr.value_or(-1.0);
    std::snprintf(buf, sizeof(buf), " %.2f", v);
    detail += buf;
    if (g > 0 && v < run.per_grade[g - 1].tr_psnr.value_or(-1.0))
      tr_monotone = false;
  }
  const double te_first = run.per_grade.front().te_psnr.value_or(-1.0);
  const double te_last = run.per_grade.back().te_psnr.value_or(-1.0);
  std::snprintf(buf, sizeof(buf), "; TePSNR %.2f -> %.2f", te_first, te_last);
  detail += buf;
  ctx().detail = detail;
  return tr_monotone && te_last >= te_first + 1.0;
}

bool criterion_idx_parser() {
  const std::vector<std::uint8_t> image_bytes = {
      0x00, 0x00, 0x08, 0x03, 0x00, 0x00, 0x00, 0x01, 0x00, 0x00,
      0x00, 0x02, 0x00, 0x00, 0x00, 0x02, 0x09, 0x08, 0x07, 0x06};
  const std::vector<std::uint8_t> label_bytes = {0x00, 0x00, 0x08, 0x01, 0x00,
                                                 0x00, 0x00, 0x03, 0x05, 0x00,
                                                 0x09};
  bool ok = true;
  try {
    const IdxTensor images = parse_idx(image_bytes);
    ok = ok && images.dims == std::vector<std::uint32_t>{1, 2, 2} &&
         images.data == std::vector<std::uint8_t>{0x09, 0x08, 0x07, 0x06};
    const IdxTensor labels = parse_idx(label_bytes);
    ok = ok && labels.dims == std::vector<std::uint32_t>{3} &&
         labels.data == std::vector<std::uint8_t>{0x05, 0x00, 0x09};
  } catch (const IdxError&) {
    ok = false;
  }

  const auto expect_kind = [](std::vector<std::uint8_t> bytes,
                              IdxError::Kind kind) {
    try {
      parse_idx(bytes);
      return false;
    } catch (const IdxError& e) {
      return e.kind == kind;
    }
  };
  const bool bad_magic = expect_kind(
      {0x12, 0x34, 0x08, 0x01, 0x00, 0x00, 0x00, 0x00}, IdxError::Kind::BadMagic);
  const bool bad_type = expect_kind(
      {0x00, 0x00, 0x0D, 0x01, 0x00, 0x00, 0x00, 0x00}, IdxError::Kind::BadType);
  const bool truncated =
      expect_kind({0x00, 0x00, 0x08, 0x03, 0x00, 0x00, 0x00, 0x01, 0x00, 0x00,
                   0x00, 0x02, 0x00, 0x00, 0x00, 0x02, 0x09, 0x08, 0x07},
                  IdxError::Kind::Truncated);
  ctx().detail = std::string("fixtures ") + (ok ? "ok" : "FAILED") +
                 ", distinct errors " +
                 (bad_magic && bad_type && truncated ? "ok" : "FAILED");
  return ok && bad_magic && bad_type && truncated;
}

bool criterion_metric_identities() {
  Matrix y(3, 1);
  y.at(0, 0) = 1.0;
  y.at(1, 0) = -2.0;
  y.at(2, 0) = 0.5;
  const bool rse_self = rse(y, y) == 0.0;
  const bool rse_zero = rse(Matrix(3, 1), y) == 1.0;

  std::vector<double> truth(64, 100.0), est(64, 100.0 - 25.5);
  const double v = psnr(truth, est);
  const bool psnr_exact = std::abs(v - 20.0) <= 1e-12;
  char buf[120];
  std::snprintf(buf, sizeof(buf), "rse identities %s, |psnr - 20 dB| = %.1e",
                rse_self && rse_zero ? "hold" : "BROKEN", std::abs(v - 20.0));
  ctx().detail = buf;
  return rse_self && rse_zero && psnr_exact;
}

bool criterion_determinism() {
  const fs::path dir_a = ctx().root / "det_a";
  const fs::path dir_b = ctx().root / "det_b";
  const std::string preset =
      (fs::path(MGDL_PRESET_DIR) / "smoke.cfg").string();
  const std::string base = std::string("\"") + MGDL_CLI_PATH + "\" run \"" +
                           preset + "\" --out \"";
  const int rc_a =
      std::system((base + dir_a.string() + "\" > /dev/null 2>&1").c_str());
  const int rc_b =
      std::system((base + dir_b.string() + "\" > /dev/null 2>&1").c_str());
  if (rc_a != 0 || rc_b != 0) {
    ctx().detail = "cli run failed";
    return false;
  }
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string a = slurp(dir_a / "metrics.json");
  const std::string b = slurp(dir_b / "metrics.json");
  ctx().detail = a.empty() ? "metrics.json missing"
                           : (a == b ? "metrics.json byte-identical"
                                     : "metrics.json DIFFERS");
  return !a.empty() && a == b;
}

struct Criterion {
  int id;
  const char* name;
  bool (*fn)();
};

const Criterion kCriteria[] = {
    {1, "gradient oracle (finite differences)", criterion_gradients},
    {2, "single-grade equivalence (mgdl L=1 vs sgdl)",
     criterion_single_grade_equivalence},
    {3, "residual monotonicity on synthetic presets",
     criterion_residual_monotonicity},
    {4, "spectral-bias gap (mgdl vs matched sgdl)", criterion_spectral_bias_gap},
    {5, "low-frequencies-first ordering", criterion_frequency_ordering},
    {6, "carson / jacobi-anger", criterion_carson_jacobi},
    {7, "spectrum oracle (direct dft)", criterion_spectrum_oracle},
    {8, "image task psnr progression", criterion_image_psnr},
    {9, "idx parser fixtures and errors", criterion_idx_parser},
    {10, "metric identities", criterion_metric_identities},
    {11, "run determinism (cli, bit-level)", criterion_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  bool all_pass = true;
  for (const Criterion& c : kCriteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    ctx().detail.clear();
    try {
      pass = c.fn();
    } catch (const std::exception& e) {
      ctx().detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::printf("criterion %2d: %s  %s — %s (%.1f s)\n", c.id,
                pass ? "PASS" : "FAIL", c.name, ctx().detail.c_str(), seconds);
    std::fflush(stdout);
    all_pass = all_pass && pass;
  }
  return all_pass ? 0 : 1;
}
