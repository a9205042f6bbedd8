#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "mgdl/data.hpp"

namespace mgdl {

// ---------------------------------------------------------------------------
// Synthetic oscillatory targets

enum class AmplitudeRule { Constant, Decreasing, XVarying, Increasing };

/// Superposition of M sinusoids: sum_j alpha_j sin(2 pi kappa_j x + phi_j)
/// on [0,1]. Phases are drawn uniform on [0, 2pi) from the library RNG at
/// construction so they are reproducible from phase_seed alone.
struct SyntheticSpec {
  std::size_t components = 20;  // M
  AmplitudeRule rule = AmplitudeRule::Constant;
  double amp_scale = 1.0;   // Constant: alpha_j = amp_scale
  double amp_base = 1.05;   // Decreasing: alpha_j = amp_base - amp_slope * j
  double amp_slope = 0.05;  // Increasing: alpha_j = amp_slope * j
  std::vector<double> frequencies;  // kappa_j; default 10j
  std::vector<double> phases;       // phi_j
  std::uint64_t phase_seed = 0;

  /// alpha_j at x (constant in x except for the x-varying rule, where
  /// alpha_j(x) = exp(-x) cos(j x)).
  double amplitude(std::size_t j, double x) const;
};

/// Builds the spec for one of the four amplitude settings: 1 constant
/// (alpha_j = 1), 2 decreasing (1.05 - 0.05 j), 3 x-varying
/// (exp(-x) cos(j x)), 4 increasing (0.05 j); kappa_j = freq_step * j.
SyntheticSpec synthetic_setting(int setting, std::size_t components,
                                double freq_step, std::uint64_t phase_seed);

double eval_lambda(const SyntheticSpec& spec, double x);

/// Train inputs on the uniform grid over [0,1] including both endpoints;
/// validation and test inputs i.i.d. uniform from seeds val_seed/test_seed.
DatasetSplit build_synthetic_split(const SyntheticSpec& spec,
                                   std::size_t n_train = 6000,
                                   std::size_t n_val = 2000,
                                   std::size_t n_test = 2000,
                                   std::uint64_t val_seed = 0,
                                   std::uint64_t test_seed = 1);

// ---------------------------------------------------------------------------
// Manifold embedding

/// Flower curve with q petals (unit circle for q = 0):
/// gamma_q(x) = [1 + sin(2 pi q x)/2] (cos 2 pi x, sin 2 pi x).
struct ManifoldSpec {
  int petals = 0;  // q >= 0
  SyntheticSpec target;
};

std::array<double, 2> eval_gamma(int q, double x);

/// Same grid/uniform protocol as the synthetic split but with inputs
/// gamma_q(x) and targets lambda(x); amplitudes of the x-varying rule are
/// evaluated at the pre-image parameter x.
DatasetSplit build_manifold_split(const ManifoldSpec& spec,
                                  std::size_t n_train = 12000,
                                  std::size_t n_val = 4000,
                                  std::size_t n_test = 4000,
                                  std::uint64_t val_seed = 0,
                                  std::uint64_t test_seed = 1);

// ---------------------------------------------------------------------------
// Image regression

struct Image {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

  std::size_t pixels() const { return width * height; }
};

/// Binary PPM (P6, maxval 255) reader/writer; the canonical ingest format.
Image read_ppm(std::istream& in);
Image read_ppm_file(const std::string& path);
void write_ppm(std::ostream& out, const Image& img);
void write_ppm_file(const std::string& path, const Image& img);

/// Train set: pixels at even row and even column indices (a quarter of the
/// image); test set: all pixels. Inputs are (row, col) normalized to [0,1]^2
/// and targets RGB normalized to [0,1]^3. The validation set equals the
/// train set (the protocol selects by PSNR on the grids it has).
DatasetSplit build_image_split(const Image& img);

// ---------------------------------------------------------------------------
// MNIST with a radial-wave target perturbation

struct IdxError : std::runtime_error {
  enum class Kind { BadMagic, BadType, Truncated };
  Kind kind;
  IdxError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

struct IdxTensor {
  std::vector<std::uint32_t> dims;
  std::vector<std::uint8_t> data;

  std::size_t count() const { return dims.empty() ? 0 : dims[0]; }
  std::size_t item_size() const {
    std::size_t s = 1;
    for (std::size_t i = 1; i < dims.size(); ++i) s *= dims[i];
    return s;
  }
};

/// Parses the big-endian IDX tensor format (unsigned-byte payloads only).
IdxTensor parse_idx(std::span<const std::uint8_t> bytes);
IdxTensor parse_idx_file(const std::string& path);

/// Radial-wave target: tau(x) = onehot(label) * (1 + beta sin(2 pi kappa ||x||)).
struct MnistTargetSpec {
  double beta = 1.0;
  double kappa = 1.0;
  std::size_t n_train = 45000;
  std::size_t n_val = 15000;
  std::size_t n_test = 10000;
};

/// The perturbed one-hot target for one image (pixels already in [0,1]).
std::vector<double> mnist_target(std::span<const double> pixels, int label,
                                 const MnistTargetSpec& spec);

/// Pixels scaled to [0,1]; train/val targets perturbed by the radial wave;
/// test targets are the clean one-hot labels. The train/val split is a
/// seeded shuffle of the training pool.
DatasetSplit build_mnist_split(const IdxTensor& train_images,
                               const IdxTensor& train_labels,
                               const IdxTensor& test_images,
                               const IdxTensor& test_labels,
                               const MnistTargetSpec& spec,
                               std::uint64_t split_seed);

// ---------------------------------------------------------------------------

/// Writes all three splits as CSV with a header row: input columns, target
/// columns, and a trailing split tag.
void export_split_csv(std::ostream& out, const DatasetSplit& split);

}  // namespace mgdl
