#include "mgdl/datasets.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "mgdl/rng.hpp"

namespace mgdl {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> draw_phases(std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> phases(m);
  for (double& p : phases) p = rng.uniform(0.0, kTwoPi);
  return phases;
}

Matrix column_matrix(const std::vector<double>& values) {
  Matrix m(values.size(), 1);
  m.values = values;
  return m;
}

std::vector<double> uniform_grid(std::size_t n) {
  std::vector<double> xs(n);
  if (n == 1) {
    xs[0] = 0.0;
    return xs;
  }
  const double step = 1.0 / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) xs[i] = static_cast<double>(i) * step;
  return xs;
}

std::vector<double> uniform_draws(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> xs(n);
  for (double& x : xs) x = rng.uniform01();
  return xs;
}

}  // namespace

double SyntheticSpec::amplitude(std::size_t j, double x) const {
  const double dj = static_cast<double>(j);
  switch (rule) {
    case AmplitudeRule::Constant:
      return amp_scale;
    case AmplitudeRule::Decreasing:
      return amp_base - amp_slope * dj;
    case AmplitudeRule::XVarying:
      return std::exp(-x) * std::cos(dj * x);
    case AmplitudeRule::Increasing:
      return amp_slope * dj;
  }
  return 0.0;
}

SyntheticSpec synthetic_setting(int setting, std::size_t components,
                                double freq_step, std::uint64_t phase_seed) {
  require(setting >= 1 && setting <= 4, "synthetic_setting: setting in 1..4");
  require(components >= 1, "synthetic_setting: M >= 1");
  SyntheticSpec spec;
  spec.components = components;
  spec.phase_seed = phase_seed;
  switch (setting) {
    case 1:
      spec.rule = AmplitudeRule::Constant;
      spec.amp_scale = 1.0;
      break;
    case 2:
      spec.rule = AmplitudeRule::Decreasing;
      spec.amp_base = 1.05;
      spec.amp_slope = 0.05;
      break;
    case 3:
      spec.rule = AmplitudeRule::XVarying;
      break;
    case 4:
      spec.rule = AmplitudeRule::Increasing;
      spec.amp_slope = 0.05;
      break;
  }
  spec.frequencies.resize(components);
  for (std::size_t j = 1; j <= components; ++j)
    spec.frequencies[j - 1] = freq_step * static_cast<double>(j);
  spec.phases = draw_phases(components, phase_seed);
  return spec;
}

double eval_lambda(const SyntheticSpec& spec, double x) {
  require(spec.components >= 1, "eval_lambda: M >= 1");
  require(spec.frequencies.size() == spec.components &&
              spec.phases.size() == spec.components,
          "eval_lambda: frequencies/phases not sized to M");
  double sum = 0.0;
  for (std::size_t j = 1; j <= spec.components; ++j) {
    const double amp = spec.amplitude(j, x);
    sum += amp * std::sin(kTwoPi * spec.frequencies[j - 1] * x + spec.phases[j - 1]);
  }
  return sum;
}

namespace {

SampleSet synthetic_samples(const SyntheticSpec& spec,
                            const std::vector<double>& xs) {
  SampleSet set;
  set.inputs = column_matrix(xs);
  std::vector<double> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = eval_lambda(spec, xs[i]);
  set.targets = column_matrix(ys);
  return set;
}

SampleSet manifold_samples(const ManifoldSpec& spec,
                           const std::vector<double>& xs) {
  SampleSet set;
  set.inputs = Matrix(xs.size(), 2);
  std::vector<double> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto p = eval_gamma(spec.petals, xs[i]);
    set.inputs.at(i, 0) = p[0];
    set.inputs.at(i, 1) = p[1];
    ys[i] = eval_lambda(spec.target, xs[i]);
  }
  set.targets = column_matrix(ys);
  return set;
}

}  // namespace

DatasetSplit build_synthetic_split(const SyntheticSpec& spec, std::size_t n_train,
                                   std::size_t n_val, std::size_t n_test,
                                   std::uint64_t val_seed,
                                   std::uint64_t test_seed) {
  require(n_train >= 1 && n_val >= 1 && n_test >= 1,
          "build_synthetic_split: sizes >= 1");
  DatasetSplit split;
  split.train = synthetic_samples(spec, uniform_grid(n_train));
  split.validation = synthetic_samples(spec, uniform_draws(n_val, val_seed));
  split.test = synthetic_samples(spec, uniform_draws(n_test, test_seed));
  split.provenance.generator = "synthetic";
  split.provenance.fields = {{"phase_seed", std::to_string(spec.phase_seed)},
                             {"val_seed", std::to_string(val_seed)},
                             {"test_seed", std::to_string(test_seed)}};
  split.provenance.phases = spec.phases;
  return split;
}

std::array<double, 2> eval_gamma(int q, double x) {
  require(q >= 0, "eval_gamma: q must be non-negative");
  const double radius = 1.0 + std::sin(kTwoPi * q * x) / 2.0;
  return {radius * std::cos(kTwoPi * x), radius * std::sin(kTwoPi * x)};
}

DatasetSplit build_manifold_split(const ManifoldSpec& spec, std::size_t n_train,
                                  std::size_t n_val, std::size_t n_test,
                                  std::uint64_t val_seed,
                                  std::uint64_t test_seed) {
  require(spec.petals >= 0, "build_manifold_split: q must be non-negative");
  require(n_train >= 1 && n_val >= 1 && n_test >= 1,
          "build_manifold_split: sizes >= 1");
  DatasetSplit split;
  split.train = manifold_samples(spec, uniform_grid(n_train));
  split.validation = manifold_samples(spec, uniform_draws(n_val, val_seed));
  split.test = manifold_samples(spec, uniform_draws(n_test, test_seed));
  split.provenance.generator = "manifold";
  split.provenance.fields = {{"q", std::to_string(spec.petals)},
                             {"phase_seed", std::to_string(spec.target.phase_seed)},
                             {"val_seed", std::to_string(val_seed)},
                             {"test_seed", std::to_string(test_seed)}};
  split.provenance.phases = spec.target.phases;
  return split;
}

// ---------------------------------------------------------------------------
// PPM

namespace {

// Skips PNM whitespace and '#' comment lines, then reads one token.
std::string ppm_token(std::istream& in) {
  std::string tok;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (!std::isspace(c)) {
      break;
    }
    c = in.get();
  }
  while (c != EOF && !std::isspace(c)) {
    tok.push_back(static_cast<char>(c));
    c = in.get();
  }
  return tok;
}

}  // namespace

Image read_ppm(std::istream& in) {
  require(ppm_token(in) == "P6", "read_ppm: not a binary PPM (P6) stream");
  Image img;
  try {
    img.width = std::stoul(ppm_token(in));
    img.height = std::stoul(ppm_token(in));
    const unsigned maxval = std::stoul(ppm_token(in));
    require(maxval == 255, "read_ppm: only maxval 255 supported");
  } catch (const std::logic_error&) {
    throw std::invalid_argument("read_ppm: malformed header");
  }
  require(img.width >= 1 && img.height >= 1, "read_ppm: empty image");
  img.rgb.resize(img.pixels() * 3);
  in.read(reinterpret_cast<char*>(img.rgb.data()),
          static_cast<std::streamsize>(img.rgb.size()));
  require(static_cast<std::size_t>(in.gcount()) == img.rgb.size(),
          "read_ppm: truncated pixel data");
  return img;
}

Image read_ppm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "read_ppm_file: cannot open file");
  return read_ppm(in);
}

void write_ppm(std::ostream& out, const Image& img) {
  require(img.rgb.size() == img.pixels() * 3, "write_ppm: bad buffer size");
  out << "P6\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.rgb.data()),
            static_cast<std::streamsize>(img.rgb.size()));
}

void write_ppm_file(const std::string& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "write_ppm_file: cannot open file");
  write_ppm(out, img);
}

DatasetSplit build_image_split(const Image& img) {
  require(img.width >= 2 && img.height >= 2,
          "build_image_split: image must be at least 2x2");
  require(img.rgb.size() == img.pixels() * 3, "build_image_split: bad buffer");

  const std::size_t h = img.height, w = img.width;
  const auto coord = [&](std::size_t r, std::size_t c) -> std::array<double, 2> {
    return {static_cast<double>(r) / static_cast<double>(h - 1),
            static_cast<double>(c) / static_cast<double>(w - 1)};
  };
  const auto pixel = [&](std::size_t r, std::size_t c) -> std::array<double, 3> {
    const std::uint8_t* p = img.rgb.data() + (r * w + c) * 3;
    return {p[0] / 255.0, p[1] / 255.0, p[2] / 255.0};
  };

  const std::size_t train_rows = (h + 1) / 2, train_cols = (w + 1) / 2;
  SampleSet train;
  train.inputs = Matrix(train_rows * train_cols, 2);
  train.targets = Matrix(train_rows * train_cols, 3);
  std::size_t i = 0;
  for (std::size_t r = 0; r < h; r += 2) {
    for (std::size_t c = 0; c < w; c += 2, ++i) {
      const auto xy = coord(r, c);
      const auto rgb = pixel(r, c);
      train.inputs.at(i, 0) = xy[0];
      train.inputs.at(i, 1) = xy[1];
      for (std::size_t k = 0; k < 3; ++k) train.targets.at(i, k) = rgb[k];
    }
  }

  SampleSet test;
  test.inputs = Matrix(h * w, 2);
  test.targets = Matrix(h * w, 3);
  i = 0;
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c, ++i) {
      const auto xy = coord(r, c);
      const auto rgb = pixel(r, c);
      test.inputs.at(i, 0) = xy[0];
      test.inputs.at(i, 1) = xy[1];
      for (std::size_t k = 0; k < 3; ++k) test.targets.at(i, k) = rgb[k];
    }
  }

  DatasetSplit split;
  split.train = train;
  split.validation = train;  // the image protocol has no held-out split
  split.test = std::move(test);
  split.provenance.generator = "image";
  split.provenance.fields = {{"width", std::to_string(w)},
                             {"height", std::to_string(h)}};
  return split;
}

// ---------------------------------------------------------------------------
// IDX / MNIST

IdxTensor parse_idx(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4)
    throw IdxError(IdxError::Kind::Truncated, "parse_idx: header truncated");
  if (bytes[0] != 0x00 || bytes[1] != 0x00)
    throw IdxError(IdxError::Kind::BadMagic,
                   "parse_idx: bad magic (first two bytes must be zero)");
  if (bytes[2] != 0x08)
    throw IdxError(IdxError::Kind::BadType,
                   "parse_idx: unsupported type code (only unsigned byte 0x08)");
  const std::size_t ndims = bytes[3];
  const std::size_t header = 4 + 4 * ndims;
  if (bytes.size() < header)
    throw IdxError(IdxError::Kind::Truncated, "parse_idx: dimension list truncated");

  IdxTensor t;
  t.dims.resize(ndims);
  std::size_t payload = 1;
  for (std::size_t d = 0; d < ndims; ++d) {
    const std::size_t o = 4 + 4 * d;
    t.dims[d] = (std::uint32_t(bytes[o]) << 24) | (std::uint32_t(bytes[o + 1]) << 16) |
                (std::uint32_t(bytes[o + 2]) << 8) | std::uint32_t(bytes[o + 3]);
    payload *= t.dims[d];
  }
  if (bytes.size() - header != payload)
    throw IdxError(IdxError::Kind::Truncated,
                   "parse_idx: payload length does not match dimensions");
  t.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(header), bytes.end());
  return t;
}

IdxTensor parse_idx_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "parse_idx_file: cannot open file");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return parse_idx(bytes);
}

std::vector<double> mnist_target(std::span<const double> pixels, int label,
                                 const MnistTargetSpec& spec) {
  require(label >= 0 && label <= 9, "mnist_target: label must be 0..9");
  require(spec.beta >= 0.0 && spec.kappa > 0.0,
          "mnist_target: beta >= 0 and kappa > 0");
  double sq = 0.0;
  for (double p : pixels) sq += p * p;
  const double wave = std::sin(kTwoPi * spec.kappa * std::sqrt(sq));
  std::vector<double> target(10, 0.0);
  target[static_cast<std::size_t>(label)] = 1.0 + spec.beta * wave;
  return target;
}

namespace {

void fill_mnist_rows(const IdxTensor& images, const IdxTensor& labels,
                     std::span<const std::uint32_t> indices, bool perturb,
                     const MnistTargetSpec& spec, SampleSet& out) {
  const std::size_t pixel_count = images.item_size();
  out.inputs = Matrix(indices.size(), pixel_count);
  out.targets = Matrix(indices.size(), 10);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const std::size_t src = indices[i];
    const std::uint8_t* px = images.data.data() + src * pixel_count;
    auto row = out.inputs.row(i);
    for (std::size_t k = 0; k < pixel_count; ++k) row[k] = px[k] / 255.0;
    const int label = labels.data[src];
    std::vector<double> target;
    if (perturb) {
      target = mnist_target(row, label, spec);
    } else {
      target.assign(10, 0.0);
      require(label >= 0 && label <= 9, "build_mnist_split: label must be 0..9");
      target[static_cast<std::size_t>(label)] = 1.0;
    }
    auto dst = out.targets.row(i);
    std::copy(target.begin(), target.end(), dst.begin());
  }
}

}  // namespace

DatasetSplit build_mnist_split(const IdxTensor& train_images,
                               const IdxTensor& train_labels,
                               const IdxTensor& test_images,
                               const IdxTensor& test_labels,
                               const MnistTargetSpec& spec,
                               std::uint64_t split_seed) {
  require(train_images.count() == train_labels.count(),
          "build_mnist_split: image/label count mismatch (train)");
  require(test_images.count() == test_labels.count(),
          "build_mnist_split: image/label count mismatch (test)");
  require(train_images.count() == spec.n_train + spec.n_val,
          "build_mnist_split: training pool must equal n_train + n_val");
  require(test_images.count() == spec.n_test,
          "build_mnist_split: test pool must equal n_test");

  std::vector<std::uint32_t> order(train_images.count());
  std::iota(order.begin(), order.end(), 0u);
  Rng rng(split_seed);
  rng.shuffle(order);

  DatasetSplit split;
  fill_mnist_rows(train_images, train_labels,
                  std::span(order.data(), spec.n_train), true, spec, split.train);
  fill_mnist_rows(train_images, train_labels,
                  std::span(order.data() + spec.n_train, spec.n_val), true, spec,
                  split.validation);
  std::vector<std::uint32_t> test_order(test_images.count());
  std::iota(test_order.begin(), test_order.end(), 0u);
  fill_mnist_rows(test_images, test_labels, test_order, false, spec, split.test);

  split.provenance.generator = "mnist";
  split.provenance.fields = {{"split_seed", std::to_string(split_seed)},
                             {"beta", std::to_string(spec.beta)},
                             {"kappa", std::to_string(spec.kappa)}};
  return split;
}

// ---------------------------------------------------------------------------

namespace {

void write_rows(std::ostream& out, const SampleSet& set, const char* tag) {
  for (std::size_t r = 0; r < set.inputs.rows; ++r) {
    for (std::size_t c = 0; c < set.inputs.cols; ++c)
      out << set.inputs.at(r, c) << ',';
    for (std::size_t c = 0; c < set.targets.cols; ++c)
      out << set.targets.at(r, c) << ',';
    out << tag << '\n';
  }
}

}  // namespace

void export_split_csv(std::ostream& out, const DatasetSplit& split) {
  out.precision(17);
  for (std::size_t c = 0; c < split.train.inputs.cols; ++c) out << 'x' << c << ',';
  for (std::size_t c = 0; c < split.train.targets.cols; ++c) out << 'y' << c << ',';
  out << "split\n";
  write_rows(out, split.train, "train");
  write_rows(out, split.validation, "validation");
  write_rows(out, split.test, "test");
}

}  // namespace mgdl
