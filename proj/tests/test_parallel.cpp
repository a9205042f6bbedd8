// Cross-checks between the OpenMP kernels and the serial reference
// implementations, plus thread-count invariance of the fixed-slot reduction.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include "helpers.hpp"

using namespace mgdl;
using namespace mgdl::testing;

TEST_CASE("batch_forward matches the serial reference bitwise") {
  Rng rng(101);
  for (int trial = 0; trial < 10; ++trial) {
    const MlpSpec spec = random_spec(rng, 16, 4);
    const MlpParams p = xavier_init(spec, rng.next());
    const Matrix inputs = random_matrix(rng, 64, spec.input_dim());
    const Matrix a = batch_forward(spec, p, inputs);
    const Matrix b = ref::batch_forward(spec, p, inputs);
    CHECK(a.values == b.values);
  }
}

TEST_CASE("batch_backward agrees with the serial reference") {
  Rng rng(102);
  for (int trial = 0; trial < 10; ++trial) {
    const MlpSpec spec = random_spec(rng, 16, 4);
    const MlpParams p = xavier_init(spec, rng.next());
    const Matrix inputs = random_matrix(rng, 128, spec.input_dim());
    const Matrix targets = random_matrix(rng, 128, spec.output_dim());
    const BackwardResult a = batch_backward(spec, p, inputs, targets);
    const BackwardResult b = ref::batch_backward(spec, p, inputs, targets);
    CHECK(rel_error(a.loss, b.loss) < 1e-12);
    for (std::size_t j = 0; j < a.gradients.weights.size(); ++j) {
      for (std::size_t i = 0; i < a.gradients.weights[j].values.size(); ++i)
        CHECK(rel_error(a.gradients.weights[j].values[i],
                        b.gradients.weights[j].values[i]) < 1e-11);
      for (std::size_t i = 0; i < a.gradients.biases[j].size(); ++i)
        CHECK(rel_error(a.gradients.biases[j][i], b.gradients.biases[j][i]) <
              1e-11);
    }
  }
}

TEST_CASE("mse_loss agrees with the serial reference") {
  Rng rng(103);
  const Matrix preds = random_matrix(rng, 333, 3);
  const Matrix targets = random_matrix(rng, 333, 3);
  CHECK(rel_error(mse_loss(preds, targets), ref::mse_loss(preds, targets)) <
        1e-13);
}

TEST_CASE("one_side_spectrum matches the serial reference within 1e-9") {
  Rng rng(104);
  for (std::size_t n : {std::size_t(64), std::size_t(257), std::size_t(1024)}) {
    std::vector<double> samples(n);
    for (double& v : samples) v = rng.uniform(-1.0, 1.0);
    const SpectrumSeries a = one_side_spectrum(samples);
    const SpectrumSeries b = ref::one_side_spectrum(samples);
    REQUIRE(a.amplitudes.size() == b.amplitudes.size());
    for (std::size_t k = 0; k < a.amplitudes.size(); ++k)
      CHECK(std::abs(a.amplitudes[k] - b.amplitudes[k]) < 1e-9);
  }
}

TEST_CASE("fixed-slot reduction is invariant to the thread count") {
  Rng rng(105);
  const MlpSpec spec{{3, 16, 16, 2}};
  const MlpParams p = xavier_init(spec, 55);
  const Matrix inputs = random_matrix(rng, 301, 3);
  const Matrix targets = random_matrix(rng, 301, 2);
  std::vector<double> samples(512);
  for (double& v : samples) v = rng.uniform(-1.0, 1.0);

  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const BackwardResult g1 = batch_backward(spec, p, inputs, targets);
  const SpectrumSeries s1 = one_side_spectrum(samples);
  const double l1 = mse_loss(inputs, inputs);
  omp_set_num_threads(4);
  const BackwardResult g4 = batch_backward(spec, p, inputs, targets);
  const SpectrumSeries s4 = one_side_spectrum(samples);
  const double l4 = mse_loss(inputs, inputs);
  omp_set_num_threads(saved);

  CHECK(g1.loss == g4.loss);
  CHECK(l1 == l4);
  for (std::size_t j = 0; j < g1.gradients.weights.size(); ++j) {
    CHECK(g1.gradients.weights[j].values == g4.gradients.weights[j].values);
    CHECK(g1.gradients.biases[j] == g4.gradients.biases[j]);
  }
  CHECK(s1.amplitudes == s4.amplitudes);
}
