// Compares the OpenMP kernels against the serial reference implementations:
// wall time, speedup, and the largest deviation between the two paths.

#include <chrono>
#include <cmath>
#include <cstdio>

#include <omp.h>

#include "mgdl/ref.hpp"

using namespace mgdl;

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <typename F>
double time_ms(F&& fn, int reps) {
  fn();  // warm up
  const double t0 = now_ms();
  for (int i = 0; i < reps; ++i) fn();
  return (now_ms() - t0) / reps;
}

double max_abs_diff(const MlpParams& a, const MlpParams& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.weights.size(); ++j) {
    for (std::size_t i = 0; i < a.weights[j].values.size(); ++i)
      m = std::max(m, std::abs(a.weights[j].values[i] - b.weights[j].values[i]));
    for (std::size_t i = 0; i < a.biases[j].size(); ++i)
      m = std::max(m, std::abs(a.biases[j][i] - b.biases[j][i]));
  }
  return m;
}

void bench_backward(const char* name, const MlpSpec& spec, std::size_t n,
                    int reps) {
  Rng rng(42);
  const MlpParams params = xavier_init(spec, 7);
  Matrix inputs(n, spec.input_dim());
  Matrix targets(n, spec.output_dim());
  for (double& v : inputs.values) v = rng.uniform(-1.0, 1.0);
  for (double& v : targets.values) v = rng.uniform(-1.0, 1.0);

  BackwardResult omp_result, ref_result;
  const double t_omp =
      time_ms([&] { omp_result = batch_backward(spec, params, inputs, targets); },
              reps);
  const double t_ref = time_ms(
      [&] { ref_result = ref::batch_backward(spec, params, inputs, targets); },
      reps);
  std::printf("%-28s omp %8.2f ms   serial %8.2f ms   speedup %.2fx   "
              "max|diff| %.2e\n",
              name, t_omp, t_ref, t_ref / t_omp,
              max_abs_diff(omp_result.gradients, ref_result.gradients));
}

void bench_spectrum(std::size_t n, int reps) {
  Rng rng(3);
  std::vector<double> samples(n);
  for (double& v : samples) v = rng.uniform(-1.0, 1.0);

  SpectrumSeries omp_result, ref_result;
  const double t_omp =
      time_ms([&] { omp_result = one_side_spectrum(samples); }, reps);
  const double t_ref =
      time_ms([&] { ref_result = ref::one_side_spectrum(samples); }, reps);
  double diff = 0.0;
  for (std::size_t k = 0; k < omp_result.amplitudes.size(); ++k)
    diff = std::max(diff,
                    std::abs(omp_result.amplitudes[k] - ref_result.amplitudes[k]));
  std::printf("%-28s omp %8.2f ms   serial %8.2f ms   speedup %.2fx   "
              "max|diff| %.2e\n",
              ("dft N=" + std::to_string(n)).c_str(), t_omp, t_ref, t_ref / t_omp,
              diff);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  bench_backward("backward 1-32-32-1 n=4096", MlpSpec{{1, 32, 32, 1}}, 4096, 5);
  bench_backward("backward 2-64-64-3 n=4096", MlpSpec{{2, 64, 64, 3}}, 4096, 5);
  bench_backward("backward 784-128-128-10 n=512", MlpSpec{{784, 128, 128, 10}},
                 512, 3);
  bench_spectrum(1024, 5);
  bench_spectrum(4096, 3);
  return 0;
}
