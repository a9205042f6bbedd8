#include "mgdl/ref.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace mgdl::ref {

std::vector<double> forward(const MlpSpec& spec, const MlpParams& params,
                            std::span<const double> x) {
  std::vector<double> h(x.begin(), x.end());
  for (std::size_t j = 0; j < spec.depth(); ++j) {
    const Matrix& w = params.weights[j];
    std::vector<double> next(w.rows);
    for (std::size_t i = 0; i < w.rows; ++i) {
      double acc = params.biases[j][i];
      for (std::size_t k = 0; k < w.cols; ++k) acc += w.at(i, k) * h[k];
      next[i] = acc;
    }
    if (j + 1 < spec.depth())
      for (double& v : next) v = std::max(v, 0.0);
    h = std::move(next);
  }
  return h;
}

Matrix batch_forward(const MlpSpec& spec, const MlpParams& params,
                     const Matrix& inputs) {
  Matrix out(inputs.rows, spec.output_dim());
  for (std::size_t r = 0; r < inputs.rows; ++r) {
    const auto y = mgdl::ref::forward(spec, params, inputs.row(r));
    for (std::size_t c = 0; c < y.size(); ++c) out.at(r, c) = y[c];
  }
  return out;
}

double mse_loss(const Matrix& preds, const Matrix& targets) {
  double sum = 0.0;
  for (std::size_t i = 0; i < preds.values.size(); ++i) {
    const double d = targets.values[i] - preds.values[i];
    sum += d * d;
  }
  return sum / (2.0 * static_cast<double>(preds.rows));
}

BackwardResult batch_backward(const MlpSpec& spec, const MlpParams& params,
                              const Matrix& inputs, const Matrix& targets) {
  const std::size_t depth = spec.depth();
  BackwardResult result;
  result.gradients = zero_params(spec);
  double loss = 0.0;

  for (std::size_t r = 0; r < inputs.rows; ++r) {
    // Forward pass keeping every activation.
    std::vector<std::vector<double>> acts(depth + 1);
    acts[0].assign(inputs.row(r).begin(), inputs.row(r).end());
    for (std::size_t j = 0; j < depth; ++j) {
      const Matrix& w = params.weights[j];
      acts[j + 1].resize(w.rows);
      for (std::size_t i = 0; i < w.rows; ++i) {
        double acc = params.biases[j][i];
        for (std::size_t k = 0; k < w.cols; ++k) acc += w.at(i, k) * acts[j][k];
        acts[j + 1][i] = (j + 1 < depth) ? std::max(acc, 0.0) : acc;
      }
    }

    std::vector<double> delta(spec.output_dim());
    for (std::size_t i = 0; i < delta.size(); ++i) {
      delta[i] = acts[depth][i] - targets.at(r, i);
      loss += 0.5 * delta[i] * delta[i];
    }

    for (std::size_t j = depth; j-- > 0;) {
      Matrix& gw = result.gradients.weights[j];
      for (std::size_t i = 0; i < gw.rows; ++i) {
        result.gradients.biases[j][i] += delta[i];
        for (std::size_t k = 0; k < gw.cols; ++k)
          gw.at(i, k) += delta[i] * acts[j][k];
      }
      if (j == 0) break;
      std::vector<double> prev(spec.widths[j], 0.0);
      const Matrix& w = params.weights[j];
      for (std::size_t k = 0; k < prev.size(); ++k) {
        if (acts[j][k] <= 0.0) continue;
        double acc = 0.0;
        for (std::size_t i = 0; i < w.rows; ++i) acc += w.at(i, k) * delta[i];
        prev[k] = acc;
      }
      delta = std::move(prev);
    }
  }

  const double inv_n = 1.0 / static_cast<double>(inputs.rows);
  for (auto& w : result.gradients.weights)
    for (double& v : w.values) v *= inv_n;
  for (auto& b : result.gradients.biases)
    for (double& v : b) v *= inv_n;
  result.loss = loss * inv_n;
  return result;
}

SpectrumSeries one_side_spectrum(std::span<const double> samples) {
  const std::size_t n = samples.size();
  const std::size_t bins = n / 2 + 1;
  SpectrumSeries spec;
  spec.frequencies.resize(bins);
  spec.amplitudes.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t l = 0; l < n; ++l) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) *
                           static_cast<double>(l) / static_cast<double>(n);
      acc += samples[l] * std::polar(1.0, angle);
    }
    spec.frequencies[k] = static_cast<double>(k);
    spec.amplitudes[k] =
        (k == 0 ? 1.0 : 2.0) * std::abs(acc) / static_cast<double>(n);
  }
  return spec;
}

}  // namespace mgdl::ref
