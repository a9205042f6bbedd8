#pragma once

#include <cmath>

#include "mgdl/nn.hpp"
#include "mgdl/ref.hpp"
#include "mgdl/rng.hpp"

namespace mgdl::testing {

/// Random architecture with widths <= max_width and depth <= max_depth.
inline MlpSpec random_spec(Rng& rng, std::size_t max_width = 8,
                           std::size_t max_depth = 4) {
  const std::size_t depth = 1 + rng.below(max_depth);
  MlpSpec spec;
  for (std::size_t j = 0; j <= depth; ++j)
    spec.widths.push_back(1 + rng.below(max_width));
  return spec;
}

inline Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols,
                            double lo = -1.0, double hi = 1.0) {
  Matrix m(rows, cols);
  for (double& v : m.values) v = rng.uniform(lo, hi);
  return m;
}

/// Xavier weights plus random nonzero biases. Zero biases can park a unit
/// exactly on the ReLU kink (a dead narrow layer feeds exact zeros forward),
/// where central differences straddle the corner and disagree with the
/// ReLU'(0) = 0 convention; generic biases keep kinks measure-zero.
inline MlpParams random_params(const MlpSpec& spec, Rng& rng) {
  MlpParams p = xavier_init(spec, rng);
  for (auto& b : p.biases)
    for (double& v : b) v = rng.uniform(-0.5, 0.5);
  return p;
}

/// Loss probe for finite differences, evaluated through the serial
/// reference path so the oracle stays independent of the kernels under test.
inline double ref_loss(const MlpSpec& spec, const MlpParams& params,
                       const Matrix& inputs, const Matrix& targets) {
  return ref::mse_loss(ref::batch_forward(spec, params, inputs), targets);
}

/// Central finite-difference gradient of ref_loss w.r.t. one parameter.
template <typename Access>
double central_difference(const MlpSpec& spec, MlpParams& params,
                          const Matrix& inputs, const Matrix& targets,
                          Access&& param_ref, double step = 1e-6) {
  double& p = param_ref(params);
  const double saved = p;
  p = saved + step;
  const double up = ref_loss(spec, params, inputs, targets);
  p = saved - step;
  const double down = ref_loss(spec, params, inputs, targets);
  p = saved;
  return (up - down) / (2.0 * step);
}

inline double rel_error(double analytic, double numeric) {
  const double denom =
      std::max({std::abs(analytic), std::abs(numeric), 1e-8});
  return std::abs(analytic - numeric) / denom;
}

/// Checks every gradient coordinate of one random problem against central
/// finite differences; returns the worst relative error.
inline double max_gradient_error(const MlpSpec& spec, const MlpParams& params,
                                 const Matrix& inputs, const Matrix& targets) {
  const BackwardResult bw = batch_backward(spec, params, inputs, targets);
  MlpParams probe = params;
  double worst = 0.0;
  for (std::size_t j = 0; j < probe.weights.size(); ++j) {
    for (std::size_t i = 0; i < probe.weights[j].values.size(); ++i) {
      const double numeric = central_difference(
          spec, probe, inputs, targets,
          [j, i](MlpParams& p) -> double& { return p.weights[j].values[i]; });
      worst = std::max(worst, rel_error(bw.gradients.weights[j].values[i], numeric));
    }
    for (std::size_t i = 0; i < probe.biases[j].size(); ++i) {
      const double numeric = central_difference(
          spec, probe, inputs, targets,
          [j, i](MlpParams& p) -> double& { return p.biases[j][i]; });
      worst = std::max(worst, rel_error(bw.gradients.biases[j][i], numeric));
    }
  }
  return worst;
}

}  // namespace mgdl::testing
