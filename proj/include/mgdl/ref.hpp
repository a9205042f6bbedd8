#pragma once

#include "mgdl/nn.hpp"
#include "mgdl/spectrum.hpp"

namespace mgdl::ref {

/// Serial reference implementations of the data-parallel kernels, written
/// as straight-line loops without OpenMP or slot reductions. They exist to
/// cross-check the parallel kernels (tests) and measure their speedup
/// (benchmark); nothing in the production library calls them.

/// Straight-line evaluation of the network output.
std::vector<double> forward(const MlpSpec& spec, const MlpParams& params,
                            std::span<const double> x);

Matrix batch_forward(const MlpSpec& spec, const MlpParams& params,
                     const Matrix& inputs);

double mse_loss(const Matrix& preds, const Matrix& targets);

/// In-order per-sample backpropagation of the mean squared error.
BackwardResult batch_backward(const MlpSpec& spec, const MlpParams& params,
                              const Matrix& inputs, const Matrix& targets);

/// Direct O(N^2) DFT summation with complex accumulation.
SpectrumSeries one_side_spectrum(std::span<const double> samples);

}  // namespace mgdl::ref
