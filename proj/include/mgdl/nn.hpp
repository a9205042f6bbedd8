#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mgdl/matrix.hpp"
#include "mgdl/rng.hpp"

namespace mgdl {

/// Thrown when training produces non-finite values.
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Layer widths d_0..d_D of a fully connected ReLU network: d_0 inputs,
/// hidden layers with componentwise ReLU, and a final affine layer with no
/// activation. depth() == D is the number of affine layers.
struct MlpSpec {
  std::vector<std::size_t> widths;

  std::size_t depth() const { return widths.size() - 1; }
  std::size_t input_dim() const { return widths.front(); }
  std::size_t output_dim() const { return widths.back(); }

  void validate() const {
    require(widths.size() >= 2, "MlpSpec needs at least input and output widths");
    for (std::size_t w : widths) require(w >= 1, "MlpSpec widths must be >= 1");
  }
};

/// Weight matrices and bias vectors {W_j, b_j}; weights[j] is d_{j+1} x d_j.
/// Also reused as the gradient container (same shapes).
struct MlpParams {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;

  void set_zero() {
    for (auto& w : weights) std::fill(w.values.begin(), w.values.end(), 0.0);
    for (auto& b : biases) std::fill(b.begin(), b.end(), 0.0);
  }

  bool all_finite() const {
    for (const auto& w : weights)
      if (!w.all_finite()) return false;
    for (const auto& b : biases)
      for (double v : b)
        if (!std::isfinite(v)) return false;
    return true;
  }

  bool operator==(const MlpParams& other) const {
    if (weights.size() != other.weights.size()) return false;
    for (std::size_t j = 0; j < weights.size(); ++j)
      if (weights[j].values != other.weights[j].values ||
          biases[j] != other.biases[j])
        return false;
    return true;
  }
};

/// Zero-shaped parameter block conforming to a spec.
MlpParams zero_params(const MlpSpec& spec);

/// Glorot-uniform initialization: weights i.i.d. uniform on [-L, L] with
/// L = sqrt(6 / (fan_in + fan_out)); biases zero. Deterministic given seed.
MlpParams xavier_init(const MlpSpec& spec, std::uint64_t seed);
MlpParams xavier_init(const MlpSpec& spec, Rng& rng);

/// Activations of one forward pass: hidden[j] holds the post-ReLU layer
/// H_{j+1} (so hidden.size() == depth()-1) and output the final affine layer.
struct ForwardTrace {
  std::vector<std::vector<double>> hidden;
  std::vector<double> output;
};

ForwardTrace forward(const MlpSpec& spec, const MlpParams& params,
                     std::span<const double> x);

/// Row-parallel batch forward. Returns one output row per input row.
Matrix batch_forward(const MlpSpec& spec, const MlpParams& params,
                     const Matrix& inputs);

/// Row-parallel batch evaluation of the last hidden layer H_{D-1}.
/// Requires depth >= 2.
Matrix batch_hidden_features(const MlpSpec& spec, const MlpParams& params,
                             const Matrix& inputs);

/// Mean squared error loss (1/2N) sum_l ||y_l - yhat_l||^2.
double mse_loss(const Matrix& preds, const Matrix& targets);

struct BackwardResult {
  MlpParams gradients;
  double loss = 0.0;
};

/// Reusable slot buffers for batch_backward; callers in a training loop can
/// hold one to avoid reallocating per batch.
struct BackwardScratch {
  std::vector<std::size_t> widths;  // shape tag of the buffers
  std::vector<MlpParams> slot_grads;
};

/// Gradients of mse_loss over the selected rows (all rows when `rows` is
/// empty), plus the loss value itself. The ReLU subgradient at 0 is 0.
/// Sample contributions are accumulated over a fixed slot partition of the
/// batch, so the result is bit-identical for any OpenMP thread count.
BackwardResult batch_backward(const MlpSpec& spec, const MlpParams& params,
                              const Matrix& inputs, const Matrix& targets,
                              std::span<const std::uint32_t> rows = {},
                              BackwardScratch* scratch = nullptr);

/// Fixed number of reduction slots used by batch_backward and mse_loss-style
/// reductions; independent of thread count by design.
inline constexpr std::size_t kReduceSlots = 32;

}  // namespace mgdl
