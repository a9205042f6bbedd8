#include "mgdl/nn.hpp"

#include <cmath>
#include <numeric>

namespace mgdl {

MlpParams zero_params(const MlpSpec& spec) {
  spec.validate();
  MlpParams p;
  const std::size_t depth = spec.depth();
  p.weights.reserve(depth);
  p.biases.reserve(depth);
  for (std::size_t j = 0; j < depth; ++j) {
    p.weights.emplace_back(spec.widths[j + 1], spec.widths[j]);
    p.biases.emplace_back(spec.widths[j + 1], 0.0);
  }
  return p;
}

MlpParams xavier_init(const MlpSpec& spec, Rng& rng) {
  MlpParams p = zero_params(spec);
  for (std::size_t j = 0; j < p.weights.size(); ++j) {
    const double fan_in = static_cast<double>(spec.widths[j]);
    const double fan_out = static_cast<double>(spec.widths[j + 1]);
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    for (double& w : p.weights[j].values) w = rng.uniform(-limit, limit);
  }
  return p;
}

MlpParams xavier_init(const MlpSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  return xavier_init(spec, rng);
}

namespace {

// Scratch buffers for one forward/backward pass; reused across samples so
// the hot loop does not allocate.
struct Workspace {
  std::vector<std::vector<double>> acts;    // acts[0] = input copy, then H_j
  std::vector<std::vector<double>> deltas;  // per-layer error terms

  void resize(const MlpSpec& spec) {
    acts.resize(spec.widths.size());
    deltas.resize(spec.depth());
    for (std::size_t j = 0; j < spec.widths.size(); ++j)
      acts[j].resize(spec.widths[j]);
    for (std::size_t j = 0; j < spec.depth(); ++j)
      deltas[j].resize(spec.widths[j + 1]);
  }
};

// y = W x + b
inline void affine(const Matrix& w, const std::vector<double>& b,
                   std::span<const double> x, std::vector<double>& y) {
  const std::size_t out = w.rows, in = w.cols;
  for (std::size_t i = 0; i < out; ++i) {
    double acc = b[i];
    const double* wr = w.values.data() + i * in;
    for (std::size_t k = 0; k < in; ++k) acc += wr[k] * x[k];
    y[i] = acc;
  }
}

inline void relu_in_place(std::vector<double>& v) {
  for (double& x : v)
    if (x < 0.0) x = 0.0;
}

// Runs the forward pass into ws.acts; acts[depth] is the network output.
void forward_into(const MlpSpec& spec, const MlpParams& params,
                  std::span<const double> x, Workspace& ws) {
  const std::size_t depth = spec.depth();
  std::copy(x.begin(), x.end(), ws.acts[0].begin());
  for (std::size_t j = 0; j < depth; ++j) {
    affine(params.weights[j], params.biases[j], ws.acts[j], ws.acts[j + 1]);
    if (j + 1 < depth) relu_in_place(ws.acts[j + 1]);
  }
}

// Backpropagates the residual (output - target) through one sample,
// accumulating parameter gradients of (1/2)||target - output||^2 into `grad`.
// Returns that per-sample loss term.
double backward_accumulate(const MlpSpec& spec, const MlpParams& params,
                           std::span<const double> x,
                           std::span<const double> target, Workspace& ws,
                           MlpParams& grad) {
  forward_into(spec, params, x, ws);
  const std::size_t depth = spec.depth();

  double loss = 0.0;
  auto& delta_out = ws.deltas[depth - 1];
  for (std::size_t i = 0; i < delta_out.size(); ++i) {
    const double diff = ws.acts[depth][i] - target[i];
    delta_out[i] = diff;
    loss += 0.5 * diff * diff;
  }

  for (std::size_t j = depth; j-- > 0;) {
    const auto& delta = ws.deltas[j];
    const auto& below = ws.acts[j];
    Matrix& gw = grad.weights[j];
    auto& gb = grad.biases[j];
    const std::size_t out = gw.rows, in = gw.cols;
    for (std::size_t i = 0; i < out; ++i) {
      const double d = delta[i];
      gb[i] += d;
      double* gwr = gw.values.data() + i * in;
      for (std::size_t k = 0; k < in; ++k) gwr[k] += d * below[k];
    }
    if (j == 0) break;
    // delta_{j-1} = (W_j^T delta_j) masked by ReLU'(H_j); ReLU'(0) := 0.
    auto& delta_prev = ws.deltas[j - 1];
    const Matrix& w = params.weights[j];
    for (std::size_t k = 0; k < in; ++k) {
      double acc = 0.0;
      if (below[k] > 0.0) {
        for (std::size_t i = 0; i < out; ++i)
          acc += w.values[i * in + k] * delta[i];
      }
      delta_prev[k] = acc;
    }
  }
  return loss;
}

}  // namespace

ForwardTrace forward(const MlpSpec& spec, const MlpParams& params,
                     std::span<const double> x) {
  spec.validate();
  require(x.size() == spec.input_dim(), "forward: input dimension mismatch");
  Workspace ws;
  ws.resize(spec);
  forward_into(spec, params, x, ws);
  ForwardTrace trace;
  trace.hidden.assign(ws.acts.begin() + 1, ws.acts.end() - 1);
  trace.output = ws.acts.back();
  return trace;
}

Matrix batch_forward(const MlpSpec& spec, const MlpParams& params,
                     const Matrix& inputs) {
  spec.validate();
  require(inputs.cols == spec.input_dim(), "batch_forward: input dim mismatch");
  Matrix out(inputs.rows, spec.output_dim());
  const std::int64_t n = static_cast<std::int64_t>(inputs.rows);
#pragma omp parallel
  {
    Workspace ws;
    ws.resize(spec);
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < n; ++r) {
      forward_into(spec, params, inputs.row(static_cast<std::size_t>(r)), ws);
      auto dst = out.row(static_cast<std::size_t>(r));
      std::copy(ws.acts.back().begin(), ws.acts.back().end(), dst.begin());
    }
  }
  return out;
}

Matrix batch_hidden_features(const MlpSpec& spec, const MlpParams& params,
                             const Matrix& inputs) {
  spec.validate();
  require(spec.depth() >= 2, "batch_hidden_features: network has no hidden layer");
  require(inputs.cols == spec.input_dim(),
          "batch_hidden_features: input dim mismatch");
  const std::size_t feat_dim = spec.widths[spec.depth() - 1];
  Matrix out(inputs.rows, feat_dim);
  const std::int64_t n = static_cast<std::int64_t>(inputs.rows);
#pragma omp parallel
  {
    Workspace ws;
    ws.resize(spec);
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < n; ++r) {
      forward_into(spec, params, inputs.row(static_cast<std::size_t>(r)), ws);
      const auto& h = ws.acts[spec.depth() - 1];
      auto dst = out.row(static_cast<std::size_t>(r));
      std::copy(h.begin(), h.end(), dst.begin());
    }
  }
  return out;
}

double mse_loss(const Matrix& preds, const Matrix& targets) {
  require(preds.rows == targets.rows && preds.cols == targets.cols,
          "mse_loss: shape mismatch");
  require(preds.rows >= 1, "mse_loss: empty batch");
  // Same fixed slot partition as batch_backward, so the value matches the
  // loss reported by the gradient kernel bit for bit.
  double slot_sums[kReduceSlots] = {};
  const std::size_t n = preds.rows;
#pragma omp parallel for schedule(static)
  for (std::int64_t s = 0; s < static_cast<std::int64_t>(kReduceSlots); ++s) {
    const std::size_t lo = static_cast<std::size_t>(s) * n / kReduceSlots;
    const std::size_t hi = (static_cast<std::size_t>(s) + 1) * n / kReduceSlots;
    double acc = 0.0;
    for (std::size_t r = lo; r < hi; ++r) {
      auto p = preds.row(r);
      auto t = targets.row(r);
      double sq = 0.0;
      for (std::size_t c = 0; c < preds.cols; ++c) {
        const double d = t[c] - p[c];
        sq += d * d;
      }
      acc += 0.5 * sq;
    }
    slot_sums[s] = acc;
  }
  double total = 0.0;
  for (double v : slot_sums) total += v;
  return total / static_cast<double>(n);
}

BackwardResult batch_backward(const MlpSpec& spec, const MlpParams& params,
                              const Matrix& inputs, const Matrix& targets,
                              std::span<const std::uint32_t> rows,
                              BackwardScratch* scratch) {
  spec.validate();
  require(inputs.cols == spec.input_dim(), "batch_backward: input dim mismatch");
  require(targets.cols == spec.output_dim(),
          "batch_backward: target dim mismatch");
  require(inputs.rows == targets.rows, "batch_backward: row count mismatch");
  const std::size_t n = rows.empty() ? inputs.rows : rows.size();
  require(n >= 1, "batch_backward: empty batch");

  BackwardScratch local;
  BackwardScratch& sc = scratch ? *scratch : local;
  if (sc.widths != spec.widths) {
    sc.widths = spec.widths;
    sc.slot_grads.assign(kReduceSlots, zero_params(spec));
  } else {
    for (auto& g : sc.slot_grads) g.set_zero();
  }
  std::vector<MlpParams>& slot_grads = sc.slot_grads;
  double slot_loss[kReduceSlots] = {};

#pragma omp parallel
  {
    Workspace ws;
    ws.resize(spec);
#pragma omp for schedule(static)
    for (std::int64_t s = 0; s < static_cast<std::int64_t>(kReduceSlots); ++s) {
      const std::size_t lo = static_cast<std::size_t>(s) * n / kReduceSlots;
      const std::size_t hi = (static_cast<std::size_t>(s) + 1) * n / kReduceSlots;
      double acc = 0.0;
      for (std::size_t i = lo; i < hi; ++i) {
        const std::size_t r = rows.empty() ? i : rows[i];
        acc += backward_accumulate(spec, params, inputs.row(r), targets.row(r),
                                   ws, slot_grads[s]);
      }
      slot_loss[s] = acc;
    }
  }

  BackwardResult result;
  result.gradients = zero_params(spec);
  double loss = 0.0;
  for (std::size_t s = 0; s < kReduceSlots; ++s) {
    loss += slot_loss[s];
    for (std::size_t j = 0; j < result.gradients.weights.size(); ++j) {
      auto& dst = result.gradients.weights[j].values;
      const auto& src = slot_grads[s].weights[j].values;
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
      auto& db = result.gradients.biases[j];
      const auto& sb = slot_grads[s].biases[j];
      for (std::size_t i = 0; i < db.size(); ++i) db[i] += sb[i];
    }
  }

  const double inv_n = 1.0 / static_cast<double>(n);
  for (auto& w : result.gradients.weights)
    for (double& v : w.values) v *= inv_n;
  for (auto& b : result.gradients.biases)
    for (double& v : b) v *= inv_n;
  result.loss = loss * inv_n;

  if (!std::isfinite(result.loss) || !result.gradients.all_finite())
    throw DivergenceError("batch_backward: non-finite loss or gradient");
  return result;
}

}  // namespace mgdl
