#include "mgdl/optim.hpp"

#include <cmath>

namespace mgdl {

double lr_at_epoch(const TrainConfig& cfg, std::size_t k) {
  cfg.validate();
  require(k <= cfg.epochs, "lr_at_epoch: epoch index out of range");
  const double gamma =
      std::log(cfg.t_max / cfg.t_min) / static_cast<double>(cfg.epochs);
  return cfg.t_max * std::exp(-gamma * static_cast<double>(k));
}

AdamState make_adam_state(const MlpSpec& spec) {
  AdamState s;
  s.m = zero_params(spec);
  s.v = zero_params(spec);
  return s;
}

namespace {

void adam_update_span(double* p, const double* g, double* m, double* v,
                      std::size_t n, double lr, double b1, double b2,
                      double eps, double bc1, double bc2, bool& finite) {
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = b1 * m[i] + (1.0 - b1) * g[i];
    v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
    const double m_hat = m[i] / bc1;
    const double v_hat = v[i] / bc2;
    p[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
    if (!std::isfinite(p[i])) finite = false;
  }
}

}  // namespace

void adam_step(MlpParams& params, const MlpParams& gradients, AdamState& state,
               double lr, const TrainConfig& cfg) {
  require(params.weights.size() == gradients.weights.size() &&
              params.weights.size() == state.m.weights.size(),
          "adam_step: shape mismatch");
  state.step += 1;
  const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(state.step));
  bool finite = true;
  for (std::size_t j = 0; j < params.weights.size(); ++j) {
    adam_update_span(params.weights[j].values.data(),
                     gradients.weights[j].values.data(),
                     state.m.weights[j].values.data(),
                     state.v.weights[j].values.data(),
                     params.weights[j].values.size(), lr, cfg.adam_beta1,
                     cfg.adam_beta2, cfg.adam_eps, bc1, bc2, finite);
    adam_update_span(params.biases[j].data(), gradients.biases[j].data(),
                     state.m.biases[j].data(), state.v.biases[j].data(),
                     params.biases[j].size(), lr, cfg.adam_beta1,
                     cfg.adam_beta2, cfg.adam_eps, bc1, bc2, finite);
  }
  if (!finite) throw DivergenceError("adam_step: non-finite parameter update");
}

}  // namespace mgdl
