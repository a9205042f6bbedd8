#pragma once

#include <cstdint>

#include "mgdl/nn.hpp"

namespace mgdl {

/// batch_size value meaning one full-gradient update per epoch.
inline constexpr std::size_t kFullBatch = 0;

struct TrainConfig {
  double t_max = 1e-3;
  double t_min = 1e-3;
  std::size_t epochs = 1;
  std::size_t batch_size = kFullBatch;
  std::uint64_t seed = 0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;

  void validate() const {
    require(t_min > 0.0 && t_min <= t_max, "TrainConfig: need 0 < t_min <= t_max");
    require(epochs >= 1, "TrainConfig: epochs must be >= 1");
  }
};

/// Exponentially decaying learning rate t_k = t_max * exp(-gamma k) with
/// gamma = (1/K) ln(t_max/t_min); t_0 = t_max and t_K = t_min.
double lr_at_epoch(const TrainConfig& cfg, std::size_t k);

/// First and second moment buffers plus the step counter.
struct AdamState {
  MlpParams m;
  MlpParams v;
  std::int64_t step = 0;
};

AdamState make_adam_state(const MlpSpec& spec);

/// One bias-corrected Adam update in place; increments state.step.
void adam_step(MlpParams& params, const MlpParams& gradients, AdamState& state,
               double lr, const TrainConfig& cfg);

}  // namespace mgdl
