#pragma once

#include <functional>
#include <vector>

#include "mgdl/optim.hpp"

namespace mgdl {

/// Receives one JSON line per training epoch.
using LogSink = std::function<void(const std::string&)>;

/// Called after the update of selected epochs with the current parameters.
/// `epoch` is the 0-based epoch index within this training run.
using SnapshotHook = std::function<void(std::size_t epoch, const MlpParams&)>;

struct TrainHooks {
  LogSink log;                    // per-epoch JSONL lines
  SnapshotHook snapshot;          // spectrum-evolution capture
  std::size_t snapshot_every = 0; // 0 disables snapshots
  std::size_t log_every = 1;
  int grade = 0;                  // tag for log lines
};

struct TrainResult {
  MlpParams params;       // snapshot with the lowest validation loss
  std::size_t best_epoch = 0;
  std::vector<double> train_loss;  // exactly cfg.epochs entries
  std::vector<double> val_loss;    // exactly cfg.epochs entries
  double wall_seconds = 0.0;
};

/// Adam training of one network against (inputs, targets) with per-epoch
/// validation. Epoch k uses lr_at_epoch(cfg, k). With batch_size < N the
/// sample order is reshuffled once per epoch from `rng`; kFullBatch does one
/// full-gradient update per epoch. Returns the epoch snapshot with the
/// lowest validation loss (earliest on ties).
TrainResult train_network(const MlpSpec& spec, const Matrix& inputs,
                          const Matrix& targets, const Matrix& val_inputs,
                          const Matrix& val_targets, const TrainConfig& cfg,
                          Rng& rng, const TrainHooks& hooks = {});

}  // namespace mgdl
