#pragma once

#include "mgdl/data.hpp"
#include "mgdl/train.hpp"

namespace mgdl {

/// One grade of multi-grade training: the widths of the shallow network
/// appended in this grade (hidden widths followed by the output width; its
/// input dim is the width of the previous grade's last hidden layer, or the
/// raw input dim for grade 1) plus the grade's training schedule.
struct GradeSpec {
  std::vector<std::size_t> new_layer_widths;
  TrainConfig train;

  void validate() const {
    require(new_layer_widths.size() >= 2,
            "GradeSpec: the trainable network needs depth >= 2");
    for (std::size_t w : new_layer_widths)
      require(w >= 1, "GradeSpec: widths must be >= 1");
    train.validate();
  }
};

/// A trained grade. The frozen feature stack feeding this grade is the
/// composition of the hidden stacks of all earlier records in the owning
/// ComposedModel; for grade 1 that prefix is the identity map.
struct GradeRecord {
  int grade = 0;  // 1-based index
  MlpSpec spec;   // the grade's shallow network, input dim included
  MlpParams params;
  std::vector<double> train_loss;  // one entry per epoch
  std::vector<double> val_loss;
  std::size_t best_epoch = 0;
  double residue_norm = 0.0;  // ||e^{l+1}|| over training samples
  double fn_norm = 0.0;       // ||g_l|| over training samples
  double wall_seconds = 0.0;
};

/// Ordered grade records realizing the sum-of-grades predictor.
struct ComposedModel {
  std::size_t input_dim = 0;
  std::vector<GradeRecord> grades;
};

/// Per-sample residual targets for the current grade.
struct ResidueSet {
  Matrix train;
  Matrix validation;
};

/// Applies the frozen hidden stacks of all completed grades in order,
/// returning the transformed inputs the next grade would consume.
Matrix compute_features(const ComposedModel& model, const Matrix& inputs);

/// Sum of per-grade outputs; features are computed once per grade boundary
/// and reused between the grade output and the next grade's input.
Matrix predict(const ComposedModel& model, const Matrix& inputs);

/// Trains one grade's shallow network against the residues by Adam with the
/// exponential learning-rate schedule, returning the epoch snapshot with the
/// lowest validation loss.
GradeRecord train_grade(const ResidueSet& residues, const Matrix& train_features,
                        const Matrix& val_features, const GradeSpec& spec,
                        std::uint64_t seed, const TrainHooks& hooks = {});

/// e^{l+1} = e^l - g_l, elementwise over both splits.
ResidueSet update_residue(const ResidueSet& residues, const Matrix& train_outputs,
                          const Matrix& val_outputs);

struct MonotonicPair {
  double prev_norm = 0.0;
  double next_norm = 0.0;
  double fn_norm = 0.0;
  bool zero_branch = false;
  bool ok = false;
};

struct MonotonicReport {
  bool pass = true;
  std::vector<MonotonicPair> pairs;
};

/// Empirical check of the residual monotonicity guarantee: each consecutive
/// pair must satisfy ||e_{i+1}|| < ||e_i|| * (1 + 1e-12), unless the grade
/// learned the zero function (||g|| <= 1e-10).
MonotonicReport check_residual_monotonic(std::span<const double> residue_norms,
                                         std::span<const double> fn_norms);

struct RunOptions {
  LogSink log;
  std::size_t log_every = 1;
  /// Inputs evaluated at every snapshot for spectrum-evolution capture;
  /// leave empty to disable. Requires a scalar output network.
  Matrix snapshot_inputs;
  std::size_t snapshot_every = 0;
};

struct MgdlResult {
  ComposedModel model;
  /// ||e^1||..||e^{L+1}|| over training samples (residue_norms[0] = ||y||).
  std::vector<double> residue_norms;
  std::vector<double> fn_norms;  // ||g_1||..||g_L||
  MonotonicReport monotonic;
  /// Cumulative predictions after each grade, per split.
  std::vector<Matrix> cumulative_train;
  std::vector<Matrix> cumulative_val;
  std::vector<Matrix> cumulative_test;
  /// Spectrum-evolution capture: composed prediction on snapshot_inputs.
  std::vector<std::size_t> snapshot_epochs;  // global epoch indices
  std::vector<std::vector<double>> snapshots;
};

/// Runs MGDL grade by grade: trains each grade on the running residues,
/// freezes it, updates residues and cached features, and logs the residual
/// monotonicity check (a warning, not an abort, on violation).
MgdlResult run_mgdl(const DatasetSplit& data, const std::vector<GradeSpec>& grades,
                    const RunOptions& options = {});

struct SgdlResult {
  MlpSpec spec;
  MlpParams params;
  TrainResult train;
  Matrix pred_train;
  Matrix pred_val;
  Matrix pred_test;
  std::vector<std::size_t> snapshot_epochs;
  std::vector<std::vector<double>> snapshots;
};

/// End-to-end Adam training of a single deep network on the raw targets,
/// with the same logging and snapshot contract as run_mgdl.
SgdlResult run_sgdl(const DatasetSplit& data, const MlpSpec& spec,
                    const TrainConfig& cfg, const RunOptions& options = {});

}  // namespace mgdl
