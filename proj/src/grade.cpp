#include "mgdl/grade.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace mgdl {

namespace {

double set_norm(const Matrix& m) { return std::sqrt(squared_norm(m)); }

MlpSpec grade_mlp_spec(std::size_t feature_dim, const GradeSpec& spec) {
  MlpSpec mlp;
  mlp.widths.reserve(spec.new_layer_widths.size() + 1);
  mlp.widths.push_back(feature_dim);
  mlp.widths.insert(mlp.widths.end(), spec.new_layer_widths.begin(),
                    spec.new_layer_widths.end());
  return mlp;
}

Matrix forward_or_empty(const MlpSpec& spec, const MlpParams& params,
                        const Matrix& inputs) {
  if (inputs.rows == 0) return Matrix(0, spec.output_dim());
  return batch_forward(spec, params, inputs);
}

}  // namespace

Matrix compute_features(const ComposedModel& model, const Matrix& inputs) {
  require(inputs.cols == model.input_dim || model.grades.empty(),
          "compute_features: input dim mismatch");
  Matrix features = inputs;
  for (const auto& rec : model.grades)
    features = batch_hidden_features(rec.spec, rec.params, features);
  return features;
}

Matrix predict(const ComposedModel& model, const Matrix& inputs) {
  require(!model.grades.empty(), "predict: model has no grades");
  require(inputs.cols == model.input_dim, "predict: input dim mismatch");

  const std::size_t out_dim = model.grades.front().spec.output_dim();
  Matrix total(inputs.rows, out_dim);
  Matrix features = inputs;
  for (std::size_t l = 0; l < model.grades.size(); ++l) {
    const auto& rec = model.grades[l];
    add_in_place(total, batch_forward(rec.spec, rec.params, features));
    if (l + 1 < model.grades.size())
      features = batch_hidden_features(rec.spec, rec.params, features);
  }
  return total;
}

GradeRecord train_grade(const ResidueSet& residues, const Matrix& train_features,
                        const Matrix& val_features, const GradeSpec& spec,
                        std::uint64_t seed, const TrainHooks& hooks) {
  spec.validate();
  require(residues.train.rows == train_features.rows,
          "train_grade: residues and features misaligned");
  require(residues.validation.rows == val_features.rows,
          "train_grade: validation residues and features misaligned");

  const MlpSpec mlp = grade_mlp_spec(train_features.cols, spec);
  Rng rng(seed);
  TrainResult trained =
      train_network(mlp, train_features, residues.train, val_features,
                    residues.validation, spec.train, rng, hooks);

  GradeRecord rec;
  rec.grade = hooks.grade > 0 ? hooks.grade : 1;
  rec.spec = mlp;
  rec.params = std::move(trained.params);
  rec.train_loss = std::move(trained.train_loss);
  rec.val_loss = std::move(trained.val_loss);
  rec.best_epoch = trained.best_epoch;
  rec.wall_seconds = trained.wall_seconds;

  const Matrix outputs = batch_forward(mlp, rec.params, train_features);
  rec.fn_norm = set_norm(outputs);
  rec.residue_norm = set_norm(residues.train - outputs);
  return rec;
}

ResidueSet update_residue(const ResidueSet& residues, const Matrix& train_outputs,
                          const Matrix& val_outputs) {
  ResidueSet next;
  next.train = residues.train - train_outputs;
  next.validation = residues.validation - val_outputs;
  return next;
}

MonotonicReport check_residual_monotonic(std::span<const double> residue_norms,
                                         std::span<const double> fn_norms) {
  require(residue_norms.size() >= 2,
          "check_residual_monotonic: need at least two norms");
  require(fn_norms.size() + 1 == residue_norms.size(),
          "check_residual_monotonic: one function norm per consecutive pair");
  MonotonicReport report;
  for (std::size_t i = 0; i + 1 < residue_norms.size(); ++i) {
    MonotonicPair pair;
    pair.prev_norm = residue_norms[i];
    pair.next_norm = residue_norms[i + 1];
    pair.fn_norm = fn_norms[i];
    pair.zero_branch = pair.fn_norm <= 1e-10;
    pair.ok =
        pair.zero_branch || pair.next_norm < pair.prev_norm * (1.0 + 1e-12);
    report.pass = report.pass && pair.ok;
    report.pairs.push_back(pair);
  }
  return report;
}

MgdlResult run_mgdl(const DatasetSplit& data, const std::vector<GradeSpec>& grades,
                    const RunOptions& options) {
  require(!grades.empty(), "run_mgdl: at least one grade required");
  for (const auto& g : grades) g.validate();
  const std::size_t out_dim = data.train.targets.cols;
  for (const auto& g : grades)
    require(g.new_layer_widths.back() == out_dim,
            "run_mgdl: grade output width must match target dim");

  const bool snapshots_on =
      options.snapshot_inputs.rows > 0 && options.snapshot_every > 0;
  if (snapshots_on)
    require(out_dim == 1, "run_mgdl: snapshots need a scalar output");

  MgdlResult result;
  result.model.input_dim = data.train.inputs.cols;

  Matrix features_train = data.train.inputs;
  Matrix features_val = data.validation.inputs;
  Matrix features_test = data.test.inputs;
  Matrix snapshot_features = options.snapshot_inputs;
  std::vector<double> snapshot_base(snapshot_features.rows, 0.0);

  ResidueSet residues{data.train.targets, data.validation.targets};
  result.residue_norms.push_back(set_norm(residues.train));

  Matrix cum_train(data.train.targets.rows, out_dim);
  Matrix cum_val(data.validation.targets.rows, out_dim);
  Matrix cum_test(data.test.targets.rows, out_dim);

  std::size_t epoch_offset = 0;
  for (std::size_t l = 0; l < grades.size(); ++l) {
    TrainHooks hooks;
    hooks.log = options.log;
    hooks.log_every = options.log_every;
    hooks.grade = static_cast<int>(l + 1);
    const MlpSpec mlp = grade_mlp_spec(features_train.cols, grades[l]);
    if (snapshots_on) {
      hooks.snapshot_every = options.snapshot_every;
      hooks.snapshot = [&, mlp](std::size_t epoch, const MlpParams& params) {
        const Matrix out = batch_forward(mlp, params, snapshot_features);
        std::vector<double> composed(snapshot_base);
        for (std::size_t r = 0; r < out.rows; ++r) composed[r] += out.at(r, 0);
        result.snapshot_epochs.push_back(epoch_offset + epoch);
        result.snapshots.push_back(std::move(composed));
      };
    }

    GradeRecord rec = train_grade(residues, features_train, features_val,
                                  grades[l], grades[l].train.seed, hooks);
    rec.grade = static_cast<int>(l + 1);

    const Matrix out_train = batch_forward(rec.spec, rec.params, features_train);
    const Matrix out_val = forward_or_empty(rec.spec, rec.params, features_val);
    const Matrix out_test = forward_or_empty(rec.spec, rec.params, features_test);

    add_in_place(cum_train, out_train);
    add_in_place(cum_val, out_val);
    add_in_place(cum_test, out_test);
    result.cumulative_train.push_back(cum_train);
    result.cumulative_val.push_back(cum_val);
    result.cumulative_test.push_back(cum_test);

    residues = update_residue(residues, out_train, out_val);
    result.residue_norms.push_back(set_norm(residues.train));
    result.fn_norms.push_back(rec.fn_norm);

    if (options.log) {
      nlohmann::json line = {{"grade", rec.grade},
                             {"summary", true},
                             {"residue_norm", rec.residue_norm},
                             {"fn_norm", rec.fn_norm},
                             {"best_epoch", rec.best_epoch},
                             {"wall_seconds", rec.wall_seconds}};
      options.log(line.dump());
    }

    if (l + 1 < grades.size()) {
      features_train = batch_hidden_features(rec.spec, rec.params, features_train);
      if (features_val.rows > 0)
        features_val = batch_hidden_features(rec.spec, rec.params, features_val);
      else
        features_val = Matrix(0, rec.spec.widths[rec.spec.depth() - 1]);
      if (features_test.rows > 0)
        features_test = batch_hidden_features(rec.spec, rec.params, features_test);
      else
        features_test = Matrix(0, rec.spec.widths[rec.spec.depth() - 1]);
      if (snapshots_on) {
        const Matrix snap_out =
            batch_forward(rec.spec, rec.params, snapshot_features);
        for (std::size_t r = 0; r < snap_out.rows; ++r)
          snapshot_base[r] += snap_out.at(r, 0);
        snapshot_features =
            batch_hidden_features(rec.spec, rec.params, snapshot_features);
      }
    }
    epoch_offset += grades[l].train.epochs;
    result.model.grades.push_back(std::move(rec));
  }

  result.monotonic =
      check_residual_monotonic(result.residue_norms, result.fn_norms);
  if (options.log && !result.monotonic.pass) {
    for (std::size_t i = 0; i < result.monotonic.pairs.size(); ++i) {
      const auto& p = result.monotonic.pairs[i];
      if (p.ok) continue;
      nlohmann::json line = {{"warning", "residual monotonicity violated"},
                             {"grade", i + 1},
                             {"prev_norm", p.prev_norm},
                             {"next_norm", p.next_norm},
                             {"fn_norm", p.fn_norm}};
      options.log(line.dump());
    }
  }
  return result;
}

SgdlResult run_sgdl(const DatasetSplit& data, const MlpSpec& spec,
                    const TrainConfig& cfg, const RunOptions& options) {
  spec.validate();
  require(spec.input_dim() == data.train.inputs.cols,
          "run_sgdl: input dim mismatch");
  require(spec.output_dim() == data.train.targets.cols,
          "run_sgdl: output dim mismatch");

  SgdlResult result;
  result.spec = spec;

  TrainHooks hooks;
  hooks.log = options.log;
  hooks.log_every = options.log_every;
  hooks.grade = 1;
  const bool snapshots_on =
      options.snapshot_inputs.rows > 0 && options.snapshot_every > 0;
  if (snapshots_on) {
    require(spec.output_dim() == 1, "run_sgdl: snapshots need a scalar output");
    hooks.snapshot_every = options.snapshot_every;
    hooks.snapshot = [&](std::size_t epoch, const MlpParams& params) {
      const Matrix out = batch_forward(spec, params, options.snapshot_inputs);
      std::vector<double> values(out.rows);
      for (std::size_t r = 0; r < out.rows; ++r) values[r] = out.at(r, 0);
      result.snapshot_epochs.push_back(epoch);
      result.snapshots.push_back(std::move(values));
    };
  }

  Rng rng(cfg.seed);
  result.train = train_network(spec, data.train.inputs, data.train.targets,
                               data.validation.inputs, data.validation.targets,
                               cfg, rng, hooks);
  result.params = result.train.params;
  result.pred_train = batch_forward(spec, result.params, data.train.inputs);
  result.pred_val = forward_or_empty(spec, result.params, data.validation.inputs);
  result.pred_test = forward_or_empty(spec, result.params, data.test.inputs);

  if (options.log) {
    nlohmann::json line = {
        {"grade", 1},
        {"summary", true},
        {"residue_norm", set_norm(data.train.targets - result.pred_train)},
        {"fn_norm", set_norm(result.pred_train)},
        {"best_epoch", result.train.best_epoch},
        {"wall_seconds", result.train.wall_seconds}};
    options.log(line.dump());
  }
  return result;
}

}  // namespace mgdl
