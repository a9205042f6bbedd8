#pragma once

#include <optional>
#include <string>

#include "mgdl/matrix.hpp"

namespace mgdl {

/// Relative squared error sum ||yhat - y||^2 / sum ||y||^2. Rejects
/// all-zero targets (undefined denominator).
double rse(const Matrix& preds, const Matrix& targets);

/// Peak signal-to-noise ratio 10 log10(n * 255^2 / ||v - vhat||^2) over
/// flat rasters on the 0-255 scale, n = number of scalar entries. Returns
/// +infinity for an exact match.
double psnr(std::span<const double> truth, std::span<const double> estimate);

/// PSNR of model outputs in [0,1] against truth in [0,1]: both are rescaled
/// by 255 and the estimate clamped to [0,255] before scoring.
double psnr_unit(std::span<const double> truth, std::span<const double> estimate);

struct MetricReport {
  double tr_rse = 0.0;
  double va_rse = 0.0;
  double te_rse = 0.0;
  std::optional<double> tr_psnr;
  std::optional<double> te_psnr;
  double wall_seconds = 0.0;
};

/// JSON object with the metric fields (wall time excluded: it is reported
/// in the run log so metric files stay byte-deterministic).
std::string metric_report_json(const MetricReport& report);

}  // namespace mgdl
