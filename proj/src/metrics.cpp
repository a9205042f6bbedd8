#include "mgdl/metrics.hpp"

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

namespace mgdl {

double rse(const Matrix& preds, const Matrix& targets) {
  require(preds.rows == targets.rows && preds.cols == targets.cols,
          "rse: shape mismatch");
  require(preds.rows >= 1, "rse: empty sets");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < preds.values.size(); ++i) {
    const double d = preds.values[i] - targets.values[i];
    num += d * d;
    den += targets.values[i] * targets.values[i];
  }
  require(den > 0.0, "rse: all-zero targets (undefined denominator)");
  return num / den;
}

double psnr(std::span<const double> truth, std::span<const double> estimate) {
  require(truth.size() == estimate.size() && !truth.empty(),
          "psnr: shape mismatch or empty rasters");
  double err = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double d = truth[i] - estimate[i];
    err += d * d;
  }
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 *
         std::log10(static_cast<double>(truth.size()) * 255.0 * 255.0 / err);
}

double psnr_unit(std::span<const double> truth, std::span<const double> estimate) {
  require(truth.size() == estimate.size() && !truth.empty(),
          "psnr_unit: shape mismatch or empty rasters");
  std::vector<double> t(truth.size()), e(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    t[i] = truth[i] * 255.0;
    e[i] = std::clamp(estimate[i] * 255.0, 0.0, 255.0);
  }
  return psnr(t, e);
}

std::string metric_report_json(const MetricReport& report) {
  nlohmann::json j = {{"tr_rse", report.tr_rse},
                      {"va_rse", report.va_rse},
                      {"te_rse", report.te_rse}};
  const auto encode_psnr = [](double v) -> nlohmann::json {
    if (std::isinf(v)) return "+inf";
    return v;
  };
  if (report.tr_psnr) j["tr_psnr"] = encode_psnr(*report.tr_psnr);
  if (report.te_psnr) j["te_psnr"] = encode_psnr(*report.te_psnr);
  return j.dump();
}

}  // namespace mgdl
