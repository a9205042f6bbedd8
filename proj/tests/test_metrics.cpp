#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "mgdl/metrics.hpp"
#include "mgdl/rng.hpp"

using namespace mgdl;

TEST_CASE("rse: worked examples") {
  Matrix y(2, 1), p(2, 1);
  y.at(0, 0) = 1.0;
  y.at(1, 0) = 2.0;
  p.at(0, 0) = 0.0;
  p.at(1, 0) = 2.0;
  CHECK(rse(p, y) == doctest::Approx(0.2));
  CHECK(rse(y, y) == 0.0);

  Matrix zero(2, 1);
  CHECK(rse(zero, y) == doctest::Approx(1.0));
  CHECK_THROWS_AS(rse(y, zero), std::invalid_argument);
}

TEST_CASE("rse: invariant under common scaling") {
  Rng rng(6);
  Matrix y(16, 2), p(16, 2);
  for (double& v : y.values) v = rng.uniform(-2.0, 2.0);
  for (double& v : p.values) v = rng.uniform(-2.0, 2.0);
  const double base = rse(p, y);
  for (double c : {-3.0, 0.5, 10.0}) {
    Matrix ys = y, ps = p;
    for (double& v : ys.values) v *= c;
    for (double& v : ps.values) v *= c;
    CHECK(rse(ps, ys) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("psnr: worked examples") {
  std::vector<double> truth(100, 200.0);
  std::vector<double> est(100, 200.0 - 255.0);
  CHECK(psnr(truth, est) == doctest::Approx(0.0).epsilon(1e-12));

  for (std::size_t i = 0; i < est.size(); ++i) est[i] = truth[i] - 25.5;
  CHECK(psnr(truth, est) == doctest::Approx(20.0).epsilon(1e-12));

  CHECK(std::isinf(psnr(truth, truth)));
}

TEST_CASE("psnr: strictly increases as the error shrinks") {
  std::vector<double> truth(64, 128.0);
  double prev = -1.0;
  for (double err : {100.0, 50.0, 10.0, 1.0, 0.1}) {
    std::vector<double> est(64, 128.0 - err);
    const double v = psnr(truth, est);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("psnr_unit: rescales and clamps model outputs") {
  const std::vector<double> truth = {1.0, 0.0, 0.5};
  const std::vector<double> overshoot = {1.4, -0.2, 0.5};  // clamps to 1, 0, .5
  CHECK(std::isinf(psnr_unit(truth, overshoot)));
  const std::vector<double> off = {0.9, 0.1, 0.5};
  CHECK(std::isfinite(psnr_unit(truth, off)));
}

TEST_CASE("metric report serializes to parseable JSON") {
  MetricReport m;
  m.tr_rse = 0.25;
  m.va_rse = 0.5;
  m.te_rse = 0.125;
  m.te_psnr = std::numeric_limits<double>::infinity();
  const auto j = nlohmann::json::parse(metric_report_json(m));
  CHECK(j.at("tr_rse").get<double>() == 0.25);
  CHECK(j.at("te_psnr").get<std::string>() == "+inf");
  CHECK_FALSE(j.contains("tr_psnr"));
  CHECK_FALSE(j.contains("wall_seconds"));
}
