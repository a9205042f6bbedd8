#include "mgdl/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

namespace mgdl {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

SpectrumSeries one_side_spectrum(std::span<const double> samples) {
  const std::size_t n = samples.size();
  require(n >= 2, "one_side_spectrum: need at least two samples");
  const std::size_t bins = n / 2 + 1;

  SpectrumSeries spec;
  spec.frequencies.resize(bins);
  spec.amplitudes.resize(bins);

  const double* f = samples.data();
  const double inv_n = 1.0 / static_cast<double>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(bins); ++k) {
    const double w = -kTwoPi * static_cast<double>(k) * inv_n;
    double re = 0.0, im = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      const double angle = w * static_cast<double>(l);
      re += f[l] * std::cos(angle);
      im += f[l] * std::sin(angle);
    }
    const double mag = std::sqrt(re * re + im * im);
    spec.frequencies[static_cast<std::size_t>(k)] = static_cast<double>(k);
    spec.amplitudes[static_cast<std::size_t>(k)] =
        (k == 0 ? mag : 2.0 * mag) * inv_n;
  }
  return spec;
}

std::size_t EvolutionMatrix::first_row_reaching(std::size_t col,
                                                double level) const {
  for (std::size_t r = 0; r < entries.rows; ++r)
    if (entries.at(r, col) >= level) return r;
  return std::numeric_limits<std::size_t>::max();
}

EvolutionMatrix record_evolution(const std::vector<std::vector<double>>& snapshots,
                                 const std::vector<std::size_t>& epochs,
                                 const SyntheticSpec& target) {
  require(!snapshots.empty(), "record_evolution: need at least one snapshot");
  require(snapshots.size() == epochs.size(),
          "record_evolution: one epoch label per snapshot");
  const std::size_t n = snapshots.front().size();
  for (const auto& s : snapshots)
    require(s.size() == n, "record_evolution: snapshots must share a grid");

  const std::size_t nyquist = n / 2;
  std::vector<std::size_t> bins(target.components);
  for (std::size_t j = 0; j < target.components; ++j) {
    const double freq = target.frequencies[j];
    const auto bin = static_cast<std::size_t>(std::llround(freq));
    require(std::abs(freq - static_cast<double>(bin)) < 1e-9,
            "record_evolution: target frequencies must be integer bins");
    require(bin <= nyquist, "record_evolution: frequency beyond Nyquist bin");
    bins[j] = bin;
  }

  // Normalization per column: |alpha_j|, or the target's own measured
  // amplitude when alpha varies with x.
  std::vector<double> norms(target.components);
  if (target.rule == AmplitudeRule::XVarying) {
    std::vector<double> grid(n);
    for (std::size_t l = 0; l < n; ++l)
      grid[l] = eval_lambda(target, static_cast<double>(l) / static_cast<double>(n));
    const SpectrumSeries target_spec = one_side_spectrum(grid);
    for (std::size_t j = 0; j < target.components; ++j)
      norms[j] = target_spec.amplitudes[bins[j]];
  } else {
    for (std::size_t j = 0; j < target.components; ++j)
      norms[j] = std::abs(target.amplitude(j + 1, 0.0));
  }
  for (double& v : norms)
    require(v > 0.0, "record_evolution: zero target amplitude at a tracked bin");

  EvolutionMatrix evo;
  evo.epochs = epochs;
  evo.frequencies.assign(target.frequencies.begin(), target.frequencies.end());
  evo.entries = Matrix(snapshots.size(), target.components);
  for (std::size_t r = 0; r < snapshots.size(); ++r) {
    const SpectrumSeries s = one_side_spectrum(snapshots[r]);
    for (std::size_t j = 0; j < target.components; ++j)
      evo.entries.at(r, j) = std::clamp(s.amplitudes[bins[j]] / norms[j], 0.0, 1.0);
  }
  return evo;
}

double carson_band_edge(double a, double b) {
  require(a >= 0.0 && b > 0.0, "carson_band_edge: need a >= 0 and b > 0");
  return (a * b + b) / kTwoPi;
}

double bessel_j(int n, double a) {
  if (n < 0) {
    const double jn = bessel_j(-n, a);
    return (-n) % 2 == 0 ? jn : -jn;
  }
  if (a == 0.0) return n == 0 ? 1.0 : 0.0;

  const double half = a / 2.0;
  // First term (a/2)^n / n!.
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= half / static_cast<double>(k);
  double sum = term;
  const double neg_q = -half * half;
  for (int m = 1; m < 512; ++m) {
    term *= neg_q / (static_cast<double>(m) * static_cast<double>(m + n));
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) break;
  }
  return sum;
}

double jacobi_anger_lhs(double a, double b, double x) {
  return std::cos(a * std::sin(b * x));
}

double jacobi_anger_series(double a, double b, double x, int n_max) {
  require(n_max >= 0, "jacobi_anger_series: n_max >= 0");
  double sum = 0.0;
  for (int n = -n_max; n <= n_max; ++n)
    sum += bessel_j(n, a) * std::cos(static_cast<double>(n) * b * x);
  return sum;
}

double band_energy_fraction(std::span<const double> samples, double edge) {
  const SpectrumSeries spec = one_side_spectrum(samples);
  double inside = 0.0, total = 0.0;
  for (std::size_t k = 0; k < spec.amplitudes.size(); ++k) {
    const double e = spec.amplitudes[k] * spec.amplitudes[k];
    total += e;
    if (spec.frequencies[k] <= edge) inside += e;
  }
  require(total > 0.0, "band_energy_fraction: zero-energy signal");
  return inside / total;
}

void write_spectrum_csv(std::ostream& out, const SpectrumSeries& spectrum) {
  out.precision(17);
  out << "frequency,amplitude\n";
  for (std::size_t k = 0; k < spectrum.frequencies.size(); ++k)
    out << spectrum.frequencies[k] << ',' << spectrum.amplitudes[k] << '\n';
}

void write_evolution_csv(std::ostream& out, const EvolutionMatrix& evolution) {
  out.precision(17);
  out << "epoch";
  for (double f : evolution.frequencies) out << ',' << f;
  out << '\n';
  for (std::size_t r = 0; r < evolution.entries.rows; ++r) {
    out << evolution.epochs[r];
    for (std::size_t c = 0; c < evolution.entries.cols; ++c)
      out << ',' << evolution.entries.at(r, c);
    out << '\n';
  }
}

}  // namespace mgdl
