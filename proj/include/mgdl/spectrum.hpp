#pragma once

#include <iosfwd>

#include "mgdl/datasets.hpp"

namespace mgdl {

/// One-side amplitude spectrum: integer frequency bins k = 0..floor(N/2)
/// (cycles per unit interval) with non-negative amplitudes.
struct SpectrumSeries {
  std::vector<double> frequencies;
  std::vector<double> amplitudes;
};

/// Direct DFT of samples taken on the uniform grid x_l = l/N over [0,1).
/// Amplitude convention: (2/N)|sum_l f_l e^{-i 2 pi k l / N}| for k >= 1 and
/// (1/N)|sum_l f_l| at DC, so a unit-amplitude integer-frequency sine reads
/// 1.0 at its bin. Bins run over k = 0..floor(N/2).
SpectrumSeries one_side_spectrum(std::span<const double> samples);

/// Learned-over-target amplitude ratios at the target frequencies, clipped
/// to [0,1]; one row per recorded snapshot.
struct EvolutionMatrix {
  std::vector<std::size_t> epochs;        // row labels
  std::vector<double> frequencies;        // column labels (kappa_j)
  Matrix entries;                          // rows x frequencies, in [0,1]

  /// First row index whose entry at column j reaches `level`, or SIZE_MAX.
  std::size_t first_row_reaching(std::size_t col, double level) const;
};

/// Computes the evolution matrix from grid evaluations of model snapshots
/// (each snapshot sampled on x_l = l/N). Normalizes by |alpha_j|, except for
/// the x-varying amplitude rule, where the target's own measured amplitude
/// at kappa_j on the same grid is used. Frequencies beyond the Nyquist bin
/// floor(N/2) are rejected.
EvolutionMatrix record_evolution(const std::vector<std::vector<double>>& snapshots,
                                 const std::vector<std::size_t>& epochs,
                                 const SyntheticSpec& target);

/// Carson rule band edge (ab + b) / (2 pi): at least 98% of the energy of
/// cos(a sin(bx)) lies at frequencies up to this value.
double carson_band_edge(double a, double b);

/// Bessel function of the first kind J_n(a) via its ascending power series,
/// summed until |term| < 1e-16 |partial sum|. Exact enough for |a| <= 10.
double bessel_j(int n, double a);

/// Left-hand side of the composition identity: cos(a sin(bx)).
double jacobi_anger_lhs(double a, double b, double x);

/// Truncated harmonic expansion sum_{n=-n_max}^{n_max} J_n(a) cos(n b x).
double jacobi_anger_series(double a, double b, double x, int n_max);

/// Fraction of spectral energy (sum of squared amplitudes) at bins with
/// frequency <= edge, relative to the total.
double band_energy_fraction(std::span<const double> samples, double edge);

void write_spectrum_csv(std::ostream& out, const SpectrumSeries& spectrum);
void write_evolution_csv(std::ostream& out, const EvolutionMatrix& evolution);

}  // namespace mgdl
