#pragma once

#include <complex>
#include <map>
#include <ostream>
#include <span>
#include <vector>

#include "diurnal/activity.hpp"
#include "diurnal/curvedist.hpp"

namespace diurnal::spectral {

/// Forward DFT of a diurnal curve plus the amplitude/phase form of its
/// Fourier series over a 24 h period.
///
/// Sample b sits at the bin midpoint t_b = (b + 1/2)/4 h. Amplitudes use
/// the 2/N scaling (A_{N/2} with 1/N) and phases are referenced to
/// midnight, so that
///
///     x_b = A_0/2 + sum_{n=1}^{N/2} A_n cos(2 pi n t_b / P - phi_n)
///
/// holds exactly at full budget.
struct SpectralDecomposition {
    std::size_t sample_count = kBins;
    double period_hours = 24.0;
    std::vector<std::complex<double>> coefficients;  // X_k, k = 0..N-1
    std::vector<double> amplitudes;                  // A_n, n = 0..N/2
    std::vector<double> phases;                      // phi_n, n = 0..N/2

    double mean() const { return amplitudes[0] / 2.0; }
    std::size_t harmonic_count() const { return sample_count / 2; }
};

/// Unnormalised forward DFT, X_k = sum_n x_n exp(-i 2 pi k n / N).
std::vector<std::complex<double>> dft(std::span<const double> x);

SpectralDecomposition dft_forward(const DiurnalCurve& curve);

/// Harmonic indices (1..N/2) of the `m` largest amplitudes; ties go to the
/// lower index.
std::vector<std::size_t> top_harmonics(const SpectralDecomposition& spec, std::size_t m);

/// Mean plus the `m` largest-amplitude harmonics evaluated at the 96 bin
/// midpoints. Requires 1 <= m <= N/2.
DiurnalCurve reconstruct_top_m(const SpectralDecomposition& spec, std::size_t m);
/// Same without the lower bound on m; m = 0 yields the flat mean curve.
DiurnalCurve reconstruct_with_budget(const SpectralDecomposition& spec, std::size_t m);

struct BudgetSelection {
    std::size_t m = 1;
    std::size_t m_min = 1;
    std::size_t m_max = 4;
    /// distances[metric][m] for m in [0, m_max]; index 0 is the mean-only curve.
    std::map<curvedist::MetricKind, std::vector<double>> distances;
    /// m values each metric voted for.
    std::map<curvedist::MetricKind, std::vector<std::size_t>> votes;
};

/// Picks the harmonic budget. For every metric the distance D^m between the
/// curve and its top-m reconstruction is tabulated for m in [0, m_max]; the
/// metric votes for the m in [m_min, m_max] with the smallest ratio
/// D^m / D^(m-1), i.e. the budget after which further harmonics stop paying
/// off (0/0 counts as 1, so flat curves tie everywhere). The final budget is
/// the smallest of the most-voted values.
BudgetSelection select_m(const DiurnalCurve& curve,
                         std::span<const curvedist::MetricKind> metrics = curvedist::kAllMetrics,
                         std::size_t m_min = 1, std::size_t m_max = 4);

/// `n,amplitude,phase` for n = 0..N/2.
void write_decomposition_csv(std::ostream& out, const SpectralDecomposition& spec);

}  // namespace diurnal::spectral
