#include "diurnal/spectral.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace diurnal::spectral {

using curvedist::MetricKind;

std::vector<std::complex<double>> dft(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> twiddle(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double ang = -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
        twiddle[j] = {std::cos(ang), std::sin(ang)};
    }
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += x[j] * twiddle[(k * j) % n];
        out[k] = acc;
    }
    return out;
}

SpectralDecomposition dft_forward(const DiurnalCurve& curve) {
    SpectralDecomposition s;
    const std::size_t n = kBins;
    s.sample_count = n;
    s.coefficients = dft(curve.span());
    const std::size_t half = n / 2;
    s.amplitudes.assign(half + 1, 0.0);
    s.phases.assign(half + 1, 0.0);
    const double nn = static_cast<double>(n);
    s.amplitudes[0] = 2.0 * s.coefficients[0].real() / nn;
    for (std::size_t k = 1; k <= half; ++k) {
        const double scale = (k == half) ? 1.0 : 2.0;
        s.amplitudes[k] = scale * std::abs(s.coefficients[k]) / nn;
        // Shift the reference from sample index 0 to midnight (samples sit at bin midpoints).
        s.phases[k] = std::numbers::pi * static_cast<double>(k) / nn - std::arg(s.coefficients[k]);
    }
    return s;
}

std::vector<std::size_t> top_harmonics(const SpectralDecomposition& spec, std::size_t m) {
    std::vector<std::size_t> idx(spec.harmonic_count());
    std::iota(idx.begin(), idx.end(), std::size_t{1});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return spec.amplitudes[a] > spec.amplitudes[b];
    });
    idx.resize(std::min(m, idx.size()));
    std::sort(idx.begin(), idx.end());
    return idx;
}

DiurnalCurve reconstruct_with_budget(const SpectralDecomposition& spec, std::size_t m) {
    if (m > spec.harmonic_count())
        throw std::invalid_argument("harmonic budget " + std::to_string(m) + " exceeds " +
                                    std::to_string(spec.harmonic_count()));
    const auto keep = top_harmonics(spec, m);
    DiurnalCurve::Values v;
    const double nn = static_cast<double>(spec.sample_count);
    for (std::size_t b = 0; b < kBins; ++b) {
        double acc = spec.amplitudes[0] / 2.0;
        for (std::size_t n : keep) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(n) * (static_cast<double>(b) + 0.5) / nn;
            acc += spec.amplitudes[n] * std::cos(angle - spec.phases[n]);
        }
        v[b] = acc;
    }
    return DiurnalCurve(v, CurveKind::Spectral);
}

DiurnalCurve reconstruct_top_m(const SpectralDecomposition& spec, std::size_t m) {
    if (m < 1) throw std::invalid_argument("harmonic budget must be at least 1");
    return reconstruct_with_budget(spec, m);
}

BudgetSelection select_m(const DiurnalCurve& curve, std::span<const MetricKind> metrics, std::size_t m_min,
                         std::size_t m_max) {
    if (metrics.empty()) throw std::invalid_argument("select_m needs at least one metric");
    if (m_min < 1 || m_min > m_max || m_max > kBins / 2) throw std::invalid_argument("invalid harmonic budget range");
    const auto spec = dft_forward(curve);
    std::vector<DiurnalCurve> recon;
    recon.reserve(m_max + 1);
    for (std::size_t m = 0; m <= m_max; ++m) recon.push_back(reconstruct_with_budget(spec, m));

    double scale = 0.0;
    for (double x : curve.values()) scale = std::max(scale, std::abs(x));
    const double zero_tol = 1e-12 * (1.0 + scale);

    BudgetSelection sel;
    sel.m_min = m_min;
    sel.m_max = m_max;
    std::map<std::size_t, std::size_t> tally;
    for (MetricKind metric : metrics) {
        auto& d = sel.distances[metric];
        d.resize(m_max + 1);
        for (std::size_t m = 0; m <= m_max; ++m) {
            d[m] = curvedist::curve_distance(recon[m], curve, metric);
            if (d[m] <= zero_tol) d[m] = 0.0;
        }
        std::vector<double> ratio(m_max + 1, 0.0);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t m = m_min; m <= m_max; ++m) {
            if (d[m - 1] == 0.0) ratio[m] = d[m] == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
            else ratio[m] = d[m] / d[m - 1];
            best = std::min(best, ratio[m]);
        }
        auto& v = sel.votes[metric];
        for (std::size_t m = m_min; m <= m_max; ++m) {
            if (ratio[m] == best) {
                v.push_back(m);
                ++tally[m];
            }
        }
    }
    std::size_t top = 0;
    for (const auto& [m, count] : tally) top = std::max(top, count);
    for (const auto& [m, count] : tally) {
        if (count == top) {
            sel.m = m;
            break;
        }
    }
    return sel;
}

void write_decomposition_csv(std::ostream& out, const SpectralDecomposition& spec) {
    out << "n,amplitude,phase\n";
    for (std::size_t n = 0; n < spec.amplitudes.size(); ++n)
        out << n << ',' << format_number(spec.amplitudes[n]) << ',' << format_number(spec.phases[n]) << '\n';
}

}  // namespace diurnal::spectral
