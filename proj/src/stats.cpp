#include "diurnal/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "diurnal/common.hpp"
#include "diurnal/rng.hpp"

namespace diurnal::stats {

std::string_view to_string(Method m) {
    switch (m) {
        case Method::Dip: return "dip";
        case Method::MannWhitneyU: return "mann_whitney_u";
        case Method::Spearman: return "spearman";
        case Method::ChiSquare: return "chi_square";
    }
    return "dip";
}

std::string_view to_string(Alternative a) {
    switch (a) {
        case Alternative::TwoSided: return "two-sided";
        case Alternative::Less: return "less";
        case Alternative::Greater: return "greater";
    }
    return "two-sided";
}

std::vector<double> midranks(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
        i = j + 1;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Dip statistic: greatest convex minorant / least concave majorant cycling
// of Hartigan & Hartigan (1985), 1-based indexing as in the original.

namespace {

double dip_sorted(const std::vector<double>& sorted) {
    const int n = static_cast<int>(sorted.size());
    if (n < 4 || sorted.front() == sorted.back()) return n >= 1 && sorted.front() == sorted.back() ? 0.0 : 0.0;
    std::vector<double> x(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i) + 1] = sorted[static_cast<std::size_t>(i)];
    std::vector<int> mn(static_cast<std::size_t>(n) + 1), mj(static_cast<std::size_t>(n) + 1),
        gcm(static_cast<std::size_t>(n) + 2), lcm(static_cast<std::size_t>(n) + 2);
    auto X = [&](int i) { return x[static_cast<std::size_t>(i)]; };
    auto& MN = mn;
    auto& MJ = mj;

    MN[1] = 1;
    for (int j = 2; j <= n; ++j) {
        MN[static_cast<std::size_t>(j)] = j - 1;
        while (true) {
            const int mnj = MN[static_cast<std::size_t>(j)];
            const int mnmnj = MN[static_cast<std::size_t>(mnj)];
            if (mnj == 1 || (X(j) - X(mnj)) * (mnj - mnmnj) < (X(mnj) - X(mnmnj)) * (j - mnj)) break;
            MN[static_cast<std::size_t>(j)] = mnmnj;
        }
    }
    MJ[static_cast<std::size_t>(n)] = n;
    for (int k = n - 1; k >= 1; --k) {
        MJ[static_cast<std::size_t>(k)] = k + 1;
        while (true) {
            const int mjk = MJ[static_cast<std::size_t>(k)];
            const int mjmjk = MJ[static_cast<std::size_t>(mjk)];
            if (mjk == n || (X(k) - X(mjk)) * (mjk - mjmjk) < (X(mjk) - X(mjmjk)) * (k - mjk)) break;
            MJ[static_cast<std::size_t>(k)] = mjmjk;
        }
    }

    auto G = [&](int i) -> int& { return gcm[static_cast<std::size_t>(i)]; };
    auto L = [&](int i) -> int& { return lcm[static_cast<std::size_t>(i)]; };

    int low = 1, high = n;
    double dip = 1.0;
    while (true) {
        int i = 1;
        G(1) = high;
        while (G(i) > low) {
            G(i + 1) = MN[static_cast<std::size_t>(G(i))];
            ++i;
        }
        int ig = i;
        const int l_gcm = i;
        int ix = ig - 1;

        i = 1;
        L(1) = low;
        while (L(i) < high) {
            L(i + 1) = MJ[static_cast<std::size_t>(L(i))];
            ++i;
        }
        int ih = i;
        const int l_lcm = i;
        int iv = 2;

        long double d = 0.0L;
        if (l_gcm != 2 || l_lcm != 2) {
            do {
                const int gcmix = G(ix);
                const int lcmiv = L(iv);
                long double dx;
                if (gcmix > lcmiv) {
                    const int gcmi1 = G(ix + 1);
                    dx = static_cast<long double>(lcmiv - gcmi1 + 1) -
                         (static_cast<long double>(X(lcmiv)) - X(gcmi1)) * (gcmix - gcmi1) / (X(gcmix) - X(gcmi1));
                    ++iv;
                    if (dx >= d) {
                        d = dx;
                        ig = ix + 1;
                        ih = iv - 1;
                    }
                } else {
                    const int lcmiv1 = L(iv - 1);
                    const long double den = static_cast<long double>(X(lcmiv)) - X(lcmiv1);
                    dx = den == 0.0L ? 0.0L
                                     : (static_cast<long double>(X(gcmix)) - X(lcmiv1)) * (lcmiv - lcmiv1) / den -
                                           static_cast<long double>(gcmix - lcmiv1 - 1);
                    --ix;
                    if (dx >= d) {
                        d = dx;
                        ig = ix + 1;
                        ih = iv;
                    }
                }
                if (ix < 1) ix = 1;
                if (iv > l_lcm) iv = l_lcm;
            } while (G(ix) != L(iv));
        } else {
            d = 1.0L;
        }
        if (d < dip) break;

        double dip_l = 0.0;
        for (int j = ig; j < l_gcm; ++j) {
            double max_t = 1.0;
            const int jb = G(j + 1), je = G(j);
            if (je - jb > 1 && X(je) != X(jb)) {
                const double c = (je - jb) / (X(je) - X(jb));
                for (int jj = jb; jj <= je; ++jj) {
                    const double t = (jj - jb + 1) - (X(jj) - X(jb)) * c;
                    max_t = std::max(max_t, t);
                }
            }
            dip_l = std::max(dip_l, max_t);
        }
        double dip_u = 0.0;
        for (int j = ih; j < l_lcm; ++j) {
            double max_t = 1.0;
            const int jb = L(j), je = L(j + 1);
            if (je - jb > 1 && X(je) != X(jb)) {
                const double c = (je - jb) / (X(je) - X(jb));
                for (int jj = jb; jj <= je; ++jj) {
                    const double t = (X(jj) - X(jb)) * c - (jj - jb - 1);
                    max_t = std::max(max_t, t);
                }
            }
            dip_u = std::max(dip_u, max_t);
        }
        dip = std::max(dip, std::max(dip_l, dip_u));

        if (low == G(ig) && high == L(ih)) break;
        low = G(ig);
        high = L(ih);
    }
    return dip / (2.0 * n);
}

}  // namespace

double dip_statistic(std::span<const double> sample) {
    std::vector<double> s(sample.begin(), sample.end());
    std::sort(s.begin(), s.end());
    if (s.empty() || s.front() == s.back()) return 0.0;
    if (s.size() < 4) return 1.0 / (2.0 * static_cast<double>(s.size()));
    return dip_sorted(s);
}

TestResult dip_test(std::span<const double> sample, std::size_t bootstrap_n, std::uint64_t seed, kernels::Exec exec) {
    if (sample.size() < 4) throw std::invalid_argument("dip test needs at least 4 observations");
    if (bootstrap_n < 1) throw std::invalid_argument("bootstrap size must be positive");
    TestResult r;
    r.method = Method::Dip;
    r.n = sample.size();
    r.n2 = bootstrap_n;
    r.statistic = dip_statistic(sample);
    if (r.statistic == 0.0) {
        r.p_value = 1.0;
        return r;
    }
    std::vector<char> exceed(bootstrap_n, 0);
    const auto reps = static_cast<std::int64_t>(bootstrap_n);
    const std::size_t n = sample.size();
    const double observed = r.statistic;
    auto one = [&](std::int64_t b) {
        Rng rng(seed, static_cast<std::uint64_t>(b));
        std::vector<double> u(n);
        for (auto& v : u) v = rng.uniform();
        std::sort(u.begin(), u.end());
        exceed[static_cast<std::size_t>(b)] = dip_sorted(u) >= observed ? 1 : 0;
    };
    if (exec == kernels::Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::int64_t b = 0; b < reps; ++b) one(b);
    } else {
        for (std::int64_t b = 0; b < reps; ++b) one(b);
    }
    const auto hits = static_cast<double>(std::count(exceed.begin(), exceed.end(), 1));
    r.p_value = hits / static_cast<double>(bootstrap_n);
    return r;
}

std::vector<double> curve_quantile_sample(const DiurnalCurve& curve, std::size_t count) {
    std::array<double, kBins + 1> cdf{};
    for (std::size_t b = 0; b < kBins; ++b) cdf[b + 1] = cdf[b] + std::max(curve[b], 0.0);
    const double total = cdf[kBins];
    if (!(total > 0.0)) throw DegenerateData("curve has no positive mass");
    std::vector<double> out;
    out.reserve(count);
    std::size_t b = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const double q = (static_cast<double>(i) + 0.5) / static_cast<double>(count) * total;
        while (b + 1 < kBins && cdf[b + 1] < q) ++b;
        const double w = cdf[b + 1] - cdf[b];
        const double frac = w > 0.0 ? (q - cdf[b]) / w : 0.5;
        out.push_back((static_cast<double>(b) + std::clamp(frac, 0.0, 1.0)) * kBinHours);
    }
    return out;
}

// ---------------------------------------------------------------------------

std::vector<double> mann_whitney_counts(std::size_t m, std::size_t n) {
    // f[a][b][u]: orderings of a x-values and b y-values with statistic u.
    const std::size_t umax = m * n;
    std::vector<std::vector<std::vector<double>>> f(
        m + 1, std::vector<std::vector<double>>(n + 1, std::vector<double>(umax + 1, 0.0)));
    for (std::size_t a = 0; a <= m; ++a) {
        for (std::size_t b = 0; b <= n; ++b) {
            if (a == 0 || b == 0) {
                f[a][b][0] = 1.0;
                continue;
            }
            for (std::size_t u = 0; u <= a * b; ++u) {
                // Largest value from x beats all b y-values; otherwise it is a y.
                double v = f[a][b - 1][u];
                if (u >= b) v += f[a - 1][b][u - b];
                f[a][b][u] = v;
            }
        }
    }
    return f[m][n];
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

TestResult mann_whitney_u(std::span<const double> x, std::span<const double> y, Alternative alternative) {
    if (x.empty() || y.empty()) throw std::invalid_argument("Mann-Whitney U needs two non-empty samples");
    const std::size_t m = x.size(), n = y.size();
    std::vector<double> pooled(x.begin(), x.end());
    pooled.insert(pooled.end(), y.begin(), y.end());
    const auto ranks = midranks(pooled);
    double rx = 0.0;
    for (std::size_t i = 0; i < m; ++i) rx += ranks[i];
    const double md = static_cast<double>(m), nd = static_cast<double>(n);
    const double u = rx - md * (md + 1.0) / 2.0;

    TestResult r;
    r.method = Method::MannWhitneyU;
    r.statistic = u;
    r.n = m;
    r.n2 = n;
    r.alternative = alternative;

    std::vector<double> sorted = pooled;
    std::sort(sorted.begin(), sorted.end());
    double tie_term = 0.0;
    bool ties = false;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i + 1);
        if (t > 1.0) ties = true;
        tie_term += t * t * t - t;
        i = j + 1;
    }

    if (m <= 8 && n <= 8 && !ties) {
        const auto counts = mann_whitney_counts(m, n);
        const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
        const auto ui = static_cast<std::size_t>(std::lround(u));
        double le = 0.0, ge = 0.0;
        for (std::size_t k = 0; k < counts.size(); ++k) {
            if (k <= ui) le += counts[k];
            if (k >= ui) ge += counts[k];
        }
        const double p_less = le / total, p_greater = ge / total;
        r.exact = true;
        switch (alternative) {
            case Alternative::Less: r.p_value = p_less; break;
            case Alternative::Greater: r.p_value = p_greater; break;
            case Alternative::TwoSided: r.p_value = std::min(1.0, 2.0 * std::min(p_less, p_greater)); break;
        }
        return r;
    }

    const double big_n = md + nd;
    const double mu = md * nd / 2.0;
    const double var = md * nd / 12.0 * ((big_n + 1.0) - tie_term / (big_n * (big_n - 1.0)));
    if (!(var > 0.0)) {
        r.p_value = 1.0;
        return r;
    }
    const double sd = std::sqrt(var);
    switch (alternative) {
        case Alternative::Less: r.p_value = normal_cdf((u - mu + 0.5) / sd); break;
        case Alternative::Greater: r.p_value = 1.0 - normal_cdf((u - mu - 0.5) / sd); break;
        case Alternative::TwoSided: {
            const double z = (std::abs(u - mu) - 0.5) / sd;
            r.p_value = std::min(1.0, 2.0 * (1.0 - normal_cdf(z)));
            break;
        }
    }
    r.p_value = std::clamp(r.p_value, 0.0, 1.0);
    return r;
}

// ---------------------------------------------------------------------------

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.empty()) throw std::invalid_argument("pearson needs equal non-empty samples");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) throw DegenerateData("degenerate: zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double student_t_two_sided(double t, double df) {
    if (std::isinf(t)) return 0.0;
    boost::math::students_t_distribution<double> dist(df);
    return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
}

TestResult spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("spearman needs equal-length samples");
    if (x.size() < 3) throw std::invalid_argument("spearman needs at least 3 pairs");
    const auto rx = midranks(x);
    const auto ry = midranks(y);
    TestResult r;
    r.method = Method::Spearman;
    r.n = x.size();
    r.df = x.size() - 2;
    r.statistic = pearson(rx, ry);
    const double rho = r.statistic;
    const double df = static_cast<double>(r.df);
    if (std::abs(rho) >= 1.0) {
        r.p_value = 0.0;
    } else {
        const double t = rho * std::sqrt(df / (1.0 - rho * rho));
        r.p_value = student_t_two_sided(t, df);
    }
    return r;
}

// ---------------------------------------------------------------------------

double chi_square_sf(double x, double df) {
    if (x <= 0.0) return 1.0;
    return boost::math::gamma_q(df / 2.0, x / 2.0);
}

double chi_square_statistic(std::span<const double> table, std::size_t rows, std::size_t cols) {
    if (rows < 1 || cols < 1 || table.size() != rows * cols) throw std::invalid_argument("bad contingency table shape");
    std::vector<double> rs(rows, 0.0), cs(cols, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            const double v = table[i * cols + j];
            if (v < 0.0 || !std::isfinite(v)) throw std::invalid_argument("contingency counts must be non-negative");
            rs[i] += v;
            cs[j] += v;
            total += v;
        }
    double chi = 0.0;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            const double e = total > 0.0 ? rs[i] * cs[j] / total : 0.0;
            if (!(e > 0.0))
                throw DegenerateData("expected count is zero at cell (" + std::to_string(i) + ", " +
                                     std::to_string(j) + ")");
            const double d = table[i * cols + j] - e;
            chi += d * d / e;
        }
    return chi;
}

TestResult chi_square(std::span<const double> table, std::size_t rows, std::size_t cols) {
    TestResult r;
    r.method = Method::ChiSquare;
    r.statistic = chi_square_statistic(table, rows, cols);
    r.n = rows;
    r.n2 = cols;
    r.df = (rows - 1) * (cols - 1);
    r.p_value = r.df == 0 ? 1.0 : chi_square_sf(r.statistic, static_cast<double>(r.df));
    return r;
}

std::string to_json(const TestResult& r) {
    std::ostringstream os;
    os << "{\"method\":\"" << to_string(r.method) << "\",\"statistic\":" << format_number(r.statistic)
       << ",\"p_value\":" << format_number(r.p_value) << ",\"n\":" << r.n << ",\"n2\":" << r.n2
       << ",\"df\":" << r.df << ",\"alternative\":\"" << to_string(r.alternative)
       << "\",\"exact\":" << (r.exact ? "true" : "false") << '}';
    return os.str();
}

}  // namespace diurnal::stats
