#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "diurnal/activity.hpp"
#include "diurnal/kernels.hpp"

namespace diurnal::stats {

enum class Method : std::uint8_t { Dip, MannWhitneyU, Spearman, ChiSquare };
enum class Alternative : std::uint8_t { TwoSided, Less, Greater };

std::string_view to_string(Method m);
std::string_view to_string(Alternative a);

struct TestResult {
    Method method = Method::Dip;
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
    std::size_t n2 = 0;      // second sample size / table columns
    std::size_t df = 0;
    Alternative alternative = Alternative::TwoSided;
    bool exact = false;
};

/// Average ranks (1-based), ties sharing the mean of their positions.
std::vector<double> midranks(std::span<const double> x);

/// Hartigan & Hartigan dip statistic of a sample (sorted internally).
/// Ranges over [1/(2n), 1/4]; 0 for a constant sample.
double dip_statistic(std::span<const double> sample);

/// Dip statistic with a bootstrap p-value: the share of `bootstrap_n`
/// uniform(0,1) samples of the same size whose dip is at least the
/// observed one. Replicate r draws from its own seeded substream,
/// so the result does not depend on the thread count.
TestResult dip_test(std::span<const double> sample, std::size_t bootstrap_n = 2000, std::uint64_t seed = 1,
                    kernels::Exec exec = kernels::Exec::Parallel);

/// `count` hours-of-day at the quantiles (i + 1/2) / count of a diurnal
/// curve read as a density that is uniform within each bin. Negative
/// values count as zero. Used to run the dip test on aggregated curves.
std::vector<double> curve_quantile_sample(const DiurnalCurve& curve, std::size_t count);

/// Mann-Whitney U of `x` against `y` (U counts pairs with x > y, ties 1/2).
/// Exact null distribution when both samples have at most 8 values and no
/// ties; otherwise normal approximation with tie and continuity correction.
TestResult mann_whitney_u(std::span<const double> x, std::span<const double> y,
                          Alternative alternative = Alternative::TwoSided);

/// Number of orderings giving each U value for sample sizes (m, n), index U.
std::vector<double> mann_whitney_counts(std::size_t m, std::size_t n);

/// Spearman rho with a two-sided t-approximation p-value on n - 2 degrees
/// of freedom. Throws DegenerateData when either ranking is constant.
TestResult spearman(std::span<const double> x, std::span<const double> y);

double pearson(std::span<const double> x, std::span<const double> y);

/// Pearson chi-square test of independence on an r x c table (row-major
/// counts). Throws DegenerateData naming the first cell whose expected
/// count is zero.
TestResult chi_square(std::span<const double> table, std::size_t rows, std::size_t cols);
double chi_square_statistic(std::span<const double> table, std::size_t rows, std::size_t cols);

/// Upper tail of the chi-square distribution.
double chi_square_sf(double x, double df);
double normal_cdf(double z);
/// Two-sided tail probability of Student's t.
double student_t_two_sided(double t, double df);

/// Serialises as a JSON object.
std::string to_json(const TestResult& r);

}  // namespace diurnal::stats
