#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace avi {

struct Summary {
    double mean = 0.0;
    double stddev = 0.0;  // Bessel-corrected; requires count >= 2
    std::size_t count = 0;
};

Summary summarize(std::span<const double> values);

/// Standard normal CDF.
double normal_cdf(double z);

/// Two-sided p-value of Student-t with df degrees of freedom.
double student_t_two_sided_p(double t, double df);

/// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

struct VifReport {
    std::vector<double> vif;                       // per column; +inf marks perfect collinearity
    std::vector<std::vector<double>> pairwise_r;   // Pearson matrix
};

/// Variance inflation factors via OLS of each column on the others plus an
/// intercept. Constant columns are an error; perfect collinearity reports
/// +inf rather than failing.
VifReport vif(const std::vector<std::vector<double>>& columns);

/// One-tailed Wilcoxon signed-rank test of H1: x > y. Exact partial-sum
/// distribution for n <= exact_cutoff nonzero differences, normal
/// approximation with continuity correction above; ties get average ranks;
/// zero differences are dropped.
double wilcoxon_one_tailed(std::span<const double> x, std::span<const double> y,
                           std::size_t exact_cutoff = 25);

/// Sample Pearson correlation of two equal-length spans.
double pearson_r(std::span<const double> x, std::span<const double> y);

}  // namespace avi
