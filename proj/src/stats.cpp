#include "avi/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "avi/kernels.hpp"

namespace avi {

Summary summarize(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("summarize: empty input");
    Summary s;
    s.count = values.size();
    s.mean = kernels::mean(values);
    if (s.count >= 2) {
        double sxy, sxx, syy;
        kernels::centered_moments(values, values, s.mean, s.mean, sxy, sxx, syy);
        s.stddev = std::sqrt(sxx / static_cast<double>(s.count - 1));
    } else {
        s.stddev = std::numeric_limits<double>::quiet_NaN();
    }
    return s;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

namespace {

// Continued-fraction evaluation of the incomplete beta (Lentz's method).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("incomplete_beta: x outside [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log(1.0 - x);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return std::exp(ln_front) * betacf(a, b, x) / a;
    }
    return 1.0 - std::exp(ln_front) * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
    if (df <= 0.0) throw std::invalid_argument("student t: df must be positive");
    if (!std::isfinite(t)) return 0.0;
    return incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

VifReport vif(const std::vector<std::vector<double>>& columns) {
    const std::size_t k = columns.size();
    if (k < 2) throw std::invalid_argument("vif: need at least 2 columns");
    const std::size_t n = columns.front().size();
    for (const auto& c : columns) {
        if (c.size() != n) throw std::invalid_argument("vif: column length mismatch");
    }
    if (n <= k + 1) throw std::invalid_argument("vif: need length > column count + 1");

    VifReport report;
    report.pairwise_r.assign(k, std::vector<double>(k, 1.0));
    for (std::size_t i = 0; i < k; ++i) {
        const auto si = summarize(columns[i]);
        if (si.stddev == 0.0) {
            throw std::invalid_argument("vif: column " + std::to_string(i) + " is constant");
        }
        for (std::size_t j = i + 1; j < k; ++j) {
            const double r = pearson_r(columns[i], columns[j]);
            report.pairwise_r[i][j] = r;
            report.pairwise_r[j][i] = r;
        }
    }

    report.vif.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        Eigen::MatrixXd X(n, k);  // others + intercept
        Eigen::VectorXd y(n);
        for (std::size_t t = 0; t < n; ++t) {
            y(static_cast<long>(t)) = columns[j][t];
            X(static_cast<long>(t), 0) = 1.0;
            long col = 1;
            for (std::size_t m = 0; m < k; ++m) {
                if (m == j) continue;
                X(static_cast<long>(t), col++) = columns[m][t];
            }
        }
        const Eigen::VectorXd beta = (X.transpose() * X).ldlt().solve(X.transpose() * y);
        const double ss_res = (y - X * beta).squaredNorm();
        const double mean_y = y.mean();
        const double ss_tot = (y.array() - mean_y).square().sum();
        const double r2 = 1.0 - ss_res / ss_tot;
        report.vif[j] = (1.0 - r2 < 1e-12) ? std::numeric_limits<double>::infinity()
                                           : 1.0 / (1.0 - r2);
    }
    return report;
}

double wilcoxon_one_tailed(std::span<const double> x, std::span<const double> y,
                           std::size_t exact_cutoff) {
    if (x.size() != y.size()) throw std::invalid_argument("wilcoxon: length mismatch");
    struct Diff {
        double abs;
        bool positive;
    };
    std::vector<Diff> diffs;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        if (d != 0.0) diffs.push_back({std::fabs(d), d > 0.0});
    }
    const std::size_t n = diffs.size();
    if (n == 0) throw std::invalid_argument("wilcoxon: all differences are zero");
    if (n < 5) throw std::invalid_argument("wilcoxon: need >= 5 nonzero differences");

    std::sort(diffs.begin(), diffs.end(), [](const Diff& a, const Diff& b) { return a.abs < b.abs; });

    // doubled average ranks so ties stay integral
    std::vector<long> rank2(n);
    double tie_correction = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && diffs[j].abs == diffs[i].abs) ++j;
        const long t = static_cast<long>(j - i);
        // average of doubled ranks (i+1)..j doubled: (i+1 + j)
        const long r2avg = static_cast<long>(i + 1 + j);
        for (std::size_t m = i; m < j; ++m) rank2[m] = r2avg;
        tie_correction += static_cast<double>(t) * t * t - static_cast<double>(t);
        i = j;
    }

    long w2 = 0;  // doubled signed-rank statistic for positive differences
    for (std::size_t i = 0; i < n; ++i) {
        if (diffs[i].positive) w2 += rank2[i];
    }

    if (n <= exact_cutoff) {
        // subset-sum DP over doubled ranks; counts fit in a double exactly
        const long total2 = static_cast<long>(n) * static_cast<long>(n + 1);
        std::vector<double> count(static_cast<std::size_t>(total2) + 1, 0.0);
        count[0] = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (long s = total2; s >= rank2[i]; --s) {
                count[static_cast<std::size_t>(s)] += count[static_cast<std::size_t>(s - rank2[i])];
            }
        }
        double tail = 0.0;
        for (long s = w2; s <= total2; ++s) tail += count[static_cast<std::size_t>(s)];
        return tail / std::pow(2.0, static_cast<double>(n));
    }

    const double nn = static_cast<double>(n);
    const double mu = nn * (nn + 1.0) / 4.0;
    const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_correction / 48.0;
    const double w = static_cast<double>(w2) / 2.0;
    const double z = (w - mu - 0.5) / std::sqrt(var);
    return 1.0 - normal_cdf(z);
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
    if (x.size() < 3) throw std::invalid_argument("pearson: need at least 3 points");
    const double mx = kernels::mean(x);
    const double my = kernels::mean(y);
    double sxy, sxx, syy;
    kernels::centered_moments(x, y, mx, my, sxy, sxx, syy);
    if (sxx == 0.0 || syy == 0.0) throw std::invalid_argument("pearson: zero variance");
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace avi
