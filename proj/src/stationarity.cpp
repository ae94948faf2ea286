#include "avi/stationarity.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace avi {

namespace {

// MacKinnon (2010) response-surface coefficients, tau distribution with a
// constant, one variable: cv = b0 + b1/N + b2/N^2 + b3/N^3.
constexpr double kTauC1[4] = {-3.43035, -6.5393, -16.786, -79.433};
constexpr double kTauC5[4] = {-2.86154, -2.8903, -4.234, -40.040};
constexpr double kTauC10[4] = {-2.56677, -1.5384, -2.809, 0.0};

double response_surface(const double (&b)[4], double n) {
    return b[0] + b[1] / n + b[2] / (n * n) + b[3] / (n * n * n);
}

struct OlsFit {
    Eigen::VectorXd beta;
    double ssr = 0.0;
    Eigen::MatrixXd xtx_inv;
};

OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    OlsFit fit;
    const Eigen::MatrixXd xtx = X.transpose() * X;
    fit.xtx_inv = xtx.inverse();
    fit.beta = fit.xtx_inv * (X.transpose() * y);
    fit.ssr = (y - X * fit.beta).squaredNorm();
    return fit;
}

}  // namespace

StationarityResult adf_test(const WeeklySeries& s, std::optional<std::size_t> max_lags) {
    const auto& x = s.values;
    const auto n0 = x.size();
    if (n0 < 12) throw std::invalid_argument("adf_test: series too short (need >= 12)");
    bool constant = true;
    for (const double v : x) {
        if (v != x.front()) {
            constant = false;
            break;
        }
    }
    if (constant) throw std::invalid_argument("adf_test: constant series, regression degenerate");

    std::size_t maxlag;
    if (max_lags) {
        maxlag = *max_lags;
    } else {
        maxlag = static_cast<std::size_t>(
            std::ceil(12.0 * std::pow(static_cast<double>(n0) / 100.0, 0.25)));
    }
    if (n0 / 2 < 2 || maxlag > n0 / 2 - 2) maxlag = n0 / 2 - 2;

    std::vector<double> xdiff(n0 - 1);
    for (std::size_t i = 0; i + 1 < n0; ++i) xdiff[i] = x[i + 1] - x[i];

    // design rows over a fixed sample so AICs are comparable across lag counts
    const auto build = [&](std::size_t lag, std::size_t base) {
        const std::size_t nobs = n0 - 1 - base;
        Eigen::MatrixXd X(nobs, lag + 2);
        Eigen::VectorXd y(nobs);
        for (std::size_t i = 0; i < nobs; ++i) {
            const std::size_t t = base + i;  // index into xdiff
            y(static_cast<long>(i)) = xdiff[t];
            X(static_cast<long>(i), 0) = x[t];  // lagged level
            for (std::size_t j = 1; j <= lag; ++j) {
                X(static_cast<long>(i), static_cast<long>(j)) = xdiff[t - j];
            }
            X(static_cast<long>(i), static_cast<long>(lag + 1)) = 1.0;  // constant
        }
        return std::pair{std::move(X), std::move(y)};
    };

    std::size_t bestlag = 0;
    if (!max_lags) {
        const std::size_t nobs = n0 - 1 - maxlag;
        double best_aic = std::numeric_limits<double>::infinity();
        for (std::size_t lag = 0; lag <= maxlag; ++lag) {
            auto [X, y] = build(lag, maxlag);
            const OlsFit fit = ols(X, y);
            const double k = static_cast<double>(lag + 2);
            const double nn = static_cast<double>(nobs);
            const double aic =
                nn * (std::log(2.0 * M_PI) + 1.0 + std::log(fit.ssr / nn)) + 2.0 * k;
            if (aic < best_aic) {
                best_aic = aic;
                bestlag = lag;
            }
        }
    } else {
        bestlag = maxlag;
    }

    auto [X, y] = build(bestlag, bestlag);
    const auto nobs = static_cast<std::size_t>(y.size());
    const OlsFit fit = ols(X, y);
    const double sigma2 = fit.ssr / static_cast<double>(nobs - (bestlag + 2));
    const double se = std::sqrt(sigma2 * fit.xtx_inv(0, 0));
    const double stat = fit.beta(0) / se;

    StationarityResult res;
    res.test = StationarityTest::Adf;
    res.statistic = stat;
    res.lags_or_bandwidth = bestlag;
    const double nn = static_cast<double>(nobs);
    const double cv1 = response_surface(kTauC1, nn);
    const double cv5 = response_surface(kTauC5, nn);
    const double cv10 = response_surface(kTauC10, nn);
    // MacKinnon tabulates 1/5/10%; 2.5% is interpolated on the normal-quantile scale
    const double w = (1.959964 - 2.326348) / (1.644854 - 2.326348);
    res.critical_values = {{"1%", cv1},
                           {"2.5%", cv1 + w * (cv5 - cv1)},
                           {"5%", cv5},
                           {"10%", cv10}};
    res.stationary_at_5pct = stat < cv5;
    return res;
}

StationarityResult kpss_test(const WeeklySeries& s, std::optional<std::size_t> bandwidth) {
    const auto& x = s.values;
    const auto n = x.size();
    if (n < 12) throw std::invalid_argument("kpss_test: series too short (need >= 12)");

    double mean = 0.0;
    for (const double v : x) mean += v;
    mean /= static_cast<double>(n);
    std::vector<double> resid(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        resid[i] = x[i] - mean;
        ss += resid[i] * resid[i];
    }
    if (ss == 0.0) throw std::invalid_argument("kpss_test: zero-variance series");

    std::size_t bw = bandwidth ? *bandwidth
                               : static_cast<std::size_t>(std::floor(
                                     4.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
    if (bw >= n) bw = n - 1;

    double cum = 0.0;
    double eta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cum += resid[i];
        eta += cum * cum;
    }
    eta /= static_cast<double>(n) * static_cast<double>(n);

    double s_hat = ss;
    for (std::size_t l = 1; l <= bw; ++l) {
        double acov = 0.0;
        for (std::size_t t = l; t < n; ++t) acov += resid[t] * resid[t - l];
        s_hat += 2.0 * acov * (1.0 - static_cast<double>(l) / (static_cast<double>(bw) + 1.0));
    }
    s_hat /= static_cast<double>(n);

    StationarityResult res;
    res.test = StationarityTest::Kpss;
    res.statistic = eta / s_hat;
    res.lags_or_bandwidth = bw;
    res.critical_values = {{"10%", 0.347}, {"5%", 0.463}, {"2.5%", 0.574}, {"1%", 0.739}};
    res.stationary_at_5pct = res.statistic < 0.463;
    return res;
}

StationarityPipeline ensure_stationary(const WeeklySeries& s, unsigned max_d) {
    WeeklySeries cur = s;
    std::ostringstream trail;
    for (unsigned d = 0; d <= max_d; ++d) {
        const auto adf = adf_test(cur);
        const auto kpss = kpss_test(cur);
        trail << "d=" << d << " adf=" << adf.statistic << (adf.stationary_at_5pct ? " (st)" : " (non)")
              << " kpss=" << kpss.statistic << (kpss.stationary_at_5pct ? " (st)" : " (non)") << "; ";
        if (adf.stationary_at_5pct && kpss.stationary_at_5pct) {
            return StationarityPipeline{std::move(cur), d, adf, kpss};
        }
        if (d == max_d) break;
        cur = difference(cur, 1);
    }
    throw std::runtime_error("series still non-stationary after " + std::to_string(max_d) +
                             " differencing rounds [" + trail.str() + "]");
}

}  // namespace avi
