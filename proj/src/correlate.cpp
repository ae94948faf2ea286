#include "avi/correlate.hpp"

#include <cmath>
#include <stdexcept>

#include "avi/stats.hpp"

namespace avi {

double pearson(const AlignedPair& pair) {
    if (pair.n_overlap < 3) throw std::invalid_argument("pearson: overlap < 3");
    return pearson_r(pair.a.values, pair.b.values);
}

double pearson_pvalue(double r, std::size_t n) {
    if (n < 4) throw std::invalid_argument("pearson_pvalue: need n >= 4");
    if (std::fabs(r) >= 1.0) return 0.0;
    const double df = static_cast<double>(n) - 2.0;
    const double t = r * std::sqrt(df / (1.0 - r * r));
    return student_t_two_sided_p(t, df);
}

std::vector<LagCorrelation> cross_correlate(const AlignedPair& pair, int lag_lo, int lag_hi) {
    if (lag_hi < lag_lo) throw std::invalid_argument("cross_correlate: empty lag range");
    const auto& a = pair.a.values;
    const auto& b = pair.b.values;
    const auto n = static_cast<long>(pair.n_overlap);

    std::vector<LagCorrelation> out;
    for (int k = lag_lo; k <= lag_hi; ++k) {
        // pairs (a[t], b[t-k]) over the valid window
        const long t0 = std::max<long>(0, k);
        const long t1 = std::min<long>(n, n + k);  // exclusive
        const long m = t1 - t0;
        if (m < 3) continue;  // too little overlap at this lag; omitted
        std::span<const double> sa(a.data() + t0, static_cast<std::size_t>(m));
        std::span<const double> sb(b.data() + (t0 - k), static_cast<std::size_t>(m));
        LagCorrelation lc;
        lc.lag = k;
        lc.n = static_cast<std::size_t>(m);
        try {
            lc.r = pearson_r(sa, sb);
        } catch (const std::invalid_argument&) {
            continue;  // zero variance in the window
        }
        out.push_back(lc);
    }
    return out;
}

CorrelationResult best_lag(const std::vector<LagCorrelation>& lcs, int window_lo, int window_hi) {
    const LagCorrelation* best = nullptr;
    for (const auto& lc : lcs) {
        if (lc.lag < window_lo || lc.lag > window_hi) continue;
        if (best == nullptr || lc.r > best->r ||
            (lc.r == best->r && std::abs(lc.lag) < std::abs(best->lag))) {
            best = &lc;
        }
    }
    if (best == nullptr) {
        throw std::invalid_argument("best_lag: no lag inside the reporting window");
    }
    CorrelationResult res;
    res.lag = best->lag;
    res.r = best->r;
    res.n = best->n;
    res.p_value = pearson_pvalue(best->r, best->n);
    res.window_lo = window_lo;
    res.window_hi = window_hi;
    return res;
}

double confidence_band(std::size_t n) {
    if (n < 4) throw std::invalid_argument("confidence_band: need n >= 4");
    return 1.96 / std::sqrt(static_cast<double>(n));
}

}  // namespace avi
