#pragma once

#include <vector>

#include "avi/weekly.hpp"

namespace avi {

struct LagCorrelation {
    int lag = 0;       // negative: the online signal leads cases
    double r = 0.0;
    std::size_t n = 0; // overlap length at this lag
};

struct CorrelationResult {
    int lag = 0;
    double r = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
    int window_lo = -4;
    int window_hi = 0;
};

/// Sample Pearson r of an aligned pair.
double pearson(const AlignedPair& pair);

/// Two-sided p-value of r via the Student-t transform with n-2 df.
double pearson_pvalue(double r, std::size_t n);

/// Per-lag Pearson r over the overlapping window only. Series a is the
/// online signal, b the case series; at lag k, a[t+(-k)]... a is shifted k
/// weeks relative to b, so negative k means a leads. Lags whose overlap
/// falls below 3 points are omitted.
std::vector<LagCorrelation> cross_correlate(const AlignedPair& pair, int lag_lo, int lag_hi);

/// Maximum-r entry within the reporting window, ties broken toward lag 0.
CorrelationResult best_lag(const std::vector<LagCorrelation>& lcs, int window_lo = -4,
                           int window_hi = 0);

/// Half-width of the 95% confidence band for correlation coefficients.
double confidence_band(std::size_t n);

}  // namespace avi
