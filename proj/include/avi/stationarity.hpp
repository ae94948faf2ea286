#pragma once

#include <map>
#include <optional>
#include <string>

#include "avi/weekly.hpp"

namespace avi {

enum class StationarityTest { Adf, Kpss };

struct StationarityResult {
    StationarityTest test{};
    double statistic = 0.0;
    // keys: "1%", "2.5%", "5%", "10%"
    std::map<std::string, double> critical_values;
    std::size_t lags_or_bandwidth = 0;
    bool stationary_at_5pct = false;
};

/// Augmented Dickey-Fuller test with a constant term. Lag order is chosen by
/// AIC up to the Schwert bound ceil(12*(N/100)^(1/4)) unless max_lags is
/// given. Critical values follow the MacKinnon response-surface
/// approximation; the series is called stationary when the t-ratio on the
/// lagged level falls below the 5% value.
StationarityResult adf_test(const WeeklySeries& s,
                            std::optional<std::size_t> max_lags = std::nullopt);

/// KPSS level-stationarity test with Bartlett-weighted Newey-West long-run
/// variance; default bandwidth floor(4*(N/100)^(1/4)). Stationary when the
/// statistic stays below the 5% critical value 0.463.
StationarityResult kpss_test(const WeeklySeries& s,
                             std::optional<std::size_t> bandwidth = std::nullopt);

struct StationarityPipeline {
    WeeklySeries series;
    unsigned d_applied = 0;
    StationarityResult adf;
    StationarityResult kpss;
};

/// Differences until both tests agree on stationarity at the 5% level.
/// Throws std::runtime_error (with both test trails in the message) when
/// max_d differencing rounds are not enough.
StationarityPipeline ensure_stationary(const WeeklySeries& s, unsigned max_d = 2);

}  // namespace avi
