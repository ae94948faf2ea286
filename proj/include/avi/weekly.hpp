#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace avi {

using Date = std::chrono::sys_days;

/// Parses an ISO-8601 calendar date (YYYY-MM-DD). Throws std::invalid_argument
/// on malformed input or out-of-range components.
Date parse_date(std::string_view text);

std::string format_date(Date d);

/// Monday of the ISO week containing d.
Date week_floor(Date d);

/// Whole weeks between two Monday-aligned dates (b - a) / 7.
std::int64_t weeks_between(Date a, Date b);

/// Contiguous weekly-bucketed series. Buckets are consecutive Mondays
/// starting at start_week; no gaps, no NaNs.
struct WeeklySeries {
    Date start_week{};
    std::vector<double> values;

    WeeklySeries() = default;
    WeeklySeries(Date start, std::vector<double> vals);

    std::size_t size() const { return values.size(); }
    Date week_at(std::size_t i) const { return start_week + std::chrono::days{7 * static_cast<long>(i)}; }
    Date last_week() const { return week_at(values.size() - 1); }
};

/// Two series trimmed to an identical week range.
struct AlignedPair {
    WeeklySeries a;
    WeeklySeries b;
    std::size_t n_overlap{};
};

/// Trims both series to the intersection of their week ranges.
/// Throws std::invalid_argument when the ranges are disjoint or either
/// series is empty.
AlignedPair align(const WeeklySeries& a, const WeeklySeries& b);

/// d-th order forward differences; length shrinks by d.
WeeklySeries difference(const WeeklySeries& s, unsigned d);

}  // namespace avi
