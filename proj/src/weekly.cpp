#include "avi/weekly.hpp"

#include <charconv>
#include <stdexcept>

namespace avi {

namespace {

int parse_int_field(std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument("invalid numeric date field: '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace

Date parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw std::invalid_argument("invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
    }
    const int y = parse_int_field(text.substr(0, 4));
    const unsigned m = static_cast<unsigned>(parse_int_field(text.substr(5, 2)));
    const unsigned d = static_cast<unsigned>(parse_int_field(text.substr(8, 2)));
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!ymd.ok()) {
        throw std::invalid_argument("invalid calendar date '" + std::string(text) + "'");
    }
    return std::chrono::sys_days{ymd};
}

std::string format_date(Date d) {
    const std::chrono::year_month_day ymd{d};
    char buf[16];
    const int y = static_cast<int>(ymd.year());
    const unsigned m = static_cast<unsigned>(ymd.month());
    const unsigned day = static_cast<unsigned>(ymd.day());
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", y, m, day);
    return buf;
}

Date week_floor(Date d) {
    const std::chrono::weekday wd{d};
    // iso_encoding(): Monday=1 .. Sunday=7
    const auto offset = static_cast<long>(wd.iso_encoding()) - 1;
    return d - std::chrono::days{offset};
}

std::int64_t weeks_between(Date a, Date b) {
    return (b - a).count() / 7;
}

WeeklySeries::WeeklySeries(Date start, std::vector<double> vals)
    : start_week(start), values(std::move(vals)) {
    if (values.empty()) {
        throw std::invalid_argument("WeeklySeries requires at least one bucket");
    }
    if (start_week != week_floor(start_week)) {
        throw std::invalid_argument("WeeklySeries start_week must be a Monday");
    }
}

AlignedPair align(const WeeklySeries& a, const WeeklySeries& b) {
    if (a.values.empty() || b.values.empty()) {
        throw std::invalid_argument("align: empty series");
    }
    const Date lo = std::max(a.start_week, b.start_week);
    const Date hi = std::min(a.last_week(), b.last_week());
    if (lo > hi) {
        throw std::invalid_argument("align: week ranges do not overlap");
    }
    const auto n = static_cast<std::size_t>(weeks_between(lo, hi)) + 1;
    auto slice = [&](const WeeklySeries& s) {
        const auto off = static_cast<std::size_t>(weeks_between(s.start_week, lo));
        return WeeklySeries(lo, {s.values.begin() + static_cast<long>(off),
                                 s.values.begin() + static_cast<long>(off + n)});
    };
    return AlignedPair{slice(a), slice(b), n};
}

WeeklySeries difference(const WeeklySeries& s, unsigned d) {
    if (d >= s.size()) {
        throw std::invalid_argument("difference: order >= series length");
    }
    std::vector<double> v = s.values;
    for (unsigned k = 0; k < d; ++k) {
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            v[i] = v[i + 1] - v[i];
        }
        v.pop_back();
    }
    // differenced value at index i describes the week starting at bucket i+d
    return WeeklySeries(s.week_at(d), std::move(v));
}

}  // namespace avi
