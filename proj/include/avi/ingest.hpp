#pragma once

#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "avi/weekly.hpp"

namespace avi {

/// Parse failure carrying the 1-based line number when row-scoped.
class ParseError : public std::runtime_error {
  public:
    ParseError(std::string msg, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + msg : std::move(msg)),
          line_(line) {}
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

struct CaseRecord {
    Date report_date{};
    std::string country;
    std::string region;
    std::optional<long> case_count;  // empty field in the source means unknown, not zero

    bool flagged() const { return !case_count.has_value(); }
};

struct TrendScore {
    Date week_start{};
    std::string region;
    int score = 0;  // [0,100]
};

enum class Relevance { Relevant, Irrelevant };

struct Post {
    std::string id;
    std::string timestamp;  // ISO date-time as supplied
    Date day{};             // calendar date extracted from timestamp
    std::string text;
    std::string language;
    std::string user_location;
    std::optional<std::pair<std::string, std::string>> geo;  // (country, region)
    std::optional<Relevance> relevance;
};

/// Column-name remapping for delimiter-separated inputs. Maps the canonical
/// column name to the name used in the file; identity when absent.
struct ColumnSchema {
    std::vector<std::pair<std::string, std::string>> renames;

    std::string resolve(const std::string& canonical) const;
};

/// Cases file: header `date,country,region,cases`. Rows with an empty cases
/// field are returned flagged rather than dropped.
std::vector<CaseRecord> parse_case_reports(std::istream& in, const ColumnSchema& schema = {});

/// Trends file: header `week_start,region,score` with score in [0,100].
std::vector<TrendScore> parse_trend_scores(std::istream& in);

/// Posts file: one JSON object per line with keys id,timestamp,text,lang,user_location.
std::vector<Post> parse_posts(std::istream& in);

enum class WeekConvention { IsoMonday };

/// Sums value_of over records per ISO week; gap weeks get 0; spans min..max
/// week contiguously. Throws on empty input.
template <typename Record, typename DateOf, typename ValueOf>
WeeklySeries aggregate_weekly(const std::vector<Record>& records, DateOf date_of, ValueOf value_of,
                              WeekConvention /*convention*/ = WeekConvention::IsoMonday) {
    if (records.empty()) {
        throw std::invalid_argument("aggregate_weekly: no records to aggregate");
    }
    Date lo = week_floor(date_of(records.front()));
    Date hi = lo;
    for (const Record& r : records) {
        const Date w = week_floor(date_of(r));
        lo = std::min(lo, w);
        hi = std::max(hi, w);
    }
    std::vector<double> values(static_cast<std::size_t>(weeks_between(lo, hi)) + 1, 0.0);
    for (const Record& r : records) {
        const auto k = static_cast<std::size_t>(weeks_between(lo, week_floor(date_of(r))));
        values[k] += static_cast<double>(value_of(r));
    }
    return WeeklySeries(lo, std::move(values));
}

}  // namespace avi
