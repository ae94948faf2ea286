#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "avi/ingest.hpp"

using namespace avi;

TEST_CASE("parse_case_reports maps fields directly") {
    std::istringstream in("date,country,region,cases\n2022-03-06,Canada,Ontario,12000\n");
    const auto records = parse_case_reports(in);
    REQUIRE(records.size() == 1);
    CHECK(format_date(records[0].report_date) == "2022-03-06");
    CHECK(records[0].country == "Canada");
    CHECK(records[0].region == "Ontario");
    CHECK(records[0].case_count == 12000);
    CHECK_FALSE(records[0].flagged());
}

TEST_CASE("empty case counts are flagged, not dropped") {
    std::istringstream in("date,country,region,cases\n2022-03-06,USA,,\n");
    const auto records = parse_case_reports(in);
    REQUIRE(records.size() == 1);
    CHECK(records[0].flagged());
    CHECK_FALSE(records[0].case_count.has_value());
}

TEST_CASE("malformed case rows raise errors with the line number") {
    std::istringstream bad_date("date,country,region,cases\nnot-a-date,Canada,ON,5\n");
    CHECK_THROWS_WITH_AS(parse_case_reports(bad_date),
                         doctest::Contains("line 2"), ParseError);

    std::istringstream negative("date,country,region,cases\n2022-03-06,Canada,ON,-3\n");
    CHECK_THROWS_AS(parse_case_reports(negative), ParseError);

    std::istringstream missing_col("date,country,cases\n2022-03-06,Canada,5\n");
    CHECK_THROWS_WITH_AS(parse_case_reports(missing_col),
                         doctest::Contains("region"), ParseError);
}

TEST_CASE("column schema renames map alternate headers") {
    std::istringstream in("report_day,country,region,cases\n2022-03-06,Canada,ON,5\n");
    ColumnSchema schema;
    schema.renames.emplace_back("date", "report_day");
    const auto records = parse_case_reports(in, schema);
    REQUIRE(records.size() == 1);
    CHECK(records[0].case_count == 5);
}

TEST_CASE("invalid UTF-8 is a file-level error") {
    std::string line = "2022-03-06,Can\xFF\xFE_ada,ON,5";
    std::istringstream in("date,country,region,cases\n" + line + "\n");
    CHECK_THROWS_WITH_AS(parse_case_reports(in), doctest::Contains("UTF-8"), ParseError);
}

TEST_CASE("parse_trend_scores validates the score range") {
    std::istringstream ok("week_start,region,score\n2022-03-07,Canada,54\n");
    const auto records = parse_trend_scores(ok);
    REQUIRE(records.size() == 1);
    CHECK(format_date(records[0].week_start) == "2022-03-07");
    CHECK(records[0].region == "Canada");
    CHECK(records[0].score == 54);

    std::istringstream over("week_start,region,score\n2022-03-07,Canada,101\n");
    CHECK_THROWS_WITH_AS(parse_trend_scores(over), doctest::Contains("101"), ParseError);
}

TEST_CASE("trend rows preserve input order") {
    std::ostringstream file;
    file << "week_start,region,score\n";
    for (int i = 0; i < 10; ++i) {
        file << "2022-03-07,R" << (9 - i) << "," << (i * 7) % 100 << "\n";
    }
    std::istringstream in(file.str());
    const auto records = parse_trend_scores(in);
    REQUIRE(records.size() == 10);
    for (int i = 0; i < 10; ++i) {
        CHECK(records[static_cast<std::size_t>(i)].region == "R" + std::to_string(9 - i));
    }
}

TEST_CASE("parse_posts populates records and leaves geo/relevance unset") {
    std::istringstream in(
        R"({"id":"1","timestamp":"2022-03-06T10:00:00Z","text":"bird flu","lang":"en","user_location":"Toronto"})"
        "\n");
    const auto posts = parse_posts(in);
    REQUIRE(posts.size() == 1);
    CHECK(posts[0].id == "1");
    CHECK(posts[0].text == "bird flu");
    CHECK(posts[0].language == "en");
    CHECK(posts[0].user_location == "Toronto");
    CHECK(format_date(posts[0].day) == "2022-03-06");
    CHECK_FALSE(posts[0].geo.has_value());
    CHECK_FALSE(posts[0].relevance.has_value());
}

TEST_CASE("duplicate post ids are rejected") {
    std::istringstream in(
        R"({"id":"42","timestamp":"2022-03-06T10:00:00Z","text":"a"})"
        "\n"
        R"({"id":"42","timestamp":"2022-03-07T10:00:00Z","text":"b"})"
        "\n");
    CHECK_THROWS_WITH_AS(parse_posts(in), doctest::Contains("42"), ParseError);
}

TEST_CASE("malformed post lines carry their line number") {
    std::istringstream in(
        R"({"id":"1","timestamp":"2022-03-06T10:00:00Z","text":"a"})"
        "\nnot json\n");
    CHECK_THROWS_WITH_AS(parse_posts(in), doctest::Contains("line 2"), ParseError);
}

TEST_CASE("a 1000-line fixture yields 1000 posts") {
    std::ostringstream file;
    for (int i = 0; i < 1000; ++i) {
        file << R"({"id":")" << i << R"(","timestamp":"2022-03-06T00:00:00Z","text":"post )" << i
             << R"("})"
             << "\n";
    }
    std::istringstream in(file.str());
    CHECK(parse_posts(in).size() == 1000);
}

TEST_CASE("aggregate_weekly sums within a week") {
    std::vector<CaseRecord> recs(2);
    recs[0].report_date = parse_date("2022-01-03");  // Monday
    recs[0].case_count = 3;
    recs[1].report_date = parse_date("2022-01-05");  // Wednesday, same week
    recs[1].case_count = 4;
    const auto weekly = aggregate_weekly(
        recs, [](const CaseRecord& r) { return r.report_date; },
        [](const CaseRecord& r) { return static_cast<double>(r.case_count.value_or(0)); });
    REQUIRE(weekly.size() == 1);
    CHECK(weekly.values[0] == 7.0);
}

TEST_CASE("aggregate_weekly rejects empty input") {
    const std::vector<CaseRecord> empty;
    CHECK_THROWS_AS(aggregate_weekly(
                        empty, [](const CaseRecord& r) { return r.report_date; },
                        [](const CaseRecord&) { return 1.0; }),
                    std::invalid_argument);
}

TEST_CASE("daily records spanning a week boundary split into two buckets") {
    // 10 consecutive days starting Wednesday 2022-01-05: 5 land in the first
    // ISO week, 5 in the next
    std::vector<CaseRecord> recs;
    std::map<std::string, double> oracle;
    for (int i = 0; i < 10; ++i) {
        CaseRecord r;
        r.report_date = parse_date("2022-01-05") + std::chrono::days{i};
        r.case_count = i + 1;
        oracle[format_date(week_floor(r.report_date))] += static_cast<double>(i + 1);
        recs.push_back(r);
    }
    const auto weekly = aggregate_weekly(
        recs, [](const CaseRecord& r) { return r.report_date; },
        [](const CaseRecord& r) { return static_cast<double>(*r.case_count); });
    REQUIRE(weekly.size() == oracle.size());
    std::size_t i = 0;
    for (const auto& [week, total] : oracle) {
        CHECK(format_date(weekly.week_at(i)) == week);
        CHECK(weekly.values[i] == total);
        ++i;
    }
}

TEST_CASE("aggregate_weekly conserves mass and ignores input order") {
    std::mt19937_64 rng(99);
    std::vector<CaseRecord> recs;
    double total = 0.0;
    for (int i = 0; i < 200; ++i) {
        CaseRecord r;
        r.report_date = parse_date("2022-01-03") + std::chrono::days{static_cast<long>(rng() % 365)};
        r.case_count = static_cast<long>(rng() % 50);
        total += static_cast<double>(*r.case_count);
        recs.push_back(r);
    }
    auto value_of = [](const CaseRecord& r) { return static_cast<double>(*r.case_count); };
    auto date_of = [](const CaseRecord& r) { return r.report_date; };
    const auto weekly = aggregate_weekly(recs, date_of, value_of);

    double mass = 0.0;
    for (const double v : weekly.values) mass += v;
    CHECK(mass == doctest::Approx(total).epsilon(1e-12));

    auto shuffled = recs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto weekly2 = aggregate_weekly(shuffled, date_of, value_of);
    CHECK(weekly2.start_week == weekly.start_week);
    CHECK(weekly2.values == weekly.values);
}

TEST_CASE("gap weeks are filled with zeros") {
    std::vector<CaseRecord> recs(2);
    recs[0].report_date = parse_date("2022-01-03");
    recs[0].case_count = 1;
    recs[1].report_date = parse_date("2022-01-31");  // 4 weeks later
    recs[1].case_count = 2;
    const auto weekly = aggregate_weekly(
        recs, [](const CaseRecord& r) { return r.report_date; },
        [](const CaseRecord& r) { return static_cast<double>(*r.case_count); });
    CHECK(weekly.values == std::vector<double>{1, 0, 0, 0, 2});
}

TEST_CASE("case files round-trip through serialization") {
    std::istringstream in(
        "date,country,region,cases\n"
        "2022-03-06,Canada,Ontario,12000\n"
        "2022-03-07,USA,Iowa,\n"
        "2022-03-08,France,,17\n");
    const auto records = parse_case_reports(in);

    std::ostringstream out;
    out << "date,country,region,cases\n";
    for (const auto& r : records) {
        out << format_date(r.report_date) << "," << r.country << "," << r.region << ",";
        if (r.case_count) out << *r.case_count;
        out << "\n";
    }
    std::istringstream again(out.str());
    const auto reparsed = parse_case_reports(again);
    REQUIRE(reparsed.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(reparsed[i].report_date == records[i].report_date);
        CHECK(reparsed[i].country == records[i].country);
        CHECK(reparsed[i].region == records[i].region);
        CHECK(reparsed[i].case_count == records[i].case_count);
    }
}
