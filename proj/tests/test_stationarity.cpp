#include <doctest.h>

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "avi/rng.hpp"
#include "avi/stationarity.hpp"
#include "avi/weekly.hpp"

using namespace avi;

namespace {

const Date kStart = parse_date("2022-01-03");

WeeklySeries series_of(std::vector<double> values) {
    return WeeklySeries(kStart, std::move(values));
}

nlohmann::json load_fixture(const char* name) {
    std::ifstream in(std::string(AVI_FIXTURE_DIR) + "/" + name);
    REQUIRE_MESSAGE(in.good(), "fixture not found: ", name);
    nlohmann::json j;
    in >> j;
    return j;
}

WeeklySeries white_noise(std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.normal();
    return series_of(std::move(v));
}

WeeklySeries random_walk(std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    std::vector<double> v(n);
    double acc = 0.0;
    for (auto& x : v) {
        acc += rng.normal();
        x = acc;
    }
    return series_of(std::move(v));
}

}  // namespace

TEST_CASE("ADF and KPSS statistics match the reference package fixtures to 1e-4") {
    const auto fixtures = load_fixture("stationarity_reference.json");
    REQUIRE(fixtures.size() == 10);
    for (const auto& fx : fixtures) {
        const WeeklySeries s = series_of(fx["values"].get<std::vector<double>>());

        const auto adf = adf_test(s);
        CHECK(std::abs(adf.statistic - fx["adf_stat"].get<double>()) < 1e-4);
        CHECK(adf.lags_or_bandwidth == fx["adf_usedlag"].get<std::size_t>());
        CHECK(adf.critical_values.at("1%") ==
              doctest::Approx(fx["adf_crit_1pct"].get<double>()).epsilon(1e-6));
        CHECK(adf.critical_values.at("5%") ==
              doctest::Approx(fx["adf_crit_5pct"].get<double>()).epsilon(1e-6));
        CHECK(adf.critical_values.at("10%") ==
              doctest::Approx(fx["adf_crit_10pct"].get<double>()).epsilon(1e-6));
        // the conclusion must follow from the reference statistic itself
        CHECK(adf.stationary_at_5pct ==
              (fx["adf_stat"].get<double>() < fx["adf_crit_5pct"].get<double>()));

        const auto kp = kpss_test(s);
        CHECK(std::abs(kp.statistic - fx["kpss_stat"].get<double>()) < 1e-4);
        CHECK(kp.lags_or_bandwidth == fx["kpss_bandwidth"].get<std::size_t>());
        CHECK(kp.stationary_at_5pct == (fx["kpss_stat"].get<double>() < 0.463));
        CHECK(kp.critical_values.at("5%") == 0.463);
        CHECK(kp.critical_values.at("1%") == 0.739);
    }
}

TEST_CASE("ADF rejects series that are too short or constant") {
    CHECK_THROWS_AS(adf_test(series_of({1, 2, 3, 4, 5})), std::invalid_argument);
    CHECK_THROWS_AS(adf_test(series_of(std::vector<double>(50, 3.0))), std::invalid_argument);
}

TEST_CASE("KPSS rejects short and zero-variance series") {
    CHECK_THROWS_AS(kpss_test(series_of({1, 2, 3})), std::invalid_argument);
    CHECK_THROWS_AS(kpss_test(series_of(std::vector<double>(40, 1.0))), std::invalid_argument);
}

TEST_CASE("ADF respects an explicit lag order") {
    const auto s = white_noise(17, 150);
    const auto fixed = adf_test(s, 3);
    CHECK(fixed.lags_or_bandwidth == 3);
    const auto fixed0 = adf_test(s, 0);
    CHECK(fixed0.lags_or_bandwidth == 0);
    CHECK(fixed.statistic != fixed0.statistic);
}

TEST_CASE("KPSS respects an explicit bandwidth") {
    const auto s = white_noise(18, 150);
    CHECK(kpss_test(s, 2).lags_or_bandwidth == 2);
    CHECK(kpss_test(s, 10).lags_or_bandwidth == 10);
}

TEST_CASE("ensure_stationary leaves white noise untouched") {
    const auto pipeline = ensure_stationary(white_noise(4, 200));
    CHECK(pipeline.d_applied == 0);
    CHECK(pipeline.series.size() == 200);
    CHECK(pipeline.adf.stationary_at_5pct);
    CHECK(pipeline.kpss.stationary_at_5pct);
}

TEST_CASE("ensure_stationary differences a random walk once") {
    const auto pipeline = ensure_stationary(random_walk(4, 200));
    CHECK(pipeline.d_applied == 1);
    CHECK(pipeline.series.size() == 199);
    CHECK(pipeline.adf.stationary_at_5pct);
    CHECK(pipeline.kpss.stationary_at_5pct);
}

TEST_CASE("a series passing KPSS but failing ADF still gets differenced once") {
    const auto fx = load_fixture("bc_like.json");
    const WeeklySeries s = series_of(fx["values"].get<std::vector<double>>());

    // the defining pattern: ADF cannot reject the unit root, KPSS cannot
    // reject stationarity
    REQUIRE_FALSE(adf_test(s).stationary_at_5pct);
    REQUIRE(kpss_test(s).stationary_at_5pct);

    const auto pipeline = ensure_stationary(s);
    CHECK(pipeline.d_applied == 1);
    CHECK(pipeline.adf.stationary_at_5pct);
    CHECK(pipeline.kpss.stationary_at_5pct);
}

TEST_CASE("ensure_stationary reports failure trails when max_d is exhausted") {
    // a quadratic trend differenced at most 0 times cannot pass
    std::vector<double> v(60);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i * i);
    CHECK_THROWS_WITH_AS(ensure_stationary(series_of(v), 0), doctest::Contains("adf"),
                         std::runtime_error);
}

TEST_CASE("ensure_stationary output always passes both tests") {
    for (std::uint64_t seed = 50; seed < 56; ++seed) {
        const auto pipeline = ensure_stationary(random_walk(seed, 160));
        const auto adf = adf_test(pipeline.series);
        const auto kp = kpss_test(pipeline.series);
        CHECK(adf.stationary_at_5pct);
        CHECK(kp.stationary_at_5pct);
    }
}
