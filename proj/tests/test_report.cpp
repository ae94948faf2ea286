#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "avi/report.hpp"

using namespace avi;

namespace {

struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const std::string& contents) {
        path = std::filesystem::temp_directory_path() /
               ("avi_report_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++) + ".cfg");
        std::ofstream out(path);
        out << contents;
    }
    ~TempFile() { std::filesystem::remove(path); }
    static inline int counter = 0;
};

}  // namespace

TEST_CASE("load_config reads key=value lines, skipping comments and blanks") {
    TempFile f(
        "# surveillance run\n"
        "seed=42\n"
        "\n"
        "region=Canada/Ontario\n"
        "lag=-3\n"
        "z_threshold=2.5\n"
        "note=a=b\n");
    const RunConfig cfg = load_config(f.path);
    CHECK(cfg.values.size() == 5);
    CHECK(cfg.get("seed") == "42");
    CHECK(cfg.get("region") == "Canada/Ontario");
    CHECK(cfg.get("note") == "a=b");  // only the first '=' splits
    CHECK(cfg.has("lag"));
    CHECK_FALSE(cfg.has("missing"));
}

TEST_CASE("load_config reports bad lines and missing files") {
    TempFile f("seed=1\nnot a pair\n");
    CHECK_THROWS_WITH_AS(load_config(f.path), doctest::Contains("line 2"), std::runtime_error);
    CHECK_THROWS_AS(load_config("/nonexistent/path/x.cfg"), std::runtime_error);
}

TEST_CASE("later assignments overwrite earlier ones") {
    TempFile f("seed=1\nseed=2\n");
    CHECK(load_config(f.path).get("seed") == "2");
}

TEST_CASE("typed getters convert or fall back") {
    RunConfig cfg;
    cfg.values = {{"n", "17"}, {"x", "2.5"}, {"bad", "zzz"}};
    CHECK(cfg.get_long("n", 0) == 17);
    CHECK(cfg.get_long("missing", 9) == 9);
    CHECK(cfg.get_double("x", 0.0) == 2.5);
    CHECK(cfg.get_double("missing", 1.5) == 1.5);
    CHECK_THROWS_AS(cfg.get_long("bad", 0), std::runtime_error);
    CHECK_THROWS_AS(cfg.get_double("bad", 0.0), std::runtime_error);
    CHECK(cfg.get("missing", "fallback") == "fallback");
    CHECK(cfg.require("n") == "17");
    CHECK_THROWS_WITH_AS(cfg.require("missing"), doctest::Contains("missing"),
                         std::runtime_error);
}

TEST_CASE("canonical form is sorted and insertion-order independent") {
    RunConfig a, b;
    a.values = {{"b", "2"}, {"a", "1"}};
    b.values = {{"a", "1"}, {"b", "2"}};
    CHECK(a.canonical() == "a=1\nb=2\n");
    CHECK(a.canonical() == b.canonical());
    CHECK(config_hash(a) == config_hash(b));
}

TEST_CASE("config_hash is stable and sensitive to any value change") {
    RunConfig cfg;
    cfg.values = {{"seed", "42"}, {"region", "Canada"}};
    const auto h = config_hash(cfg);
    CHECK(h == config_hash(cfg));  // deterministic
    RunConfig changed = cfg;
    changed.values["seed"] = "43";
    CHECK(config_hash(changed) != h);
    RunConfig extra = cfg;
    extra.values["new"] = "1";
    CHECK(config_hash(extra) != h);
    // empty config hashes to the FNV-1a offset basis
    CHECK(config_hash(RunConfig{}) == 0xcbf29ce484222325ULL);
}

TEST_CASE("report headers carry version, command, seed and config hash") {
    RunConfig cfg;
    cfg.values = {{"region", "Canada"}};
    std::ostringstream os;
    write_report_header(os, "correlate", cfg, 42);
    std::istringstream in(os.str());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == std::string("# avitrace ") + kToolVersion);
    REQUIRE(std::getline(in, line));
    CHECK(line == "command=correlate");
    REQUIRE(std::getline(in, line));
    CHECK(line == "seed=42");
    REQUIRE(std::getline(in, line));
    REQUIRE(line.rfind("config_hash=", 0) == 0);
    const std::string hex = line.substr(12);
    CHECK(hex.size() == 16);  // zero-padded 64-bit hex
    char expected[17];
    std::snprintf(expected, sizeof(expected), "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    CHECK(hex == expected);
}

TEST_CASE("format_double uses 6 significant digits and spells out non-finites") {
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(1.5) == "1.5");
    CHECK(format_double(0.123456789) == "0.123457");
    CHECK(format_double(1234567.0) == "1.23457e+06");
    CHECK(format_double(-3.25) == "-3.25");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}
