#include "avi/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_set>

#include <json.hpp>

namespace avi {

namespace {

// Minimal delimiter-separated splitter with double-quote support.
std::vector<std::string> split_csv_line(const std::string& line, std::size_t lineno) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw ParseError("unterminated quote", lineno);
    fields.push_back(std::move(cur));
    return fields;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

// UTF-8 validity scan; inputs are required to be well-formed UTF-8.
bool valid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        const auto c = static_cast<unsigned char>(s[i]);
        std::size_t extra;
        if (c < 0x80) {
            extra = 0;
        } else if ((c & 0xE0) == 0xC0 && c >= 0xC2) {
            extra = 1;
        } else if ((c & 0xF0) == 0xE0) {
            extra = 2;
        } else if ((c & 0xF8) == 0xF0 && c <= 0xF4) {
            extra = 3;
        } else {
            return false;
        }
        for (std::size_t k = 1; k <= extra; ++k) {
            if (i + k >= s.size() || (static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) {
                return false;
            }
        }
        i += extra + 1;
    }
    return true;
}

std::size_t find_column(const std::vector<std::string>& header, const std::string& name,
                        const std::string& file_kind) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw ParseError(file_kind + " file is missing mandatory column '" + name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
}

long parse_count(const std::string& s, std::size_t lineno) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ParseError("invalid count '" + s + "'", lineno);
    }
    if (v < 0) throw ParseError("negative count " + std::to_string(v), lineno);
    return v;
}

}  // namespace

std::string ColumnSchema::resolve(const std::string& canonical) const {
    for (const auto& [from, to] : renames) {
        if (from == canonical) return to;
    }
    return canonical;
}

std::vector<CaseRecord> parse_case_reports(std::istream& in, const ColumnSchema& schema) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("cases file is empty");
    const auto header = split_csv_line(strip_cr(line), 1);
    const auto c_date = find_column(header, schema.resolve("date"), "cases");
    const auto c_country = find_column(header, schema.resolve("country"), "cases");
    const auto c_region = find_column(header, schema.resolve("region"), "cases");
    const auto c_cases = find_column(header, schema.resolve("cases"), "cases");

    std::vector<CaseRecord> records;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        if (!valid_utf8(line)) throw ParseError("invalid UTF-8 sequence", lineno);
        const auto fields = split_csv_line(line, lineno);
        const auto need = std::max({c_date, c_country, c_region, c_cases}) + 1;
        if (fields.size() < need) throw ParseError("expected at least " + std::to_string(need) + " fields", lineno);
        CaseRecord rec;
        try {
            rec.report_date = parse_date(fields[c_date]);
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), lineno);
        }
        rec.country = fields[c_country];
        rec.region = fields[c_region];
        if (!fields[c_cases].empty()) {
            rec.case_count = parse_count(fields[c_cases], lineno);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<TrendScore> parse_trend_scores(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("trends file is empty");
    const auto header = split_csv_line(strip_cr(line), 1);
    const auto c_week = find_column(header, "week_start", "trends");
    const auto c_region = find_column(header, "region", "trends");
    const auto c_score = find_column(header, "score", "trends");

    std::vector<TrendScore> records;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        if (!valid_utf8(line)) throw ParseError("invalid UTF-8 sequence", lineno);
        const auto fields = split_csv_line(line, lineno);
        const auto need = std::max({c_week, c_region, c_score}) + 1;
        if (fields.size() < need) throw ParseError("expected at least " + std::to_string(need) + " fields", lineno);
        TrendScore t;
        try {
            t.week_start = parse_date(fields[c_week]);
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), lineno);
        }
        t.region = fields[c_region];
        const long score = parse_count(fields[c_score], lineno);
        if (score > 100) {
            throw ParseError("trend score " + std::to_string(score) + " outside [0,100]", lineno);
        }
        t.score = static_cast<int>(score);
        records.push_back(std::move(t));
    }
    return records;
}

std::vector<Post> parse_posts(std::istream& in) {
    std::vector<Post> posts;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        if (!valid_utf8(line)) throw ParseError("invalid UTF-8 sequence", lineno);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("malformed post record: ") + e.what(), lineno);
        }
        Post p;
        try {
            p.id = j.at("id").get<std::string>();
            p.timestamp = j.at("timestamp").get<std::string>();
            p.text = j.at("text").get<std::string>();
            p.language = j.value("lang", std::string{});
            p.user_location = j.value("user_location", std::string{});
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("bad post fields: ") + e.what(), lineno);
        }
        if (p.timestamp.size() < 10) throw ParseError("timestamp too short: '" + p.timestamp + "'", lineno);
        try {
            p.day = parse_date(std::string_view(p.timestamp).substr(0, 10));
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), lineno);
        }
        if (!seen_ids.insert(p.id).second) {
            throw ParseError("duplicate post id '" + p.id + "'", lineno);
        }
        posts.push_back(std::move(p));
    }
    return posts;
}

}  // namespace avi
