#include "avi/geo.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>

namespace avi {

namespace {

const char* kDefaultExclusions[] = {"earth", "worldwide", "everywhere", "nowhere",
                                    "international"};

// Lowercases, maps ASCII punctuation to spaces, and collapses whitespace, so
// "Toronto, Ontario" and "toronto ontario" compare equal.
std::string lower_trim(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (const char raw : s) {
        const auto c = static_cast<unsigned char>(raw);
        char mapped;
        if (c >= 0x80) {
            mapped = raw;
        } else if (std::isalnum(c)) {
            mapped = static_cast<char>(std::tolower(c));
        } else {
            mapped = ' ';
        }
        if (mapped == ' ') {
            if (!out.empty() && out.back() != ' ') out += ' ';
        } else {
            out += mapped;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_coord(const std::string& s, std::size_t lineno) {
    if (s.empty()) return 0.0;
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        throw ParseError("invalid coordinate '" + s + "'", lineno);
    }
}

}  // namespace

Gazetteer load_gazetteer(std::istream& in) {
    Gazetteer gz;
    for (const char* s : kDefaultExclusions) gz.exclusions.insert(s);

    std::string line;
    if (!std::getline(in, line)) throw ParseError("gazetteer file is empty");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() < 6) throw ParseError("expected name,aliases,country,region,lat,lon", lineno);
        GazetteerEntry e;
        e.name_variants.push_back(lower_trim(fields[0]));
        for (const auto& alias : split(fields[1], '|')) {
            if (!alias.empty()) e.name_variants.push_back(lower_trim(alias));
        }
        e.country = fields[2];
        e.region = fields[3];
        e.latitude = parse_coord(fields[4], lineno);
        e.longitude = parse_coord(fields[5], lineno);
        if (e.name_variants.empty() || e.name_variants.front().empty()) {
            throw ParseError("gazetteer entry without a name", lineno);
        }
        gz.entries.push_back(std::move(e));
    }
    return gz;
}

void load_exclusions(Gazetteer& gz, std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto s = lower_trim(line);
        if (!s.empty()) gz.exclusions.insert(s);
    }
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
    if (a.size() > b.size()) std::swap(a, b);
    std::vector<std::size_t> row(a.size() + 1);
    for (std::size_t i = 0; i <= a.size(); ++i) row[i] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
        std::size_t prev = row[0];
        row[0] = j;
        for (std::size_t i = 1; i <= a.size(); ++i) {
            const std::size_t sub = prev + (a[i - 1] == b[j - 1] ? 0 : 1);
            prev = row[i];
            row[i] = std::min({row[i - 1] + 1, row[i] + 1, sub});
        }
    }
    return row[a.size()];
}

GeoResolution resolve_location(const std::string& freeform, const Gazetteer& gz,
                               double fuzzy_threshold) {
    const std::string key = lower_trim(freeform);
    if (key.empty()) return {GeoOutcome::Unresolved, std::nullopt};
    if (gz.exclusions.contains(key)) return {GeoOutcome::Excluded, std::nullopt};

    // exact / alias pass
    for (const auto& e : gz.entries) {
        for (std::size_t v = 0; v < e.name_variants.size(); ++v) {
            if (e.name_variants[v] == key) {
                return {GeoOutcome::Resolved,
                        GeoTag{e.country, e.region, v == 0 ? MatchKind::Exact : MatchKind::Alias, 1.0}};
            }
        }
    }

    // fuzzy pass: best normalized edit distance over all variants
    std::size_t best_dist = std::numeric_limits<std::size_t>::max();
    double best_norm = 1.0;
    const GazetteerEntry* best = nullptr;
    bool ambiguous = false;
    for (const auto& e : gz.entries) {
        for (const auto& variant : e.name_variants) {
            const std::size_t d = levenshtein(key, variant);
            const auto len = std::max(key.size(), variant.size());
            const double norm = len ? static_cast<double>(d) / static_cast<double>(len) : 1.0;
            if (norm > fuzzy_threshold) continue;
            if (d < best_dist) {
                best_dist = d;
                best_norm = norm;
                best = &e;
                ambiguous = false;
            } else if (d == best_dist && best != nullptr &&
                       (e.country != best->country || e.region != best->region)) {
                ambiguous = true;
            }
        }
    }
    if (best == nullptr || ambiguous) return {GeoOutcome::Unresolved, std::nullopt};
    return {GeoOutcome::Resolved,
            GeoTag{best->country, best->region, MatchKind::Fuzzy, 1.0 - best_norm}};
}

std::vector<Post> filter_by_region(const std::vector<Post>& posts, const std::string& country,
                                   const std::optional<std::string>& region) {
    std::vector<Post> out;
    for (const Post& p : posts) {
        if (!p.geo) continue;
        if (p.geo->first != country) continue;
        if (region && p.geo->second != *region) continue;
        out.push_back(p);
    }
    return out;
}

}  // namespace avi
