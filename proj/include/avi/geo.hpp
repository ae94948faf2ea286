#pragma once

#include <istream>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "avi/ingest.hpp"

namespace avi {

struct GazetteerEntry {
    std::vector<std::string> name_variants;  // primary name plus aliases, lowercase
    std::string country;
    std::string region;
    double latitude = 0.0;
    double longitude = 0.0;
};

struct Gazetteer {
    std::vector<GazetteerEntry> entries;
    std::unordered_set<std::string> exclusions;  // lowercase vague strings
};

/// File format: header `name,aliases,country,region,lat,lon`, aliases
/// pipe-separated.
Gazetteer load_gazetteer(std::istream& in);

/// One vague string per line, appended to the built-in defaults.
void load_exclusions(Gazetteer& gz, std::istream& in);

enum class MatchKind { Exact, Alias, Fuzzy };

struct GeoTag {
    std::string country;
    std::string region;
    MatchKind match_kind = MatchKind::Exact;
    double confidence = 1.0;
};

enum class GeoOutcome { Resolved, Excluded, Unresolved };

struct GeoResolution {
    GeoOutcome outcome = GeoOutcome::Unresolved;
    std::optional<GeoTag> tag;
};

/// Exclusion list first, then exact/alias lookup, then bounded
/// normalized-edit-distance fuzzy match. Ambiguous fuzzy matches across
/// distinct (country, region) targets at equal distance stay unresolved.
GeoResolution resolve_location(const std::string& freeform, const Gazetteer& gz,
                               double fuzzy_threshold = 0.2);

std::size_t levenshtein(std::string_view a, std::string_view b);

/// Posts whose resolved geo matches country (and region when given);
/// unresolved posts are always excluded.
std::vector<Post> filter_by_region(const std::vector<Post>& posts, const std::string& country,
                                   const std::optional<std::string>& region = std::nullopt);

}  // namespace avi
