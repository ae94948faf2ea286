#pragma once

#include <string>
#include <vector>

#include "avi/ingest.hpp"

namespace avi {

/// Strips URLs and @-mentions, removes hashtags (or keeps their stem),
/// lowercases ASCII letters and collapses whitespace.
std::string normalize_text(const std::string& raw, bool keep_hashtag_stems = true);

/// Tokens of length >= 2 split on non-alphanumeric boundaries; "h5n1" stays
/// intact.
std::vector<std::string> tokenize(const std::string& normalized);

/// Collapses posts with identical normalized text to the earliest timestamp,
/// and drops "rt "-prefixed reposts whose quoted text already exists.
std::vector<Post> dedupe(const std::vector<Post>& posts, bool keep_hashtag_stems = true);

}  // namespace avi
