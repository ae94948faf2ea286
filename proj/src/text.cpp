#include "avi/text.hpp"

#include <cctype>
#include <unordered_map>
#include <unordered_set>

namespace avi {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool starts_url(std::string_view s) {
    return s.starts_with("http://") || s.starts_with("https://") || s.starts_with("www.");
}

}  // namespace

std::string normalize_text(const std::string& raw, bool keep_hashtag_stems) {
    std::string out;
    out.reserve(raw.size());
    std::size_t i = 0;
    const auto n = raw.size();
    while (i < n) {
        if (is_space(raw[i])) {
            if (!out.empty() && out.back() != ' ') out += ' ';
            ++i;
            continue;
        }
        const std::string_view rest = std::string_view(raw).substr(i);
        if (starts_url(rest)) {
            while (i < n && !is_space(raw[i])) ++i;
            continue;
        }
        if (raw[i] == '@' && i + 1 < n && !is_space(raw[i + 1])) {
            ++i;
            while (i < n && !is_space(raw[i])) ++i;
            continue;
        }
        if (raw[i] == '#') {
            ++i;
            if (keep_hashtag_stems) continue;  // drop marker, keep the stem
            while (i < n && !is_space(raw[i])) ++i;
            continue;
        }
        const auto c = static_cast<unsigned char>(raw[i]);
        out += (c < 0x80) ? static_cast<char>(std::tolower(c)) : raw[i];
        ++i;
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

std::vector<std::string> tokenize(const std::string& normalized) {
    std::vector<std::string> tokens;
    std::string cur;
    for (const char c : normalized) {
        const auto u = static_cast<unsigned char>(c);
        if (u < 0x80 ? std::isalnum(u) != 0 : true) {
            cur += c;
        } else if (!cur.empty()) {
            if (cur.size() >= 2) tokens.push_back(cur);
            cur.clear();
        }
    }
    if (cur.size() >= 2) tokens.push_back(cur);
    return tokens;
}

std::vector<Post> dedupe(const std::vector<Post>& posts, bool keep_hashtag_stems) {
    // first pass: canonical text -> index of the earliest-timestamped copy
    std::vector<std::string> normalized(posts.size());
    std::unordered_map<std::string, std::size_t> earliest;
    for (std::size_t i = 0; i < posts.size(); ++i) {
        normalized[i] = normalize_text(posts[i].text, keep_hashtag_stems);
        const auto [it, inserted] = earliest.emplace(normalized[i], i);
        if (!inserted && posts[i].timestamp < posts[it->second].timestamp) {
            it->second = i;
        }
    }
    std::unordered_set<std::string> bodies;
    for (const auto& [text, idx] : earliest) bodies.insert(text);

    std::vector<Post> out;
    std::unordered_set<std::string> emitted;
    for (std::size_t i = 0; i < posts.size(); ++i) {
        const std::string& text = normalized[i];
        if (earliest.at(text) != i) continue;          // a duplicate with an earlier copy
        if (!emitted.insert(text).second) continue;
        if (text.starts_with("rt ") && bodies.contains(text.substr(3))) continue;
        out.push_back(posts[earliest.at(text)]);
    }
    return out;
}

}  // namespace avi
