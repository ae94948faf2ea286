#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace avi {

inline constexpr const char* kToolVersion = "0.1.0";

/// Plain key=value configuration; later assignments win, so CLI flags are
/// applied on top of the file contents.
struct RunConfig {
    std::map<std::string, std::string> values;

    bool has(const std::string& key) const { return values.contains(key); }
    std::string get(const std::string& key, const std::string& fallback = "") const;
    std::string require(const std::string& key) const;
    long get_long(const std::string& key, long fallback) const;
    double get_double(const std::string& key, double fallback) const;

    /// Canonical serialized form (sorted keys), used for the config hash.
    std::string canonical() const;
};

RunConfig load_config(const std::filesystem::path& path);

/// FNV-1a over the canonical config text.
std::uint64_t config_hash(const RunConfig& config);

/// Writes the reproducibility header every report carries.
void write_report_header(std::ostream& out, const std::string& command, const RunConfig& config,
                         std::uint64_t seed);

std::string format_double(double v);

}  // namespace avi
