#include "avi/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace avi {

std::string RunConfig::get(const std::string& key, const std::string& fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

std::string RunConfig::require(const std::string& key) const {
    const auto it = values.find(key);
    if (it == values.end()) {
        throw std::runtime_error("missing required config key '" + key + "'");
    }
    return it->second;
}

long RunConfig::get_long(const std::string& key, long fallback) const {
    const auto it = values.find(key);
    if (it == values.end()) return fallback;
    try {
        return std::stol(it->second);
    } catch (const std::exception&) {
        throw std::runtime_error("config key '" + key + "' is not an integer: " + it->second);
    }
}

double RunConfig::get_double(const std::string& key, double fallback) const {
    const auto it = values.find(key);
    if (it == values.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw std::runtime_error("config key '" + key + "' is not a number: " + it->second);
    }
}

std::string RunConfig::canonical() const {
    std::ostringstream os;
    for (const auto& [k, v] : values) os << k << "=" << v << "\n";
    return os.str();
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path.string());
    RunConfig config;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key=value, got '" + line + "'");
        }
        config.values[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return config;
}

std::uint64_t config_hash(const RunConfig& config) {
    const std::string text = config.canonical();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

void write_report_header(std::ostream& out, const std::string& command, const RunConfig& config,
                         std::uint64_t seed) {
    char hash[17];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(config_hash(config)));
    out << "# avitrace " << kToolVersion << "\n";
    out << "command=" << command << "\n";
    out << "seed=" << seed << "\n";
    out << "config_hash=" << hash << "\n";
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace avi
