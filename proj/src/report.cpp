#include "meln/report.hpp"

#include <cstdio>
#include <fstream>

#include "meln/errors.hpp"

namespace meln {

std::string float17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string config_hash(const nlohmann::ordered_json& config) {
    return hex64(fnv1a64(config.dump()));
}

nlohmann::ordered_json report_envelope(const std::string& command,
                                       const nlohmann::ordered_json& config) {
    nlohmann::ordered_json doc;
    doc["tool"] = kToolName;
    doc["version"] = kToolVersion;
    doc["command"] = command;
    doc["config"] = config;
    doc["config_hash"] = config_hash(config);
    return doc;
}

std::string report_text(const nlohmann::ordered_json& doc) { return doc.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot open output file " + path);
    out << text;
    if (!out.flush()) throw UsageError("failed writing output file " + path);
}

}  // namespace meln
