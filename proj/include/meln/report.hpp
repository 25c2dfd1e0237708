#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace meln {

inline constexpr const char* kToolName = "meln";
inline constexpr const char* kToolVersion = "1.0.0";

// Shortest round-trip-stable decimal form used by every CSV and JSON float
// (17 significant digits, platform-independent via snprintf %.17g).
std::string float17(double v);

// FNV-1a 64-bit hash, rendered as fixed-width hex; identical configs hash
// identically across runs and platforms.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

// Canonical hash of a configuration document: the compact serialization of
// the (insertion-ordered) JSON is hashed with FNV-1a.
std::string config_hash(const nlohmann::ordered_json& config);

// Standard report envelope: tool, version, command, config, config_hash.
// Callers attach their payload under "result" before serializing.
nlohmann::ordered_json report_envelope(const std::string& command,
                                       const nlohmann::ordered_json& config);

// Serialize with 2-space indentation and a trailing newline.
std::string report_text(const nlohmann::ordered_json& doc);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace meln
