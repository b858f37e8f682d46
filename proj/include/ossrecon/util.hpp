#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ossrecon {

/// Unix time in seconds, UTC. Git hands us these directly (%at, creatordate:unix).
using UnixSeconds = std::int64_t;

constexpr double kSecondsPerDay = 86400.0;

std::string to_lower_ascii(std::string_view s);
std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

/// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string iso_utc(UnixSeconds t);
std::optional<UnixSeconds> parse_iso_utc(std::string_view s);

/// Rounds to two decimal places (reporting precision for ratios and day averages).
double round2(double x);

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

/// Collapses a repo source (URL or path) into a filesystem-safe directory name.
/// Appends a short content hash so distinct sources never collide.
std::string sanitize_identifier(std::string_view source);

}  // namespace ossrecon
