#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace gridmap {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

Timestamp now();

/// "2026-10-18T09:30:00.125Z"
std::string format_timestamp(Timestamp t);

/// Accepts the format above, with or without the fractional part. Throws
/// ValidationError otherwise.
Timestamp parse_timestamp(std::string_view text);

}  // namespace gridmap
