#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace fraudcc {

/// Seconds since the Unix epoch. All windows and deltas in the engine are
/// whole seconds.
struct Timestamp {
  std::int64_t seconds = 0;

  friend constexpr auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

inline constexpr std::int64_t kSecondsPerDay = 86400;

/// Accepts epoch seconds ("1575190800", "-5") or ISO-8601
/// ("2019-12-01", "2019-12-01T09:00:00", "2019-12-01 09:00:00.250Z",
/// "2019-12-01T09:00:00+08:00"). Fractional seconds are truncated.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// "YYYY-MM-DDTHH:MM:SSZ"
std::string format_iso8601(Timestamp ts);

Timestamp wall_clock_now();

/// Epoch milliseconds, used where sub-second ordering of publications matters.
std::int64_t wall_clock_millis();

}  // namespace fraudcc
