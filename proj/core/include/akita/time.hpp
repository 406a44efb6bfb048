#pragma once

#include <chrono>
#include <cstdint>
#include <string>

namespace akita {

/// Simulated clock. One tick is one microsecond; the epoch is the start of
/// the simulation. Time never runs backwards and never goes negative.
struct SimClock {
    using rep = std::uint64_t;
    using period = std::micro;
    using duration = std::chrono::duration<rep, period>;
    using time_point = std::chrono::time_point<SimClock>;
    static constexpr bool is_steady = true;
};

using Duration = SimClock::duration;
using TimePoint = SimClock::time_point;

inline constexpr TimePoint kEpoch{};

[[nodiscard]] constexpr std::uint64_t us(Duration d) noexcept { return d.count(); }
[[nodiscard]] constexpr std::uint64_t us(TimePoint t) noexcept {
    return t.time_since_epoch().count();
}

[[nodiscard]] constexpr TimePoint at_us(std::uint64_t v) noexcept { return TimePoint{Duration{v}}; }

/// Saturating difference `a - b`; zero when `b` is later than `a`.
[[nodiscard]] constexpr Duration since(TimePoint a, TimePoint b) noexcept {
    return a > b ? a - b : Duration::zero();
}

/// Parses "25ms", "46us" or "120s" into microseconds. Throws
/// std::invalid_argument on anything else (including a missing suffix).
[[nodiscard]] Duration parse_duration(const std::string& text);

/// Canonical textual form used by the scenario writer: the largest unit
/// among s/ms/us that represents the value exactly.
[[nodiscard]] std::string format_duration(Duration d);

namespace literals {
constexpr Duration operator""_us(unsigned long long v) { return Duration{v}; }
constexpr Duration operator""_ms(unsigned long long v) { return Duration{v * 1000}; }
constexpr Duration operator""_s(unsigned long long v) { return Duration{v * 1000000}; }
}  // namespace literals

}  // namespace akita
