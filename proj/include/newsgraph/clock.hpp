#ifndef NEWSGRAPH_CLOCK_HPP_
#define NEWSGRAPH_CLOCK_HPP_

#include <compare>
#include <cstdint>
#include <string>

namespace newsgraph {

/// A UTC instant with second resolution.
struct Instant {
    std::int64_t seconds_since_epoch = 0;

    auto operator<=>(const Instant&) const = default;
};

constexpr std::int64_t kSecondsPerDay = 86400;

inline Instant operator+(Instant t, std::int64_t secs) {
    return Instant{t.seconds_since_epoch + secs};
}
inline std::int64_t operator-(Instant a, Instant b) {
    return a.seconds_since_epoch - b.seconds_since_epoch;
}

/// Parses "YYYY-MM-DDThh:mm:ssZ" (optionally with a fractional-second part,
/// which is dropped). Throws Error on anything else.
Instant parse_instant(const std::string& text);

/// Formats as "YYYY-MM-DDThh:mm:ssZ".
std::string format_instant(Instant t);

/// Formats the calendar date only, "YYYY-MM-DD".
std::string format_date(Instant t);

/// Truncates to midnight UTC of the instant's calendar day.
Instant midnight_utc(Instant t);

}  // namespace newsgraph

#endif  // NEWSGRAPH_CLOCK_HPP_
