#include "newsgraph/clock.hpp"

#include <array>
#include <cctype>
#include <cstdio>

#include "newsgraph/error.hpp"

namespace newsgraph {
namespace {

// Days between 1970-01-01 and y-m-d in the proleptic Gregorian calendar
// (Howard Hinnant's civil-date algorithm).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y += m <= 2;
}

bool is_leap(std::int64_t y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

unsigned days_in_month(std::int64_t y, unsigned m) {
    static constexpr std::array<unsigned, 12> lengths = {31, 28, 31, 30, 31, 30,
                                                         31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return lengths[m - 1];
}

}  // namespace

Instant parse_instant(const std::string& text) {
    const auto fail = [&text]() -> Instant {
        throw Error("invalid timestamp \"" + text + "\" (expected YYYY-MM-DDThh:mm:ssZ)");
    };
    const char* s = text.c_str();
    auto digits = [&](std::size_t pos, std::size_t count, std::int64_t& out) {
        out = 0;
        for (std::size_t i = pos; i < pos + count; ++i) {
            if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) return false;
            out = out * 10 + (s[i] - '0');
        }
        return true;
    };

    std::int64_t year, month, day, hour, minute, second;
    if (!digits(0, 4, year) || text.size() < 20 || s[4] != '-' || !digits(5, 2, month) ||
        s[7] != '-' || !digits(8, 2, day) || s[10] != 'T' || !digits(11, 2, hour) ||
        s[13] != ':' || !digits(14, 2, minute) || s[16] != ':' || !digits(17, 2, second)) {
        return fail();
    }
    std::size_t pos = 19;
    if (pos < text.size() && s[pos] == '.') {
        ++pos;
        std::size_t frac_digits = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            ++pos;
            ++frac_digits;
        }
        if (frac_digits == 0) return fail();
    }
    if (pos + 1 != text.size() || s[pos] != 'Z') return fail();

    if (month < 1 || month > 12 || day < 1 ||
        day > days_in_month(year, static_cast<unsigned>(month)) || hour > 23 || minute > 59 ||
        second > 59) {
        return fail();
    }
    const std::int64_t days = days_from_civil(year, static_cast<unsigned>(month),
                                              static_cast<unsigned>(day));
    return Instant{days * kSecondsPerDay + hour * 3600 + minute * 60 + second};
}

std::string format_instant(Instant t) {
    std::int64_t days = t.seconds_since_epoch / kSecondsPerDay;
    std::int64_t rem = t.seconds_since_epoch % kSecondsPerDay;
    if (rem < 0) {
        rem += kSecondsPerDay;
        --days;
    }
    std::int64_t y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<long long>(y), m, d, static_cast<long long>(rem / 3600),
                  static_cast<long long>((rem / 60) % 60), static_cast<long long>(rem % 60));
    return buf;
}

std::string format_date(Instant t) {
    return format_instant(t).substr(0, 10);
}

Instant midnight_utc(Instant t) {
    std::int64_t days = t.seconds_since_epoch / kSecondsPerDay;
    if (t.seconds_since_epoch % kSecondsPerDay < 0) --days;
    return Instant{days * kSecondsPerDay};
}

}  // namespace newsgraph
