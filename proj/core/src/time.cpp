#include <akita/time.hpp>

#include <charconv>
#include <limits>
#include <stdexcept>

namespace akita {

Duration parse_duration(const std::string& text) {
    std::uint64_t value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr == first) {
        throw std::invalid_argument("malformed duration '" + text + "'");
    }
    std::string_view suffix(ptr, static_cast<std::size_t>(last - ptr));
    std::uint64_t scale = 0;
    if (suffix == "us") {
        scale = 1;
    } else if (suffix == "ms") {
        scale = 1000;
    } else if (suffix == "s") {
        scale = 1000000;
    } else {
        throw std::invalid_argument("malformed duration '" + text +
                                    "' (expected a us, ms or s suffix)");
    }
    if (value > std::numeric_limits<std::uint64_t>::max() / scale) {
        throw std::invalid_argument("duration '" + text + "' overflows");
    }
    return Duration{value * scale};
}

std::string format_duration(Duration d) {
    const auto v = d.count();
    if (v != 0 && v % 1000000 == 0) return std::to_string(v / 1000000) + "s";
    if (v != 0 && v % 1000 == 0) return std::to_string(v / 1000) + "ms";
    return std::to_string(v) + "us";
}

}  // namespace akita
