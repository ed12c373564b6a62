#include "desinc/format.hpp"

#include <array>
#include <charconv>

namespace desinc {

namespace {

std::string to_chars_string(double x, std::chars_format fmt)
{
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x, fmt);
    if (ec != std::errc{})
        return "nan";
    return std::string(buf.data(), end);
}

} // namespace

std::string format_double(double x) { return to_chars_string(x, std::chars_format::general); }

std::string format_scientific(double x) { return to_chars_string(x, std::chars_format::scientific); }

} // namespace desinc
