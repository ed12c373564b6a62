#pragma once

#include <string>

namespace desinc {

/// Shortest representation that round-trips to the same double.
std::string format_double(double x);

/// Shortest round-trip representation, always in scientific notation.
std::string format_scientific(double x);

} // namespace desinc
