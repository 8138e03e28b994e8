#pragma once

#include <string>
#include <string_view>

namespace plumetrack {

// Nine significant digits, "%.9g"; negative zero prints as 0.
std::string format_real(double value);

// Rounds to the value format_real would print.
double round_significant(double value);

std::string sha256_hex(std::string_view data);

}  // namespace plumetrack
