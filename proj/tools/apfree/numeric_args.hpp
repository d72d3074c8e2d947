#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "apfree/log_value.hpp"

namespace apfree::cli {

// Accepts plain decimals, scientific notation ("1e6") and powers ("2^20").
// Throws InvalidParameter on anything else.
double parse_real(std::string_view text);

// As parse_real, but the value must be a non-negative integer below 2^63.
std::uint64_t parse_count(std::string_view text);

// As parse_real, but "b^e" stays exact in log space so n = 2^100000 works.
LogValue parse_magnitude(std::string_view text);

// "a:b" with both ends parsed by parse_count.
std::pair<std::uint64_t, std::uint64_t> parse_range(std::string_view text);

}  // namespace apfree::cli
