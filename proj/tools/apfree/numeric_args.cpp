#include "apfree/numeric_args.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "apfree/errors.hpp"

namespace apfree::cli {

namespace {

double parse_plain(std::string_view text) {
    const std::string s(text);
    if (s.empty()) throw InvalidParameter("expected a number, got an empty string");
    char* end = nullptr;
    const double value = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || std::isnan(value)) throw InvalidParameter("not a number: '" + s + "'");
    return value;
}

}  // namespace

double parse_real(std::string_view text) {
    const auto caret = text.find('^');
    if (caret == std::string_view::npos) return parse_plain(text);
    const double base = parse_plain(text.substr(0, caret));
    const double exponent = parse_plain(text.substr(caret + 1));
    return std::pow(base, exponent);
}

std::uint64_t parse_count(std::string_view text) {
    const double value = parse_real(text);
    if (!(value >= 0.0) || value >= 9.2e18 || std::floor(value) != value) {
        throw InvalidParameter("expected a non-negative integer, got '" + std::string(text) + "'");
    }
    return static_cast<std::uint64_t>(value);
}

LogValue parse_magnitude(std::string_view text) {
    const auto caret = text.find('^');
    if (caret == std::string_view::npos) return LogValue::from_value(parse_plain(text));
    const double base = parse_plain(text.substr(0, caret));
    const double exponent = parse_plain(text.substr(caret + 1));
    if (!(base > 0.0)) throw InvalidParameter("power base must be positive in '" + std::string(text) + "'");
    return LogValue::from_log2(exponent * std::log2(base));
}

std::pair<std::uint64_t, std::uint64_t> parse_range(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw InvalidParameter("range must look like FROM:TO, got '" + std::string(text) + "'");
    return {parse_count(text.substr(0, colon)), parse_count(text.substr(colon + 1))};
}

}  // namespace apfree::cli
