#include "apfree/set_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "apfree/errors.hpp"

namespace apfree {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n\f\v");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n\f\v");
    return s.substr(first, last - first + 1);
}

std::uint64_t parse_positive(std::string_view text, std::size_t line) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc::result_out_of_range) throw ParseError("integer out of range: '" + std::string(text) + "'", line);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ParseError("expected a positive decimal integer, got '" + std::string(text) + "'", line);
    }
    if (value == 0) throw ParseError("members must be positive", line);
    return value;
}

}  // namespace

IntegerSet parse_set(std::istream& in, std::uint64_t universe_limit) {
    std::optional<std::uint64_t> universe;
    std::vector<std::uint64_t> members;
    bool seen_content = false;
    std::string raw;
    std::size_t line_no = 0;

    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;

        constexpr std::string_view kHeader = "universe=";
        if (line.starts_with(kHeader)) {
            if (seen_content) throw ParseError("universe header must precede all members", line_no);
            universe = parse_positive(trim(line.substr(kHeader.size())), line_no);
            if (*universe > universe_limit) {
                throw ResourceLimit("universe " + std::to_string(*universe) + " exceeds the limit of " +
                                    std::to_string(universe_limit));
            }
            seen_content = true;
            continue;
        }
        seen_content = true;
        const std::uint64_t m = parse_positive(line, line_no);
        if (!members.empty() && m <= members.back()) {
            throw ParseError("members must be strictly ascending (" + std::to_string(m) + " after " +
                                 std::to_string(members.back()) + ")",
                             line_no);
        }
        if (universe && m > *universe) {
            throw ParseError("member " + std::to_string(m) + " exceeds universe " + std::to_string(*universe), line_no);
        }
        members.push_back(m);
    }
    if (in.bad()) throw IoError("read failure while parsing set");

    if (!universe) {
        if (members.empty()) throw ParseError("an empty set needs a universe=<n> header");
        universe = members.back();
        if (*universe > universe_limit) {
            throw ResourceLimit("universe " + std::to_string(*universe) + " exceeds the limit of " +
                                std::to_string(universe_limit));
        }
    }
    return IntegerSet::from_members(*universe, members);
}

IntegerSet read_set_file(const std::filesystem::path& path, std::uint64_t universe_limit) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open set file " + path.string());
    return parse_set(in, universe_limit);
}

void write_set(std::ostream& out, const IntegerSet& set) {
    out << "universe=" << set.universe_max() << '\n';
    for (std::uint64_t m : set) out << m << '\n';
}

void write_set_file(const std::filesystem::path& path, const IntegerSet& set) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_set(out, set);
    out.flush();
    if (!out) throw IoError("write failure on " + path.string());
}

}  // namespace apfree
