#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "apfree/integer_set.hpp"

namespace apfree {

// Set file format: UTF-8 text, one positive decimal integer per line in
// strictly ascending order. Lines starting with '#' are comments and blank
// lines are ignored. The first non-comment line may be a header
// `universe=<n>`; without it the universe is the last member.
//
// Throws ParseError (with line number) on malformed content and
// ResourceLimit when the universe exceeds `universe_limit`.
IntegerSet parse_set(std::istream& in, std::uint64_t universe_limit = kDefaultUniverseLimit);

// Throws IoError if the file cannot be opened.
IntegerSet read_set_file(const std::filesystem::path& path, std::uint64_t universe_limit = kDefaultUniverseLimit);

// Always writes the universe header.
void write_set(std::ostream& out, const IntegerSet& set);
void write_set_file(const std::filesystem::path& path, const IntegerSet& set);

}  // namespace apfree
