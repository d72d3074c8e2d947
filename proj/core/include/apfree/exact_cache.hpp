#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "apfree/integer_set.hpp"

namespace apfree {

struct CacheEntry {
    unsigned k = 0;
    std::uint64_t n = 0;
    std::uint64_t value = 0;
    IntegerSet witness;
};

// Persistent store of solved r_k(n) instances.
//
// File format: CSV with header `k,n,value,witness`; the witness is the
// `;`-joined ascending member list. Rows are only ever appended, under an
// exclusive flock. On load every row is validated (field syntax, witness
// inside {1..n}, |witness| == value, witness k-AP-free); rejected rows stay in
// the file and produce a warning.
//
// Single writer, many readers.
class ExactCache {
public:
    // In-memory only.
    ExactCache() = default;
    // Loads `path` if it exists. Throws IoError if it exists but cannot be read.
    explicit ExactCache(std::filesystem::path path);

    std::optional<CacheEntry> lookup(unsigned k, std::uint64_t n) const;

    // No-op if an entry with the same value is already present.
    void store(unsigned k, std::uint64_t n, std::uint64_t value, const IntegerSet& witness);

    std::size_t size() const;
    std::vector<std::string> warnings() const;
    const std::optional<std::filesystem::path>& path() const noexcept { return path_; }

    static constexpr const char* kHeader = "k,n,value,witness";
    static std::string format_row(unsigned k, std::uint64_t n, std::uint64_t value, const IntegerSet& witness);
    // Parses and validates one data row. Returns the reason on rejection.
    static std::pair<std::optional<CacheEntry>, std::string> parse_row(const std::string& line);

private:
    void load();

    std::optional<std::filesystem::path> path_;
    mutable std::shared_mutex mutex_;
    std::map<std::pair<unsigned, std::uint64_t>, CacheEntry> entries_;
    std::vector<std::string> warnings_;
};

}  // namespace apfree
