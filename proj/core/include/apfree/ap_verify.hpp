#pragma once

#include <compare>
#include <cstdint>
#include <optional>

#include "apfree/integer_set.hpp"

namespace apfree {

// A concrete k-term progression start, start+d, ..., start+(k-1)d with d >= 1.
struct ApWitness {
    std::uint64_t start = 0;
    std::uint64_t difference = 0;
    unsigned length = 0;

    std::uint64_t term(unsigned i) const noexcept { return start + static_cast<std::uint64_t>(i) * difference; }
    std::uint64_t last() const noexcept { return term(length - 1); }

    // Lexicographic by (start, difference); length is not part of the order.
    friend std::strong_ordering operator<=>(const ApWitness& a, const ApWitness& b) noexcept {
        if (auto c = a.start <=> b.start; c != 0) return c;
        return a.difference <=> b.difference;
    }
    friend bool operator==(const ApWitness& a, const ApWitness& b) noexcept {
        return a.start == b.start && a.difference == b.difference && a.length == b.length;
    }
};

struct Verdict {
    std::optional<ApWitness> witness;

    bool ap_free() const noexcept { return !witness.has_value(); }
};

enum class VerifyStrategy {
    automatic,  // pick by density
    pairs,      // member pairs (a, a+d), probe the remaining terms
    strides,    // for each d, AND shifted copies of the bit vector 64 starts at a time
};

struct VerifyOptions {
    unsigned threads = 1;  // 0 means std::thread::hardware_concurrency()
    VerifyStrategy strategy = VerifyStrategy::automatic;
};

// Searches `set` for a k-term arithmetic progression with difference >= 1.
// When one exists the returned witness is the lexicographically smallest by
// (start, difference), independent of strategy and thread count.
// Throws InvalidParameter for k < 3.
Verdict verify_ap_free(const IntegerSet& set, unsigned k, const VerifyOptions& options = {});

}  // namespace apfree
