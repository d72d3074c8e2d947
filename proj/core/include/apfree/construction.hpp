#pragma once

#include <cstdint>
#include <vector>

#include "apfree/ap_verify.hpp"
#include "apfree/integer_set.hpp"

namespace apfree {

// Deterministic trial division; adequate for the small k this library handles.
bool is_prime(std::uint64_t k) noexcept;

struct ConstructionOptions {
    // Re-verify the input of block_expand before expanding it.
    bool strict = false;
    // Verify the final set of iterate_construction.
    bool verify_final = true;
    unsigned threads = 1;
    std::uint64_t universe_limit = kDefaultUniverseLimit;
};

struct ConstructionLevel {
    std::uint64_t universe_max = 0;
    std::uint64_t cardinality = 0;
};

struct ConstructionTrace {
    unsigned prime_k = 0;
    std::vector<ConstructionLevel> levels;  // levels[i] describes level i+1
    IntegerSet final_set;
    bool verified = false;  // final_set was checked k-AP-free by verify_ap_free
};

// Replaces each a in A by the k-1 consecutive integers (a-1)k+1 .. (a-1)k+(k-1).
// The result lives in {1..k*n} where n = A.universe_max() and has no multiple of k.
// Throws InvalidParameter if k is not prime (or, in strict mode, if A contains a
// k-AP) and ResourceLimit if k*n exceeds the universe limit.
IntegerSet block_expand(const IntegerSet& a, unsigned k, const ConstructionOptions& options = {});

// Level 1 is {1..k-1} in {1..k}; level i+1 is block_expand(level i).
ConstructionTrace iterate_construction(unsigned k, unsigned r, const ConstructionOptions& options = {});

// A ∩ {1..n}, with universe n.
IntegerSet truncate(const IntegerSet& a, std::uint64_t n);

}  // namespace apfree
