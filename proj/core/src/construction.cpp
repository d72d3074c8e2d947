#include "apfree/construction.hpp"

#include <stdexcept>
#include <string>

#include "apfree/errors.hpp"

namespace apfree {

namespace {

void require_prime(unsigned k) {
    if (!is_prime(k)) throw InvalidParameter("k must be prime, got " + std::to_string(k));
}

// k^r, or nothing if it exceeds `limit`.
std::optional<std::uint64_t> checked_power(std::uint64_t k, unsigned r, std::uint64_t limit) {
    std::uint64_t value = 1;
    for (unsigned i = 0; i < r; ++i) {
        if (value > limit / k) return std::nullopt;
        value *= k;
    }
    return value;
}

}  // namespace

bool is_prime(std::uint64_t k) noexcept {
    if (k < 2) return false;
    if (k < 4) return true;
    if (k % 2 == 0) return false;
    for (std::uint64_t p = 3; p <= k / p; p += 2) {
        if (k % p == 0) return false;
    }
    return true;
}

IntegerSet block_expand(const IntegerSet& a, unsigned k, const ConstructionOptions& options) {
    require_prime(k);
    const std::uint64_t n = a.universe_max();
    if (n > options.universe_limit / k) {
        throw ResourceLimit("block expansion needs a universe of " + std::to_string(n) + "*" + std::to_string(k) +
                            ", over the limit of " + std::to_string(options.universe_limit));
    }
    if (options.strict && k >= 3) {
        const Verdict verdict = verify_ap_free(a, k, {.threads = options.threads});
        if (!verdict.ap_free()) {
            throw InvalidParameter("input to block_expand contains a " + std::to_string(k) + "-AP starting at " +
                                   std::to_string(verdict.witness->start) + " with difference " +
                                   std::to_string(verdict.witness->difference));
        }
    }
    IntegerSet::Builder out(n * k);
    for (std::uint64_t m : a) {
        const std::uint64_t base = (m - 1) * k;
        out.insert_range(base + 1, base + k - 1);
    }
    return std::move(out).build();
}

ConstructionTrace iterate_construction(unsigned k, unsigned r, const ConstructionOptions& options) {
    require_prime(k);
    if (k < 3) throw InvalidParameter("k must be at least 3, got " + std::to_string(k));
    if (r == 0) throw InvalidParameter("r must be positive");
    if (!checked_power(k, r, options.universe_limit)) {
        throw ResourceLimit(std::to_string(k) + "^" + std::to_string(r) + " exceeds the universe limit of " +
                            std::to_string(options.universe_limit));
    }

    ConstructionOptions expand_options = options;
    expand_options.strict = false;

    IntegerSet current = IntegerSet::interval(k, k - 1);
    std::vector<ConstructionLevel> levels{{current.universe_max(), current.size()}};
    for (unsigned level = 2; level <= r; ++level) {
        current = block_expand(current, k, expand_options);
        levels.push_back({current.universe_max(), current.size()});
    }

    ConstructionTrace trace{k, std::move(levels), std::move(current), false};
    if (options.verify_final) {
        const Verdict verdict = verify_ap_free(trace.final_set, k, {.threads = options.threads});
        if (!verdict.ap_free()) {
            throw std::logic_error("iterated construction produced a " + std::to_string(k) + "-AP at start " +
                                   std::to_string(verdict.witness->start));
        }
        trace.verified = true;
    }
    return trace;
}

IntegerSet truncate(const IntegerSet& a, std::uint64_t n) {
    if (n == 0) throw InvalidParameter("truncation bound must be positive");
    std::vector<std::uint64_t> words(a.words().begin(), a.words().end());
    return IntegerSet::from_words(n, std::move(words));
}

}  // namespace apfree
