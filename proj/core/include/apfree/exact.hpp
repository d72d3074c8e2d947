#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "apfree/integer_set.hpp"

namespace apfree {

class ExactCache;

struct SolveBudget {
    std::optional<std::uint64_t> max_nodes;
    std::optional<std::chrono::duration<double>> max_time;

    static SolveBudget unlimited() { return {}; }
    static SolveBudget nodes(std::uint64_t n) { return {n, std::nullopt}; }
};

// A solved instance: value = r_k(n), witness the lexicographically smallest
// optimal set (ascending-member comparison).
struct ExactRecord {
    unsigned k = 0;
    std::uint64_t n = 0;
    std::uint64_t value = 0;
    IntegerSet witness;
    std::uint64_t nodes_explored = 0;
    std::chrono::duration<double> wall_time{};
    bool from_cache = false;
};

// Budget ran out. lower_bound is certified by best_witness.
struct Unsolved {
    unsigned k = 0;
    std::uint64_t n = 0;
    std::uint64_t lower_bound = 0;
    std::optional<IntegerSet> best_witness;
    std::uint64_t nodes_explored = 0;
    std::string reason;
};

using SolveOutcome = std::variant<ExactRecord, Unsolved>;

inline bool solved(const SolveOutcome& o) noexcept { return std::holds_alternative<ExactRecord>(o); }

struct SolverOptions {
    // Prune with size + r_k(remaining length) instead of size + remaining length.
    // Needs r_k of every shorter interval, which the solver computes first.
    bool interval_bound = true;
    // Require max(S) <= n + 1 - min(S); the lexicographically smallest optimum
    // always satisfies it.
    bool reflection_symmetry = true;
    // Workers for subtree exploration. 0 means hardware concurrency.
    unsigned threads = 1;
};

// Depth-first branch and bound over 1..n, include before exclude.
// The budget covers all search work done by this call. Cache hits bypass it.
SolveOutcome solve_exact(unsigned k, std::uint64_t n, const SolveBudget& budget = {}, ExactCache* cache = nullptr,
                         const SolverOptions& options = {});

// One outcome per n in [n_from, n_to], each with its own budget. Unsolved
// instances do not abort the sweep. Throws std::logic_error if two consecutive
// solved values break r(n) <= r(n+1) <= r(n) + 1.
std::vector<SolveOutcome> solve_range(unsigned k, std::uint64_t n_from, std::uint64_t n_to,
                                      const SolveBudget& budget = {}, ExactCache* cache = nullptr,
                                      const SolverOptions& options = {});

// r_k(n)(k-1) <= r_k(nk), checked with exact values.
struct CorollaryReport {
    unsigned k = 0;
    std::uint64_t n = 0;
    std::optional<std::uint64_t> lhs;  // r_k(n) * (k-1)
    std::optional<std::uint64_t> rhs;  // r_k(n*k)
    bool indeterminate = false;
    bool holds = false;
};

CorollaryReport check_corollary_recursive(unsigned k, std::uint64_t n, const SolveBudget& budget = {},
                                          ExactCache* cache = nullptr, const SolverOptions& options = {});

// Stateful solver for one k. Keeps every r_k(L) it has established so later
// instances reuse them as interval bounds.
class ExactSolver {
public:
    ExactSolver(unsigned k, ExactCache* cache = nullptr, SolverOptions options = {});

    SolveOutcome solve(std::uint64_t n, const SolveBudget& budget);

    unsigned k() const noexcept { return k_; }

private:
    struct Known {
        std::uint64_t value;
        IntegerSet witness;
        bool from_cache = false;
    };

    const Known* known(std::uint64_t length) const noexcept;
    std::optional<Known> lookup_cache(std::uint64_t n);
    void remember(std::uint64_t n, Known entry);

    unsigned k_;
    ExactCache* cache_;
    SolverOptions options_;
    std::vector<std::optional<Known>> table_;  // table_[L] for interval length L
};

}  // namespace apfree
