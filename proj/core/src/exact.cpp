#include "apfree/exact.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "apfree/construction.hpp"
#include "apfree/errors.hpp"
#include "apfree/exact_cache.hpp"

namespace apfree {

namespace {

using Clock = std::chrono::steady_clock;

struct SharedSearch {
    std::uint64_t max_nodes = 0;  // 0 = unlimited
    std::optional<Clock::time_point> deadline;
    std::atomic<std::uint64_t> nodes{0};
    std::atomic<bool> aborted{false};
    std::atomic<std::uint64_t> global_best{0};
};

// True if m would be the last term of a k-AP whose other terms are marked in `in`.
bool completes_progression(const std::vector<std::uint8_t>& in, unsigned k, std::uint64_t m) noexcept {
    const std::uint64_t max_d = (m - 1) / (k - 1);
    for (std::uint64_t d = 1; d <= max_d; ++d) {
        unsigned t = 1;
        while (t < k && in[m - t * d]) ++t;
        if (t == k) return true;
    }
    return false;
}

// A partial assignment of elements 1..depth, the starting point of a subtree.
struct Prefix {
    std::vector<std::uint64_t> members;
    std::uint64_t cap = 0;
};

// One worker's depth-first search state over {1..n}.
class SubtreeSearch {
public:
    SubtreeSearch(unsigned k, std::uint64_t n, const std::vector<std::uint64_t>& bound, bool reflection,
                  SharedSearch& shared)
        : k_(k), n_(n), bound_(bound), reflection_(reflection), shared_(shared), in_(n + 1, 0) {}

    // Explores every completion of `prefix` over elements depth+1..cap.
    // Returns the first set found larger than `seed`, which is the
    // lexicographically smallest among the largest sets in this subtree.
    std::optional<std::vector<std::uint64_t>> run(const Prefix& prefix, std::uint64_t depth, std::uint64_t seed) {
        std::fill(in_.begin(), in_.end(), 0);
        current_ = prefix.members;
        for (std::uint64_t m : current_) in_[m] = 1;
        cap_ = prefix.cap;
        local_best_ = seed;
        best_.reset();
        dfs(depth + 1);
        return best_;
    }

    std::uint64_t flush_nodes() {
        const std::uint64_t pending = pending_nodes_;
        pending_nodes_ = 0;
        return shared_.nodes.fetch_add(pending, std::memory_order_relaxed) + pending;
    }

private:
    void dfs(std::uint64_t m) {
        if (shared_.aborted.load(std::memory_order_relaxed)) return;
        if (++pending_nodes_ >= 1024) check_budget();

        const std::uint64_t size = current_.size();
        const std::uint64_t remaining = m > cap_ ? 0 : cap_ - m + 1;
        const std::uint64_t reach = size + bound_[remaining];
        if (reach <= local_best_ || reach < shared_.global_best.load(std::memory_order_relaxed)) return;

        if (remaining == 0) {
            local_best_ = size;
            best_ = current_;
            std::uint64_t g = shared_.global_best.load(std::memory_order_relaxed);
            while (size > g && !shared_.global_best.compare_exchange_weak(g, size, std::memory_order_relaxed)) {
            }
            return;
        }

        const bool first = current_.empty();
        const bool mirror_ok = !first || !reflection_ || m <= n_ + 1 - m;
        if (mirror_ok && !completes_progression(in_, k_, m)) {
            const std::uint64_t saved_cap = cap_;
            if (first && reflection_) cap_ = std::min(cap_, n_ + 1 - m);
            in_[m] = 1;
            current_.push_back(m);
            dfs(m + 1);
            current_.pop_back();
            in_[m] = 0;
            cap_ = saved_cap;
        }
        dfs(m + 1);
    }

    void check_budget() {
        const std::uint64_t total = flush_nodes();
        if (shared_.max_nodes != 0 && total > shared_.max_nodes) shared_.aborted.store(true);
        if (shared_.deadline && Clock::now() > *shared_.deadline) shared_.aborted.store(true);
    }

    unsigned k_;
    std::uint64_t n_;
    const std::vector<std::uint64_t>& bound_;
    bool reflection_;
    SharedSearch& shared_;

    std::vector<std::uint8_t> in_;
    std::vector<std::uint64_t> current_;
    std::uint64_t cap_ = 0;
    std::uint64_t local_best_ = 0;
    std::optional<std::vector<std::uint64_t>> best_;
    std::uint64_t pending_nodes_ = 0;
};

// All AP-free, mirror-admissible assignments of 1..depth in include-first order.
std::vector<Prefix> enumerate_prefixes(unsigned k, std::uint64_t n, std::uint64_t depth, bool reflection) {
    std::vector<Prefix> out;
    std::vector<std::uint8_t> in(n + 1, 0);
    Prefix current{{}, n};


    auto rec = [&](auto&& self, std::uint64_t m) -> void {
        if (m > depth || m > current.cap) {
            out.push_back(current);
            return;
        }
        const bool first = current.members.empty();
        if ((!first || !reflection || m <= n + 1 - m) && !completes_progression(in, k, m)) {
            const std::uint64_t saved = current.cap;
            if (first && reflection) current.cap = std::min(current.cap, n + 1 - m);
            in[m] = 1;
            current.members.push_back(m);
            self(self, m + 1);
            current.members.pop_back();
            in[m] = 0;
            current.cap = saved;
        }
        self(self, m + 1);
    };
    rec(rec, 1);
    return out;
}

struct SearchResult {
    bool complete = false;
    std::optional<std::vector<std::uint64_t>> best;  // largest set found
    std::uint64_t nodes = 0;
};

SearchResult run_search(unsigned k, std::uint64_t n, const std::vector<std::uint64_t>& bound, std::uint64_t seed,
                        const SolverOptions& options, std::uint64_t max_nodes,
                        std::optional<Clock::time_point> deadline) {
    SharedSearch shared;
    shared.max_nodes = max_nodes;
    shared.deadline = deadline;
    shared.global_best.store(seed);

    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    if (n < 16) threads = 1;

    std::vector<Prefix> prefixes;
    std::uint64_t depth = 0;
    if (threads == 1) {
        prefixes.push_back({{}, n});
    } else {
        depth = std::min<std::uint64_t>(12, n / 2);
        prefixes = enumerate_prefixes(k, n, depth, options.reflection_symmetry);
    }

    std::vector<std::optional<std::vector<std::uint64_t>>> per_prefix(prefixes.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        SubtreeSearch search(k, n, bound, options.reflection_symmetry, shared);
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= prefixes.size() || shared.aborted.load()) break;
            const std::uint64_t start_depth = std::min(depth, prefixes[i].cap);
            per_prefix[i] = search.run(prefixes[i], start_depth, seed);
        }
        search.flush_nodes();
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    SearchResult result;
    result.complete = !shared.aborted.load();
    result.nodes = shared.nodes.load();
    // Earliest prefix (DFS order) among those reaching the maximum.
    for (auto& candidate : per_prefix) {
        if (candidate && (!result.best || candidate->size() > result.best->size())) result.best = std::move(candidate);
    }
    return result;
}

}  // namespace

ExactSolver::ExactSolver(unsigned k, ExactCache* cache, SolverOptions options)
    : k_(k), cache_(cache), options_(options) {
    if (k < 3) throw InvalidParameter("k must be at least 3, got " + std::to_string(k));
}

const ExactSolver::Known* ExactSolver::known(std::uint64_t length) const noexcept {
    if (length < table_.size() && table_[length]) return &*table_[length];
    return nullptr;
}

void ExactSolver::remember(std::uint64_t n, Known entry) {
    if (table_.size() <= n) table_.resize(n + 1);
    table_[n] = std::move(entry);
}

std::optional<ExactSolver::Known> ExactSolver::lookup_cache(std::uint64_t n) {
    if (!cache_) return std::nullopt;
    auto hit = cache_->lookup(k_, n);
    if (!hit) return std::nullopt;
    return Known{hit->value, std::move(hit->witness), true};
}

SolveOutcome ExactSolver::solve(std::uint64_t n, const SolveBudget& budget) {
    if (n == 0) throw InvalidParameter("n must be positive");

    if (const Known* hit = known(n)) {
        return ExactRecord{k_, n, hit->value, hit->witness, 0, {}, hit->from_cache};
    }
    if (auto hit = lookup_cache(n)) {
        remember(n, *hit);
        return ExactRecord{k_, n, hit->value, hit->witness, 0, {}, true};
    }

    const auto started = Clock::now();
    std::optional<Clock::time_point> deadline;
    if (budget.max_time) deadline = started + std::chrono::duration_cast<Clock::duration>(*budget.max_time);
    std::uint64_t nodes_used = 0;

    auto unsolved = [&](std::uint64_t failed_at, std::optional<std::vector<std::uint64_t>> partial) {
        Unsolved u{k_, n, 0, std::nullopt, nodes_used, {}};
        u.reason = "budget exhausted while solving r_" + std::to_string(k_) + "(" + std::to_string(failed_at) + ")";
        if (partial && !partial->empty()) {
            u.lower_bound = partial->size();
            u.best_witness = IntegerSet::from_members(n, *partial);
        }
        for (std::uint64_t L = std::min(n, static_cast<std::uint64_t>(table_.size())); L-- > 1;) {
            if (const Known* prior = known(L); prior && prior->value > u.lower_bound) {
                u.lower_bound = prior->value;
                u.best_witness = truncate(prior->witness, n);
                break;
            }
        }
        return u;
    };

    // Solve every shorter length first so each search sees the tight interval bound.
    const std::uint64_t first = options_.interval_bound ? 1 : n;
    for (std::uint64_t L = first; L <= n; ++L) {
        if (known(L)) continue;
        if (auto hit = lookup_cache(L)) {
            remember(L, std::move(*hit));
            continue;
        }

        std::vector<std::uint64_t> bound(L + 1);
        for (std::uint64_t len = 0; len <= L; ++len) {
            const Known* prior = options_.interval_bound && len < L ? known(len) : nullptr;
            bound[len] = prior ? prior->value : len;
        }
        const Known* previous = L > 1 ? known(L - 1) : nullptr;
        // r(L) >= r(L-1), so only sets of size >= r(L-1) need to be found.
        const std::uint64_t seed = previous ? previous->value - 1 : 0;

        std::uint64_t node_allowance = 0;
        if (budget.max_nodes) {
            if (nodes_used >= *budget.max_nodes) return unsolved(L, std::nullopt);
            node_allowance = *budget.max_nodes - nodes_used;
        }
        SearchResult result = run_search(k_, L, bound, seed, options_, node_allowance, deadline);
        nodes_used += result.nodes;
        if (!result.complete) return unsolved(L, L == n ? std::move(result.best) : std::nullopt);
        if (!result.best) throw std::logic_error("exact search finished without a witness");

        Known entry{result.best->size(), IntegerSet::from_members(L, *result.best), false};
        if (cache_) cache_->store(k_, L, entry.value, entry.witness);
        remember(L, std::move(entry));
    }

    const Known* answer = known(n);
    return ExactRecord{k_, n, answer->value, answer->witness, nodes_used, Clock::now() - started, false};
}

SolveOutcome solve_exact(unsigned k, std::uint64_t n, const SolveBudget& budget, ExactCache* cache,
                         const SolverOptions& options) {
    if (k < 3) throw InvalidParameter("k must be at least 3, got " + std::to_string(k));
    if (n == 0) throw InvalidParameter("n must be positive");
    ExactSolver solver(k, cache, options);
    return solver.solve(n, budget);
}

std::vector<SolveOutcome> solve_range(unsigned k, std::uint64_t n_from, std::uint64_t n_to, const SolveBudget& budget,
                                      ExactCache* cache, const SolverOptions& options) {
    if (n_from == 0) throw InvalidParameter("n must be positive");
    if (n_from > n_to) throw InvalidParameter("empty range " + std::to_string(n_from) + ":" + std::to_string(n_to));
    ExactSolver solver(k, cache, options);
    std::vector<SolveOutcome> out;
    out.reserve(n_to - n_from + 1);
    for (std::uint64_t n = n_from; n <= n_to; ++n) {
        out.push_back(solver.solve(n, budget));
        if (out.size() >= 2) {
            const auto* prev = std::get_if<ExactRecord>(&out[out.size() - 2]);
            const auto* cur = std::get_if<ExactRecord>(&out.back());
            if (prev && cur && (cur->value < prev->value || cur->value > prev->value + 1)) {
                throw std::logic_error("monotonicity violated: r_" + std::to_string(k) + "(" + std::to_string(n - 1) +
                                       ")=" + std::to_string(prev->value) + ", r_" + std::to_string(k) + "(" +
                                       std::to_string(n) + ")=" + std::to_string(cur->value));
            }
        }
    }
    return out;
}

CorollaryReport check_corollary_recursive(unsigned k, std::uint64_t n, const SolveBudget& budget, ExactCache* cache,
                                          const SolverOptions& options) {
    if (!is_prime(k) || k < 3) throw InvalidParameter("k must be an odd prime, got " + std::to_string(k));
    if (n == 0) throw InvalidParameter("n must be positive");
    ExactSolver solver(k, cache, options);
    CorollaryReport report{k, n, std::nullopt, std::nullopt, false, false};

    const SolveOutcome small = solver.solve(n, budget);
    const SolveOutcome large = solver.solve(n * k, budget);
    if (const auto* rec = std::get_if<ExactRecord>(&small)) report.lhs = rec->value * (k - 1);
    if (const auto* rec = std::get_if<ExactRecord>(&large)) report.rhs = rec->value;
    report.indeterminate = !report.lhs || !report.rhs;
    report.holds = !report.indeterminate && *report.lhs <= *report.rhs;
    return report;
}

}  // namespace apfree
