#include "apfree/ap_verify.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <limits>
#include <thread>
#include <vector>

#include "apfree/errors.hpp"

namespace apfree {

namespace {

constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();

unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

// Runs `work(worker_index)` on `count` workers; a single worker runs inline.
template <class Work>
void run_workers(unsigned count, Work&& work) {
    if (count <= 1) {
        work(0u);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (unsigned t = 0; t < count; ++t) pool.emplace_back([&work, t] { work(t); });
}

void atomic_min(std::atomic<std::uint64_t>& target, std::uint64_t value) {
    std::uint64_t current = target.load(std::memory_order_relaxed);
    while (value < current && !target.compare_exchange_weak(current, value, std::memory_order_relaxed)) {
    }
}

std::optional<ApWitness> min_witness(const std::vector<std::optional<ApWitness>>& found) {
    std::optional<ApWitness> best;
    for (const auto& w : found) {
        if (w && (!best || *w < *best)) best = w;
    }
    return best;
}

// For each member a in ascending order, try members b = a + d in ascending
// order. The first hit for a given a has the smallest d for that a.
std::optional<ApWitness> scan_pairs(const IntegerSet& set, unsigned k, unsigned threads) {
    const std::vector<std::uint64_t> members = set.members();
    const std::uint64_t n = set.universe_max();
    const std::size_t count = members.size();
    constexpr std::size_t kChunk = 64;
    const std::size_t chunks = (count + kChunk - 1) / kChunk;

    std::atomic<std::size_t> next_chunk{0};
    std::atomic<std::uint64_t> best_start{kNone};
    std::vector<std::optional<ApWitness>> found(threads);

    run_workers(threads, [&](unsigned worker) {
        std::optional<ApWitness> local;
        for (;;) {
            const std::size_t chunk = next_chunk.fetch_add(1, std::memory_order_relaxed);
            if (chunk >= chunks) break;
            const std::size_t begin = chunk * kChunk;
            const std::size_t end = std::min(count, begin + kChunk);
            if (members[begin] > best_start.load(std::memory_order_relaxed)) break;
            for (std::size_t i = begin; i < end; ++i) {
                const std::uint64_t a = members[i];
                if (a > best_start.load(std::memory_order_relaxed)) break;
                const std::uint64_t max_d = (n - a) / (k - 1);
                bool hit = false;
                for (std::size_t j = i + 1; j < count; ++j) {
                    const std::uint64_t d = members[j] - a;
                    if (d > max_d) break;
                    unsigned t = 2;
                    while (t < k && set.contains(a + t * d)) ++t;
                    if (t == k) {
                        ApWitness w{a, d, k};
                        if (!local || w < *local) local = w;
                        atomic_min(best_start, a);
                        hit = true;
                        break;
                    }
                }
                if (hit) break;
            }
        }
        found[worker] = local;
    });
    return min_witness(found);
}

// 64 consecutive bits of the vector starting at bit `pos`; reads past the end are zero.
inline std::uint64_t bits_at(const std::vector<std::uint64_t>& words, std::uint64_t pos) noexcept {
    const std::size_t q = static_cast<std::size_t>(pos >> 6);
    const unsigned r = static_cast<unsigned>(pos & 63);
    if (q >= words.size()) return 0;
    std::uint64_t lo = words[q] >> r;
    if (r != 0 && q + 1 < words.size()) lo |= words[q + 1] << (64 - r);
    return lo;
}

// For each difference d, start positions a with a, a+d, ..., a+(k-1)d all
// present are the set bits of S & (S >> d) & ... & (S >> (k-1)d).
std::optional<ApWitness> scan_strides(const IntegerSet& set, unsigned k, unsigned threads) {
    const std::uint64_t n = set.universe_max();
    const std::vector<std::uint64_t> words(set.words().begin(), set.words().end());
    const std::uint64_t max_d = (n - 1) / (k - 1);
    constexpr std::uint64_t kChunk = 32;

    std::atomic<std::uint64_t> next_d{1};
    std::atomic<std::uint64_t> best_start{kNone};
    std::vector<std::optional<ApWitness>> found(threads);

    run_workers(threads, [&](unsigned worker) {
        std::optional<ApWitness> local;
        for (;;) {
            const std::uint64_t d_begin = next_d.fetch_add(kChunk, std::memory_order_relaxed);
            if (d_begin > max_d) break;
            const std::uint64_t d_end = std::min(max_d, d_begin + kChunk - 1);
            for (std::uint64_t d = d_begin; d <= d_end; ++d) {
                const std::uint64_t span = (k - 1) * d;
                // Last admissible start bit (0-based): a - 1 <= n - 1 - span.
                std::uint64_t last_bit = n - 1 - span;
                const std::uint64_t bound = best_start.load(std::memory_order_relaxed);
                if (bound != kNone) last_bit = std::min(last_bit, bound - 1);
                const std::size_t last_word = static_cast<std::size_t>(last_bit >> 6);
                for (std::size_t w = 0; w <= last_word; ++w) {
                    std::uint64_t acc = words[w];
                    const std::uint64_t base = static_cast<std::uint64_t>(w) << 6;
                    for (unsigned t = 1; t < k && acc; ++t) acc &= bits_at(words, base + t * d);
                    if (w == last_word) {
                        const unsigned keep = static_cast<unsigned>(last_bit & 63) + 1;
                        if (keep < 64) acc &= (std::uint64_t{1} << keep) - 1;
                    }
                    if (acc) {
                        const std::uint64_t a = base + std::countr_zero(acc) + 1;
                        ApWitness wit{a, d, k};
                        if (!local || wit < *local) local = wit;
                        atomic_min(best_start, a);
                        break;
                    }
                }
            }
        }
        found[worker] = local;
    });
    return min_witness(found);
}

}  // namespace

Verdict verify_ap_free(const IntegerSet& set, unsigned k, const VerifyOptions& options) {
    if (k < 3) throw InvalidParameter("k must be at least 3, got " + std::to_string(k));
    const std::uint64_t n = set.universe_max();
    if (set.size() < k || n < k) return {};

    const unsigned threads = resolve_threads(options.threads);
    VerifyStrategy strategy = options.strategy;
    if (strategy == VerifyStrategy::automatic) {
        // Pair work ~ |S|^2 / 2(k-1) probes, stride work ~ n^2 / 64(k-1) words.
        const double s = static_cast<double>(set.size());
        const double u = static_cast<double>(n);
        strategy = s * s * 16.0 < u * u ? VerifyStrategy::pairs : VerifyStrategy::strides;
    }
    if (strategy == VerifyStrategy::pairs) return {scan_pairs(set, k, threads)};
    return {scan_strides(set, k, threads)};
}

}  // namespace apfree
