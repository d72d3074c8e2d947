#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace apfree {

// Depth d and outer exponent s of the chain n ln n ln ln n ... (ln^(d) n)^s.
struct IterLogSpec {
    unsigned d = 1;
    double s = 1.0;

    // Throws InvalidParameter unless d >= 1 and s >= 1.
    void validate() const;
};

// Largest depth whose threshold is representable as a double.
inline constexpr unsigned kMaxIterLogDepth = 4;

// ln applied `times` times.
double iterated_log(double x, unsigned times);

// Smallest x where the d-times-iterated log is positive: e↑↑(d-1), cached.
// Arguments at or within 1% above it are rejected as numerical noise.
double iterlog_threshold(unsigned d);

// n * prod_{i<d} ln^(i) n * (ln^(d) n)^s.
// Throws DomainError when n <= 1.01 * iterlog_threshold(d).
double iterlog_product(double n, const IterLogSpec& spec);

// Natural log of iterlog_product(exp(ln_n)), for arguments too large for a
// double. Returns NaN when the chain is undefined at that point.
double ln_iterlog_product(double ln_n, const IterLogSpec& spec) noexcept;

// sum_{n=N0}^{N} 1 / iterlog_product(n), Neumaier-compensated.
double reciprocal_partial_sum(const IterLogSpec& spec, std::uint64_t N0, std::uint64_t N);

// Same sum with plain accumulation, kept for comparison.
double reciprocal_partial_sum_naive(const IterLogSpec& spec, std::uint64_t N0, std::uint64_t N);

// Closed form of int_a^b dx / iterlog_product(x): ln^(d+1) b - ln^(d+1) a
// when s = 1, ((ln^(d) b)^(1-s) - (ln^(d) a)^(1-s)) / (1-s) otherwise.
double comparison_integral(const IterLogSpec& spec, double a, double b);

// int_a^inf for s > 1; +inf for s = 1.
double comparison_tail(const IterLogSpec& spec, double a);

// Numeric probes for the growth conditions that decide whether an AP-free
// set can be large. Neither probe decides convergence; each only reports
// where a ratio settles on one side of 1 over a run of doublings.
enum class ProbeKind {
    // f(n) = c n / (ln n ... ln^(d) n), g = iterlog_product with depth d+1, s = 1;
    // looks for f(g(n)) / n > 1.
    large_set,
    // h(n) = c n / (ln n ... (ln^(d) n)^s), g = iterlog_product with depth d and
    // exponent s - eps, eps = (s-1)/2; looks for h(g(n)) / n < 1.
    small_set,
};

struct ProbeSample {
    double n = 0.0;
    double ratio = 0.0;
};

struct ProbeReport {
    ProbeKind kind = ProbeKind::large_set;
    unsigned d = 1;
    double s = 1.0;
    double epsilon = 0.0;
    double c = 1.0;
    bool threshold_found = false;
    double threshold = 0.0;            // first n of the qualifying run
    std::vector<ProbeSample> samples;  // the qualifying run, doubling n
};

// Scans n = n0 * 2^j and reports the first j from which `samples` consecutive
// doublings all satisfy the probe's condition.
ProbeReport probe_large_set(unsigned d, double c = 1.0, unsigned samples = 20);
ProbeReport probe_small_set(unsigned d, double s, double c = 1.0, unsigned samples = 20);

// The ratio the probe inspects at n (NaN outside the chains' domains).
double probe_ratio(ProbeKind kind, unsigned d, double s, double c, double n) noexcept;

// {"theorem": "11"|"13", "d", "s", "epsilon", "c", "threshold_found",
//  "threshold", "samples": [[n, ratio], ...]}
std::string probe_report_json(const ProbeReport& report);

}  // namespace apfree
