#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "apfree/log_value.hpp"

namespace apfree {

// Closed-form bounds on r_k(n). Every log inside the displayed formulas is
// base 2; theorem-main is a plain power of n and does not depend on the base.
enum class BoundFamily {
    theorem_main,  // n^(1 - c_k / (k ln k)), lower, prime k
    obryant,       // c n / 2^(a 2^((a-1)/2) (log n)^(1/a) - log log n / (2a)), lower, a = ceil(log k)
    gowers,        // n / (log log n)^(2^(2^(k+9))), upper
    roth,          // c n / log log n, upper, k = 3
    bloom_r3,      // c n (log log n)^4 / log n, upper, k = 3
    r3_lower,      // n / 2^sqrt(8 log n), lower, k = 3
    green_tao_r4,  // c1 n / (log n)^c2, upper, k = 4
};

inline constexpr BoundFamily kAllFamilies[] = {
    BoundFamily::theorem_main, BoundFamily::obryant,  BoundFamily::gowers,       BoundFamily::roth,
    BoundFamily::bloom_r3,     BoundFamily::r3_lower, BoundFamily::green_tao_r4,
};

std::string_view family_name(BoundFamily family) noexcept;
// Throws InvalidParameter on an unknown name.
BoundFamily parse_family(std::string_view name);
bool is_lower_bound(BoundFamily family) noexcept;

// A bound family with its parameters. Unspecified constants default to 1.
struct BoundSpec {
    BoundFamily family = BoundFamily::theorem_main;
    unsigned k = 3;
    double c = 1.0;
    double c1 = 1.0;
    double c2 = 1.0;
    // log2 of the Gowers exponent; defaults to 2^(k+9).
    std::optional<double> gowers_exponent_log2;

    // Throws InvalidParameter when k or a constant does not fit the family.
    void validate() const;
    // True when `k` is admissible for `family`.
    static bool accepts_k(BoundFamily family, unsigned k) noexcept;
};

// k ln(k/(k-1)). Throws InvalidParameter for k < 2.
double ck_constant(unsigned k);

// 1 - c_k / (k ln k), the exponent of n in the main lower bound.
double theorem_exponent(unsigned k);

// All evaluators throw DomainError when a logarithm in the formula is not
// positive and InvalidParameter for an inadmissible k.
LogValue theorem_lower_bound(LogValue n, unsigned k);
LogValue obryant_lower_bound(LogValue n, unsigned k, double c = 1.0);
LogValue gowers_upper_bound(LogValue n, unsigned k, std::optional<double> exponent_log2 = std::nullopt);
LogValue roth_upper_bound(LogValue n, double c = 1.0);
LogValue bloom_r3_upper_bound(LogValue n, double c = 1.0);
LogValue r3_lower_bound(LogValue n);
LogValue green_tao_r4_upper_bound(LogValue n, double c1 = 1.0, double c2 = 1.0);

// log2 of the amount subtracted from log2 n by the Gowers denominator,
// i.e. log2(E * log2(log log n)) with E the exponent. Finite even when the
// bound itself underflows.
double gowers_deficit_log2(LogValue n, unsigned k, std::optional<double> exponent_log2 = std::nullopt);

LogValue evaluate(const BoundSpec& spec, LogValue n);

// a = ceil(log2 k), computed exactly.
unsigned obryant_a(unsigned k);

struct CrossoverResult {
    bool found = false;
    double log2_n_star = 0.0;  // valid when found
    unsigned bisection_steps = 0;
};

// Smallest n (as L = log2 n in [1, 1e6]) where the O'Bryant bound with
// constant c reaches the main lower bound. A coarse geometric scan locates
// the first sign change, then bisection narrows it to relative tolerance
// 1e-6 in L.
CrossoverResult crossover_n(unsigned k, double c_obryant = 1.0);

// log2(O'Bryant) - log2(theorem-main) at L = log2 n; defined for L >= 1.
double crossover_gap(unsigned k, double c_obryant, double log2_n);

// One table row: n,family,k,log2_value,value_or_inf_flag.
struct BoundRow {
    LogValue n;
    BoundSpec spec;
    std::optional<LogValue> value;  // empty on domain error
    std::string status;             // "ok" or the domain error message
};

BoundRow evaluate_row(const BoundSpec& spec, LogValue n);
void write_bound_csv_header(std::ostream& out);
void write_bound_csv_row(std::ostream& out, const BoundRow& row);
// n as a plain integer/decimal when representable, "2^L" otherwise.
std::string format_n(LogValue n);

}  // namespace apfree
