#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace apfree {

// A function assumed strictly increasing and unbounded on [domain_min, inf).
struct MonotoneFn {
    std::function<double(double)> evaluator;
    double domain_min = 0.0;
    std::string name;

    double operator()(double x) const { return evaluator(x); }
};

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

inline constexpr double kDefaultInversionTol = 1e-9;

// x with f(x) = y: the bracket is grown by doubling from domain_min, then
// bisected to width <= tol; the midpoint is returned.
// Throws DomainError if y < f(domain_min) or no bracket is found.
double invert_monotone(const MonotoneFn& f, double y, double tol = kDefaultInversionTol);

struct InverseSample {
    double y = 0.0;
    double f_inverse = 0.0;
    double g_inverse = 0.0;
    double h_inverse = 0.0;
    bool holds = false;  // f^-1 > g^-1 > h^-1, each gap > 3 tol
};

struct InverseOrderingReport {
    bool precondition_ok = false;
    std::string precondition_message;  // first pointwise violation of f < g < h
    std::vector<InverseSample> samples;
    bool all_hold = false;
};

// For f < g < h pointwise, checks f^-1(y) > g^-1(y) > h^-1(y) at every y.
// The pointwise order is first validated on a grid covering all inversion
// brackets; a violation yields a report with precondition_ok = false.
InverseOrderingReport inverse_ordering_check(const MonotoneFn& f, const MonotoneFn& g, const MonotoneFn& h,
                                             std::span<const double> ys, double tol = kDefaultInversionTol);

// Bounds on the a-th element of a set whose counting function lies between
// f_lower and h_upper: (h_upper^-1(a), f_lower^-1(a)).
// Throws InvalidParameter if low exceeds high by more than the tolerance.
Interval element_size_bounds(const MonotoneFn& f_lower, const MonotoneFn& h_upper, std::uint64_t a,
                             double tol = kDefaultInversionTol);

// Truncated reciprocal sums (sum 1/f_lower^-1(n), sum 1/h_upper^-1(n)) for
// n = n_min..N, where n_min is the first index inside both inversion domains.
Interval reciprocal_sum_bounds_for_set(const MonotoneFn& f_lower, const MonotoneFn& h_upper, std::uint64_t N,
                                       double tol = kDefaultInversionTol);

// First index n >= 1 with n >= f(domain_min) for both functions.
std::uint64_t reciprocal_sum_start(const MonotoneFn& f_lower, const MonotoneFn& h_upper);

}  // namespace apfree
