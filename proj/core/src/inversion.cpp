#include "apfree/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "apfree/errors.hpp"

namespace apfree {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string label(const MonotoneFn& f, const char* fallback) { return f.name.empty() ? fallback : f.name; }

}  // namespace

double invert_monotone(const MonotoneFn& f, double y, double tol) {
    if (!(tol > 0.0)) throw InvalidParameter("inversion tolerance must be positive");
    double lo = f.domain_min;
    const double at_min = f(lo);
    if (y < at_min) {
        throw DomainError("cannot invert " + label(f, "f") + " at y=" + fmt(y) + ": below f(domain_min)=" + fmt(at_min));
    }
    if (y == at_min) return lo;

    double step = std::max(1.0, std::fabs(f.domain_min));
    double hi = f.domain_min + step;
    for (int doublings = 0; !(f(hi) >= y); ++doublings) {
        if (doublings > 2000 || !std::isfinite(hi)) {
            throw DomainError("cannot bracket " + label(f, "f") + "^-1(" + fmt(y) + ")");
        }
        lo = hi;
        step *= 2.0;
        hi = f.domain_min + step;
    }

    while (hi - lo > tol) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;  // tol below the double spacing here
        if (f(mid) < y) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo + 0.5 * (hi - lo);
}

InverseOrderingReport inverse_ordering_check(const MonotoneFn& f, const MonotoneFn& g, const MonotoneFn& h,
                                             std::span<const double> ys, double tol) {
    InverseOrderingReport report;
    if (ys.empty()) {
        report.precondition_ok = true;
        report.all_hold = true;
        return report;
    }

    std::vector<InverseSample> samples;
    samples.reserve(ys.size());
    for (double y : ys) {
        InverseSample s;
        s.y = y;
        s.f_inverse = invert_monotone(f, y, tol);
        s.g_inverse = invert_monotone(g, y, tol);
        s.h_inverse = invert_monotone(h, y, tol);
        samples.push_back(s);
    }

    // Grid spanning every computed inverse.
    const double domain_lo = std::max({f.domain_min, g.domain_min, h.domain_min});
    double x_lo = samples.front().h_inverse;
    double x_hi = x_lo;
    for (const auto& s : samples) {
        x_lo = std::min({x_lo, s.f_inverse, s.g_inverse, s.h_inverse});
        x_hi = std::max({x_hi, s.f_inverse, s.g_inverse, s.h_inverse});
    }
    x_lo = std::max(x_lo, domain_lo);
    constexpr int kGrid = 256;
    for (int i = 0; i <= kGrid; ++i) {
        const double x = x_lo + (x_hi - x_lo) * static_cast<double>(i) / kGrid;
        const double fx = f(x), gx = g(x), hx = h(x);
        if (!(fx < gx && gx < hx)) {
            report.precondition_message = "pointwise order f < g < h fails at x=" + fmt(x) + " (" + fmt(fx) + ", " +
                                          fmt(gx) + ", " + fmt(hx) + ")";
            return report;
        }
    }
    report.precondition_ok = true;

    const double margin = 3.0 * tol;
    report.all_hold = true;
    for (auto& s : samples) {
        s.holds = s.f_inverse - s.g_inverse > margin && s.g_inverse - s.h_inverse > margin;
        report.all_hold = report.all_hold && s.holds;
    }
    report.samples = std::move(samples);
    return report;
}

Interval element_size_bounds(const MonotoneFn& f_lower, const MonotoneFn& h_upper, std::uint64_t a, double tol) {
    if (a == 0) throw InvalidParameter("element index must be positive");
    const double y = static_cast<double>(a);
    Interval out{invert_monotone(h_upper, y, tol), invert_monotone(f_lower, y, tol)};
    if (out.low > out.high + 2.0 * tol) {
        throw InvalidParameter("h_upper^-1(" + fmt(y) + ")=" + fmt(out.low) + " exceeds f_lower^-1=" + fmt(out.high) +
                               "; f_lower must lie below h_upper");
    }
    return out;
}

std::uint64_t reciprocal_sum_start(const MonotoneFn& f_lower, const MonotoneFn& h_upper) {
    const double floor_value = std::max(f_lower(f_lower.domain_min), h_upper(h_upper.domain_min));
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(std::max(1.0, floor_value))));
}

Interval reciprocal_sum_bounds_for_set(const MonotoneFn& f_lower, const MonotoneFn& h_upper, std::uint64_t N,
                                       double tol) {
    const std::uint64_t start = reciprocal_sum_start(f_lower, h_upper);
    if (N < start) throw InvalidParameter("N=" + std::to_string(N) + " is below the first index " + std::to_string(start));
    // Terms decrease in n, so add smallest first.
    Interval sums{0.0, 0.0};
    for (std::uint64_t n = N + 1; n-- > start;) {
        const Interval e = element_size_bounds(f_lower, h_upper, n, tol);
        sums.low += 1.0 / e.high;
        sums.high += 1.0 / e.low;
    }
    return sums;
}

}  // namespace apfree
