#include "apfree/bounds.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "apfree/construction.hpp"
#include "apfree/errors.hpp"

namespace apfree {

namespace {

struct FamilyInfo {
    BoundFamily family;
    std::string_view name;
    bool lower;
};

constexpr FamilyInfo kFamilies[] = {
    {BoundFamily::theorem_main, "theorem-main", true}, {BoundFamily::obryant, "obryant", true},
    {BoundFamily::gowers, "gowers", false},            {BoundFamily::roth, "roth", false},
    {BoundFamily::bloom_r3, "bloom-r3", false},        {BoundFamily::r3_lower, "r3-lower", true},
    {BoundFamily::green_tao_r4, "green-tao-r4", false},
};

const FamilyInfo& info(BoundFamily family) noexcept {
    for (const auto& f : kFamilies) {
        if (f.family == family) return f;
    }
    return kFamilies[0];
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void require_positive_constant(double c, const char* name) {
    if (!(c > 0.0) || !std::isfinite(c)) throw InvalidParameter(std::string(name) + " must be a positive real");
}

// log2 n, requiring log2 n > 0.
double log_n(LogValue n, const char* family) {
    const double L = n.log2();
    if (!(L > 0.0)) throw DomainError(std::string(family) + ": log n = " + fmt(L) + " is not positive");
    return L;
}

// log2 log2 n, requiring it to be positive.
double log_log_n(LogValue n, const char* family) {
    const double L = log_n(n, family);
    const double LL = std::log2(L);
    if (!(LL > 0.0)) throw DomainError(std::string(family) + ": log log n = " + fmt(LL) + " is not positive");
    return LL;
}

double gowers_exponent_log2_or_default(unsigned k, std::optional<double> exponent_log2) {
    if (exponent_log2) return *exponent_log2;
    return std::exp2(static_cast<double>(k) + 9.0);
}

}  // namespace

std::string_view family_name(BoundFamily family) noexcept { return info(family).name; }

BoundFamily parse_family(std::string_view name) {
    for (const auto& f : kFamilies) {
        if (f.name == name) return f.family;
    }
    throw InvalidParameter("unknown bound family '" + std::string(name) + "'");
}

bool is_lower_bound(BoundFamily family) noexcept { return info(family).lower; }

bool BoundSpec::accepts_k(BoundFamily family, unsigned k) noexcept {
    switch (family) {
        case BoundFamily::theorem_main: return k >= 3 && is_prime(k);
        case BoundFamily::obryant:
        case BoundFamily::gowers: return k >= 3;
        case BoundFamily::roth:
        case BoundFamily::bloom_r3:
        case BoundFamily::r3_lower: return k == 3;
        case BoundFamily::green_tao_r4: return k == 4;
    }
    return false;
}

void BoundSpec::validate() const {
    if (!accepts_k(family, k)) {
        throw InvalidParameter(std::string(family_name(family)) + " does not apply to k=" + std::to_string(k));
    }
    require_positive_constant(c, "c");
    require_positive_constant(c1, "c1");
    require_positive_constant(c2, "c2");
}

double ck_constant(unsigned k) {
    if (k < 2) throw InvalidParameter("c_k needs k >= 2");
    const double kd = static_cast<double>(k);
    return kd * std::log1p(1.0 / (kd - 1.0));
}

double theorem_exponent(unsigned k) {
    const double kd = static_cast<double>(k);
    return 1.0 - ck_constant(k) / (kd * std::log(kd));
}

LogValue theorem_lower_bound(LogValue n, unsigned k) {
    if (k < 3 || !is_prime(k)) throw InvalidParameter("theorem-main needs a prime k >= 3, got " + std::to_string(k));
    if (n.log2() < 0.0) throw DomainError("theorem-main: n must be at least 1");
    return n.pow(theorem_exponent(k));
}

unsigned obryant_a(unsigned k) {
    if (k < 2) throw InvalidParameter("a = ceil(log k) needs k >= 2");
    unsigned a = 0;
    while ((std::uint64_t{1} << a) < k) ++a;
    return a;
}

LogValue obryant_lower_bound(LogValue n, unsigned k, double c) {
    if (k < 3) throw InvalidParameter("obryant needs k >= 3");
    require_positive_constant(c, "c");
    const double L = n.log2();
    const double LL = log_log_n(n, "obryant");
    const double a = static_cast<double>(obryant_a(k));
    const double exponent = a * std::exp2((a - 1.0) / 2.0) * std::pow(L, 1.0 / a) - LL / (2.0 * a);
    return LogValue::from_log2(std::log2(c) + L - exponent);
}

double gowers_deficit_log2(LogValue n, unsigned k, std::optional<double> exponent_log2) {
    const double LL = log_log_n(n, "gowers");
    const double t = std::log2(LL);
    return gowers_exponent_log2_or_default(k, exponent_log2) + std::log2(std::fabs(t));
}

LogValue gowers_upper_bound(LogValue n, unsigned k, std::optional<double> exponent_log2) {
    if (k < 3) throw InvalidParameter("gowers needs k >= 3");
    const double L = n.log2();
    const double LL = log_log_n(n, "gowers");
    const double t = std::log2(LL);
    if (t == 0.0) return n;  // (log log n)^E = 1 for any E
    const double deficit_log2 = gowers_deficit_log2(n, k, exponent_log2);
    const double deficit = deficit_log2 >= 1023.0 ? HUGE_VAL : std::exp2(deficit_log2);
    return LogValue::from_log2(t > 0.0 ? L - deficit : L + deficit);
}

LogValue roth_upper_bound(LogValue n, double c) {
    require_positive_constant(c, "c");
    const double LL = log_log_n(n, "roth");
    return LogValue::from_log2(std::log2(c) + n.log2() - std::log2(LL));
}

LogValue bloom_r3_upper_bound(LogValue n, double c) {
    require_positive_constant(c, "c");
    const double L = n.log2();
    const double LL = log_log_n(n, "bloom-r3");
    return LogValue::from_log2(std::log2(c) + L + 4.0 * std::log2(LL) - std::log2(L));
}

LogValue r3_lower_bound(LogValue n) {
    const double L = n.log2();
    if (L < 0.0) throw DomainError("r3-lower: n must be at least 1");
    return LogValue::from_log2(L - std::sqrt(8.0 * L));
}

LogValue green_tao_r4_upper_bound(LogValue n, double c1, double c2) {
    require_positive_constant(c1, "c1");
    require_positive_constant(c2, "c2");
    const double L = log_n(n, "green-tao-r4");
    return LogValue::from_log2(std::log2(c1) + L - c2 * std::log2(L));
}

LogValue evaluate(const BoundSpec& spec, LogValue n) {
    spec.validate();
    switch (spec.family) {
        case BoundFamily::theorem_main: return theorem_lower_bound(n, spec.k);
        case BoundFamily::obryant: return obryant_lower_bound(n, spec.k, spec.c);
        case BoundFamily::gowers: return gowers_upper_bound(n, spec.k, spec.gowers_exponent_log2);
        case BoundFamily::roth: return roth_upper_bound(n, spec.c);
        case BoundFamily::bloom_r3: return bloom_r3_upper_bound(n, spec.c);
        case BoundFamily::r3_lower: return r3_lower_bound(n);
        case BoundFamily::green_tao_r4: return green_tao_r4_upper_bound(n, spec.c1, spec.c2);
    }
    throw InvalidParameter("unknown bound family");
}

double crossover_gap(unsigned k, double c_obryant, double log2_n) {
    const double L = log2_n;
    const double a = static_cast<double>(obryant_a(k));
    const double obryant_exponent = a * std::exp2((a - 1.0) / 2.0) * std::pow(L, 1.0 / a) - std::log2(L) / (2.0 * a);
    const double obryant_log2 = std::log2(c_obryant) + L - obryant_exponent;
    return obryant_log2 - theorem_exponent(k) * L;
}

CrossoverResult crossover_n(unsigned k, double c_obryant) {
    if (k < 3 || !is_prime(k)) throw InvalidParameter("crossover needs a prime k >= 3, got " + std::to_string(k));
    require_positive_constant(c_obryant, "c");

    constexpr double kLow = 1.0;
    constexpr double kHigh = 1e6;
    constexpr int kGrid = 4000;
    constexpr double kRelTol = 1e-6;

    auto grid = [](int i) { return kLow * std::pow(kHigh / kLow, static_cast<double>(i) / kGrid); };

    CrossoverResult result;
    if (crossover_gap(k, c_obryant, kLow) >= 0.0) {
        result.found = true;
        result.log2_n_star = kLow;
        return result;
    }
    for (int i = 1; i <= kGrid; ++i) {
        const double hi_at = i == kGrid ? kHigh : grid(i);
        if (crossover_gap(k, c_obryant, hi_at) < 0.0) continue;
        double lo = grid(i - 1);
        double hi = hi_at;
        while (hi - lo > kRelTol * hi) {
            const double mid = 0.5 * (lo + hi);
            if (crossover_gap(k, c_obryant, mid) >= 0.0) {
                hi = mid;
            } else {
                lo = mid;
            }
            ++result.bisection_steps;
        }
        result.found = true;
        result.log2_n_star = 0.5 * (lo + hi);
        return result;
    }
    return result;
}

BoundRow evaluate_row(const BoundSpec& spec, LogValue n) {
    BoundRow row{n, spec, std::nullopt, "ok"};
    try {
        row.value = evaluate(spec, n);
    } catch (const DomainError& e) {
        row.status = e.what();
    }
    return row;
}

std::string format_n(LogValue n) {
    const double L = n.log2();
    if (L >= 0.0 && L < 53.0) {
        const double v = std::exp2(L);
        const double rounded = std::round(v);
        if (std::fabs(v - rounded) <= 1e-9 * rounded) return fmt(rounded);
        return fmt(v);
    }
    return "2^" + fmt(L);
}

void write_bound_csv_header(std::ostream& out) { out << "n,family,k,log2_value,value_or_inf_flag\n"; }

void write_bound_csv_row(std::ostream& out, const BoundRow& row) {
    out << format_n(row.n) << ',' << family_name(row.spec.family) << ',' << row.spec.k << ',';
    if (row.value) {
        out << fmt(row.value->log2()) << ',' << row.value->to_string() << '\n';
    } else {
        out << ",domain-error\n";
    }
}

}  // namespace apfree
