#include "apfree/iterlog.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "apfree/errors.hpp"
#include "json.hpp"

namespace apfree {

namespace {

constexpr double kNoiseZone = 1.01;
constexpr unsigned kMaxDoublings = 1000;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// e↑↑m for m = 0..4; e↑↑4 overflows.
const std::array<double, kMaxIterLogDepth + 1>& towers() {
    static const std::array<double, kMaxIterLogDepth + 1> table = [] {
        std::array<double, kMaxIterLogDepth + 1> t{};
        t[0] = 1.0;
        for (unsigned m = 1; m < t.size(); ++m) t[m] = std::exp(t[m - 1]);
        return t;
    }();
    return table;
}

// Sum over the chain's log factors given ln x; NaN if ln^(d) x <= 0.
double ln_chain(double ln_x, unsigned d, double s) noexcept {
    double level = ln_x;  // ln^(1) x
    double acc = 0.0;
    for (unsigned i = 1; i <= d; ++i) {
        if (!(level > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        const double ln_level = std::log(level);
        acc += (i == d ? s : 1.0) * ln_level;
        level = ln_level;
    }
    return acc;
}

// Finite sum with a running compensation term.
class NeumaierSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

void require_window(const IterLogSpec& spec, std::uint64_t N0, std::uint64_t N) {
    spec.validate();
    if (N < N0) throw InvalidParameter("empty summation window");
    const double limit = kNoiseZone * iterlog_threshold(spec.d);
    if (static_cast<double>(N0) <= limit) {
        throw DomainError("N0=" + std::to_string(N0) + " is not above the depth-" + std::to_string(spec.d) +
                          " threshold " + fmt(limit));
    }
}

}  // namespace

void IterLogSpec::validate() const {
    if (d < 1) throw InvalidParameter("iteration depth d must be at least 1");
    if (!(s >= 1.0) || !std::isfinite(s)) throw InvalidParameter("exponent s must be a finite real >= 1");
}

double iterated_log(double x, unsigned times) {
    for (unsigned i = 0; i < times; ++i) x = std::log(x);
    return x;
}

double iterlog_threshold(unsigned d) {
    if (d < 1) throw InvalidParameter("iteration depth d must be at least 1");
    if (d > kMaxIterLogDepth) {
        throw DomainError("depth " + std::to_string(d) + " threshold e^^" + std::to_string(d - 1) +
                          " overflows double precision");
    }
    return towers()[d - 1];
}

double iterlog_product(double n, const IterLogSpec& spec) {
    spec.validate();
    const double limit = kNoiseZone * iterlog_threshold(spec.d);
    if (!(n > limit)) {
        throw DomainError("n=" + fmt(n) + " is not above the depth-" + std::to_string(spec.d) + " threshold " +
                          fmt(limit) + " (1% noise zone included)");
    }
    double product = n;
    double level = n;
    for (unsigned i = 1; i <= spec.d; ++i) {
        level = std::log(level);
        product *= i == spec.d ? std::pow(level, spec.s) : level;
    }
    return product;
}

double ln_iterlog_product(double ln_n, const IterLogSpec& spec) noexcept {
    return ln_n + ln_chain(ln_n, spec.d, spec.s);
}

double reciprocal_partial_sum(const IterLogSpec& spec, std::uint64_t N0, std::uint64_t N) {
    require_window(spec, N0, N);
    NeumaierSum sum;
    for (std::uint64_t n = N0; n <= N; ++n) sum.add(1.0 / iterlog_product(static_cast<double>(n), spec));
    return sum.value();
}

double reciprocal_partial_sum_naive(const IterLogSpec& spec, std::uint64_t N0, std::uint64_t N) {
    require_window(spec, N0, N);
    double sum = 0.0;
    for (std::uint64_t n = N0; n <= N; ++n) sum += 1.0 / iterlog_product(static_cast<double>(n), spec);
    return sum;
}

double comparison_integral(const IterLogSpec& spec, double a, double b) {
    spec.validate();
    const double limit = kNoiseZone * iterlog_threshold(spec.d);
    if (!(a > limit) || !(b >= a)) throw DomainError("integration window must lie above " + fmt(limit));
    if (spec.s == 1.0) return iterated_log(b, spec.d + 1) - iterated_log(a, spec.d + 1);
    const double e = 1.0 - spec.s;
    return (std::pow(iterated_log(b, spec.d), e) - std::pow(iterated_log(a, spec.d), e)) / e;
}

double comparison_tail(const IterLogSpec& spec, double a) {
    spec.validate();
    const double limit = kNoiseZone * iterlog_threshold(spec.d);
    if (!(a > limit)) throw DomainError("tail start must lie above " + fmt(limit));
    if (spec.s == 1.0) return std::numeric_limits<double>::infinity();
    return std::pow(iterated_log(a, spec.d), 1.0 - spec.s) / (spec.s - 1.0);
}

double probe_ratio(ProbeKind kind, unsigned d, double s, double c, double n) noexcept {
    const double ln_n = std::log(n);
    double ln_g = 0.0;
    double ln_chain_g = 0.0;
    if (kind == ProbeKind::large_set) {
        ln_g = ln_iterlog_product(ln_n, {d + 1, 1.0});
        ln_chain_g = ln_chain(ln_g, d, 1.0);
    } else {
        const double eps = (s - 1.0) / 2.0;
        ln_g = ln_iterlog_product(ln_n, {d, s - eps});
        ln_chain_g = ln_chain(ln_g, d, s);
    }
    const double ln_ratio = std::log(c) + ln_g - ln_chain_g - ln_n;
    return std::exp(ln_ratio);  // NaN propagates from undefined chains
}

namespace {

ProbeReport run_probe(ProbeKind kind, unsigned d, double s, double c, unsigned samples) {
    if (!(c > 0.0)) throw InvalidParameter("c must be positive");
    if (samples == 0) throw InvalidParameter("need at least one sample");
    ProbeReport report;
    report.kind = kind;
    report.d = d;
    report.s = s;
    report.c = c;
    report.epsilon = kind == ProbeKind::small_set ? (s - 1.0) / 2.0 : 0.0;

    // g must be defined: depth d+1 chain for the large-set probe, depth d otherwise.
    const unsigned g_depth = kind == ProbeKind::large_set ? d + 1 : d;
    const double n0 = kNoiseZone * iterlog_threshold(g_depth) * 1.0001;

    auto satisfied = [&](double ratio) {
        if (std::isnan(ratio)) return false;
        return kind == ProbeKind::large_set ? ratio > 1.0 : ratio < 1.0;
    };

    unsigned run = 0;
    for (unsigned j = 0; j < kMaxDoublings; ++j) {
        const double n = std::ldexp(n0, static_cast<int>(j));
        if (!std::isfinite(n)) break;
        const double ratio = probe_ratio(kind, d, s, c, n);
        if (satisfied(ratio)) {
            if (run == 0) report.samples.clear();
            report.samples.push_back({n, ratio});
            if (++run == samples) {
                report.threshold_found = true;
                report.threshold = report.samples.front().n;
                return report;
            }
        } else {
            run = 0;
            report.samples.clear();
        }
    }
    report.samples.clear();
    return report;
}

}  // namespace

ProbeReport probe_large_set(unsigned d, double c, unsigned samples) {
    IterLogSpec{d, 1.0}.validate();
    return run_probe(ProbeKind::large_set, d, 1.0, c, samples);
}

ProbeReport probe_small_set(unsigned d, double s, double c, unsigned samples) {
    IterLogSpec{d, s}.validate();
    if (!(s > 1.0)) throw InvalidParameter("the small-set probe needs s > 1");
    return run_probe(ProbeKind::small_set, d, s, c, samples);
}

std::string probe_report_json(const ProbeReport& report) {
    nlohmann::ordered_json doc;
    doc["theorem"] = report.kind == ProbeKind::large_set ? "11" : "13";
    doc["d"] = report.d;
    doc["s"] = report.s;
    doc["epsilon"] = report.epsilon;
    doc["c"] = report.c;
    doc["threshold_found"] = report.threshold_found;
    if (report.threshold_found) {
        doc["threshold"] = report.threshold;
    } else {
        doc["threshold"] = nullptr;
    }
    auto samples = nlohmann::ordered_json::array();
    for (const auto& sample : report.samples) samples.push_back({sample.n, sample.ratio});
    doc["samples"] = std::move(samples);
    return doc.dump(2);
}

}  // namespace apfree
