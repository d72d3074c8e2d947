#include <cmath>
#include <numbers>
#include <random>

#include "apfree/bounds.hpp"
#include "apfree/errors.hpp"
#include "apfree/inversion.hpp"
#include "apfree/iterlog.hpp"
#include "doctest.h"
#include "generators.hpp"
#include "json.hpp"

using namespace apfree;
using doctest::Approx;

namespace {

constexpr double kE = std::numbers::e;

MonotoneFn linear(double slope, const char* name) {
    return {[slope](double x) { return slope * x; }, 0.0, name};
}

MonotoneFn main_bound_k3(double scale = 1.0) {
    return {[scale](double x) { return scale * theorem_lower_bound(LogValue::from_value(x), 3).to_double(); }, 1.0,
            "main"};
}

}  // namespace

TEST_SUITE("inversion") {
    TEST_CASE("documented inverses") {
        const MonotoneFn square{[](double x) { return x * x; }, 0.0, "x^2"};
        CHECK(invert_monotone(square, 16.0, 1e-9) == Approx(4.0).epsilon(1e-9));
        CHECK(invert_monotone(main_bound_k3(), 4.0, 1e-9) == Approx(9.0).epsilon(1e-9));
        const MonotoneFn xlnx{[](double x) { return x * std::log(x); }, 1.0, "x ln x"};
        CHECK(invert_monotone(xlnx, kE, 1e-9) == Approx(kE).epsilon(1e-9));
    }

    TEST_CASE("below range and bad tolerance") {
        const MonotoneFn shifted{[](double x) { return x + 10.0; }, 0.0, "x+10"};
        CHECK_THROWS_AS(invert_monotone(shifted, 5.0), DomainError);
        CHECK(invert_monotone(shifted, 10.0) == 0.0);
        CHECK_THROWS_AS(invert_monotone(shifted, 20.0, 0.0), InvalidParameter);
        const MonotoneFn bounded{[](double x) { return 1.0 - 1.0 / (1.0 + x); }, 0.0, "bounded"};
        CHECK_THROWS_AS(invert_monotone(bounded, 2.0), DomainError);
    }

    TEST_CASE("round trip within slope-derived slack") {
        std::mt19937_64 rng(apfree::testing::kDefaultSeed + 10);
        for (int trial = 0; trial < 200; ++trial) {
            const auto t = apfree::testing::random_monotone_triple(rng, 5);
            for (const MonotoneFn* f : {&t.f, &t.g, &t.h}) {
                for (double y : t.ys) {
                    const double tol = 1e-9;
                    const double x = invert_monotone(*f, y, tol);
                    const double slope = ((*f)(x + 1e-3) - (*f)(std::max(f->domain_min, x - 1e-3))) / 2e-3;
                    const double slack = tol * 2.0 * slope + 1e-9 * std::fabs(y);
                    CHECK(std::fabs((*f)(x)-y) <= slack);
                }
            }
        }
    }

    TEST_CASE("generated evaluators are strictly increasing") {
        std::mt19937_64 rng(apfree::testing::kDefaultSeed + 11);
        std::uniform_real_distribution<double> point(1.0, 1e4);
        for (int trial = 0; trial < 100; ++trial) {
            const auto t = apfree::testing::random_monotone_triple(rng);
            for (int i = 0; i < 20; ++i) {
                double x1 = point(rng), x2 = point(rng);
                if (x1 == x2) continue;
                if (x1 > x2) std::swap(x1, x2);
                CHECK(t.f(x2) > t.f(x1));
                CHECK(t.h(x2) > t.h(x1));
            }
        }
    }

    TEST_CASE("inverse ordering examples") {
        const double ys[] = {6.0, 12.0};
        const auto r = inverse_ordering_check(linear(1, "x"), linear(2, "2x"), linear(3, "3x"), ys);
        REQUIRE(r.precondition_ok);
        CHECK(r.all_hold);
        REQUIRE(r.samples.size() == 2);
        CHECK(r.samples[0].f_inverse == Approx(6.0));
        CHECK(r.samples[0].g_inverse == Approx(3.0));
        CHECK(r.samples[0].h_inverse == Approx(2.0));
        CHECK(r.samples[1].f_inverse == Approx(12.0));
        CHECK(r.samples[1].g_inverse == Approx(6.0));
        CHECK(r.samples[1].h_inverse == Approx(4.0));

        const double y8[] = {8.0};
        const auto scaled = inverse_ordering_check(main_bound_k3(1), main_bound_k3(2), main_bound_k3(4), y8);
        CHECK(scaled.precondition_ok);
        CHECK(scaled.all_hold);

        const double y5[] = {5.0};
        const MonotoneFn ln{[](double x) { return std::log(x); }, 1.0, "ln"};
        const MonotoneFn id{[](double x) { return x; }, 1.0, "x"};
        const MonotoneFn ex{[](double x) { return std::exp(x); }, 1.0, "exp"};
        const auto mixed = inverse_ordering_check(ln, id, ex, y5);
        REQUIRE(mixed.precondition_ok);
        CHECK(mixed.all_hold);
        CHECK(mixed.samples[0].f_inverse == Approx(std::exp(5.0)));
        CHECK(mixed.samples[0].g_inverse == Approx(5.0));
        CHECK(mixed.samples[0].h_inverse == Approx(std::log(5.0)));
    }

    TEST_CASE("violated pointwise order is reported") {
        const double ys[] = {6.0};
        const auto r = inverse_ordering_check(linear(2, "2x"), linear(1, "x"), linear(3, "3x"), ys);
        CHECK_FALSE(r.precondition_ok);
        CHECK_FALSE(r.all_hold);
        CHECK(r.precondition_message.find("f < g < h") != std::string::npos);
    }

    TEST_CASE("randomized ordered triples") {
        std::mt19937_64 rng(apfree::testing::kDefaultSeed + 12);
        for (int trial = 0; trial < 300; ++trial) {
            const auto t = apfree::testing::random_monotone_triple(rng);
            const auto r = inverse_ordering_check(t.f, t.g, t.h, t.ys);
            CAPTURE(t.f.name);
            REQUIRE(r.precondition_ok);
            CHECK(r.all_hold);
        }
    }

    TEST_CASE("element size bounds") {
        const MonotoneFn half{[](double x) { return x / 2.0; }, 0.0, "x/2"};
        const MonotoneFn id{[](double x) { return x; }, 0.0, "x"};
        const Interval e = element_size_bounds(half, id, 10);
        CHECK(e.low == Approx(10.0));
        CHECK(e.high == Approx(20.0));

        const MonotoneFn id1{[](double x) { return x; }, 1.0, "x"};
        const Interval m = element_size_bounds(main_bound_k3(), id1, 4);
        CHECK(m.low == Approx(4.0));
        CHECK(m.high == Approx(9.0));

        const Interval one = element_size_bounds(id1, id1, 1);
        CHECK(one.low == Approx(1.0));
        CHECK(one.high == Approx(1.0));

        CHECK_THROWS_AS(element_size_bounds(id, half, 10), InvalidParameter);
        CHECK_THROWS_AS(element_size_bounds(half, id, 0), InvalidParameter);
    }

    TEST_CASE("reciprocal sum bounds") {
        const MonotoneFn half{[](double x) { return x / 2.0; }, 0.0, "x/2"};
        const MonotoneFn id{[](double x) { return x; }, 0.0, "x"};
        const Interval s = reciprocal_sum_bounds_for_set(half, id, 3);
        CHECK(s.low == Approx(11.0 / 12.0));
        CHECK(s.high == Approx(11.0 / 6.0));

        const MonotoneFn id1{[](double x) { return x; }, 1.0, "x"};
        const Interval m4 = reciprocal_sum_bounds_for_set(main_bound_k3(), id1, 4);
        const Interval m3 = reciprocal_sum_bounds_for_set(main_bound_k3(), id1, 3);
        CHECK(m4.low - m3.low == Approx(1.0 / 9.0));

        const std::uint64_t start = reciprocal_sum_start(half, id);
        const Interval single = reciprocal_sum_bounds_for_set(half, id, start);
        CHECK(single.low < single.high);
        CHECK(single.low == Approx(1.0 / (2.0 * start)));
        CHECK_THROWS_AS(reciprocal_sum_bounds_for_set(main_bound_k3(), id1, 0), InvalidParameter);
    }
}

TEST_SUITE("iterlog") {
    TEST_CASE("thresholds are e tower d-1") {
        CHECK(iterlog_threshold(1) == 1.0);
        CHECK(iterlog_threshold(2) == Approx(kE));
        CHECK(iterlog_threshold(3) == Approx(std::exp(kE)));
        CHECK(iterlog_threshold(4) == Approx(std::exp(std::exp(kE))));
        CHECK_THROWS_AS(iterlog_threshold(5), DomainError);
        CHECK_THROWS_AS(iterlog_threshold(0), InvalidParameter);
        for (unsigned d = 1; d <= kMaxIterLogDepth; ++d) {
            CHECK(iterated_log(iterlog_threshold(d) * 1.5, d) > 0.0);
        }
    }

    TEST_CASE("product examples") {
        CHECK(iterlog_product(kE, {1, 1.0}) == Approx(kE));
        CHECK(iterlog_product(std::exp(kE), {2, 1.0}) == Approx(std::exp(kE) * kE));
        CHECK(iterlog_product(1e6, {1, 2.0}) == Approx(1.9087e8).epsilon(1e-4));
        CHECK(iterlog_product(1e6, {1, 2.0}) == Approx(1e6 * std::pow(std::log(1e6), 2)));
    }

    TEST_CASE("noise zone and parameter validation") {
        CHECK_THROWS_AS(iterlog_product(1.0, {1, 1.0}), DomainError);
        CHECK_THROWS_AS(iterlog_product(1.005, {1, 1.0}), DomainError);
        CHECK_NOTHROW(iterlog_product(1.02, {1, 1.0}));
        CHECK_THROWS_AS(iterlog_product(kE * 1.005, {2, 1.0}), DomainError);
        CHECK_THROWS_AS(iterlog_product(10.0, {0, 1.0}), InvalidParameter);
        CHECK_THROWS_AS(iterlog_product(10.0, {1, 0.5}), InvalidParameter);
        try {
            iterlog_product(2.0, {2, 1.0});
            FAIL("expected a domain error");
        } catch (const DomainError& e) {
            CHECK(std::string(e.what()).find("threshold") != std::string::npos);
        }
    }

    TEST_CASE("log-space product agrees with the direct one") {
        for (unsigned d = 1; d <= 3; ++d) {
            for (double s : {1.0, 1.5, 3.0}) {
                for (double n : {1e3, 1e6, 1e12}) {
                    CHECK(ln_iterlog_product(std::log(n), {d, s}) == Approx(std::log(iterlog_product(n, {d, s}))));
                }
            }
        }
        CHECK(std::isnan(ln_iterlog_product(0.5, {2, 1.0})));
    }

    TEST_CASE("reciprocal sums") {
        const double sum = reciprocal_partial_sum({1, 1.0}, 1000, 1'000'000);
        const double expected = std::log(std::log(1e6)) - std::log(std::log(1e3));
        CHECK(expected == Approx(0.6933).epsilon(1e-4));
        CHECK(std::fabs(sum - expected) <= 0.01);
        CHECK(comparison_integral({1, 1.0}, 1e3, 1e6) == Approx(expected));
        CHECK(reciprocal_partial_sum({1, 1.0}, 5, 5) == Approx(1.0 / (5.0 * std::log(5.0))));
        CHECK(reciprocal_partial_sum({1, 1.0}, 5, 5) == Approx(0.124267).epsilon(1e-5));
        CHECK_THROWS_AS(reciprocal_partial_sum({1, 1.0}, 1, 10), DomainError);
        CHECK_THROWS_AS(reciprocal_partial_sum({1, 1.0}, 10, 5), InvalidParameter);
    }

    TEST_CASE("partial sums are monotone and compensation matches plain summation") {
        for (unsigned d = 1; d <= 3; ++d) {
            for (double s : {1.0, 1.25, 2.0}) {
                const std::uint64_t start = static_cast<std::uint64_t>(iterlog_threshold(d) * 1.01) + 2;
                double previous = 0.0;
                for (std::uint64_t N = start; N < start + 2000; N += 97) {
                    const double v = reciprocal_partial_sum({d, s}, start, N);
                    CHECK(v > previous);
                    previous = v;
                }
                for (std::uint64_t window : {start, std::uint64_t{100'000}, std::uint64_t{10'000'000}}) {
                    const double compensated = reciprocal_partial_sum({d, s}, window, window + 9999);
                    const double naive = reciprocal_partial_sum_naive({d, s}, window, window + 9999);
                    CHECK(std::fabs(compensated - naive) <= 1e-8);
                }
            }
        }
    }

    TEST_CASE("comparison integral and tail") {
        CHECK(comparison_integral({1, 2.0}, 10.0, 100.0) == Approx(1.0 / std::log(10.0) - 1.0 / std::log(100.0)));
        CHECK(comparison_tail({1, 2.0}, 10.0) == Approx(1.0 / std::log(10.0)));
        CHECK(std::isinf(comparison_tail({1, 1.0}, 10.0)));
        CHECK(comparison_integral({2, 1.0}, 100.0, 1e9) ==
              Approx(iterated_log(1e9, 3) - iterated_log(100.0, 3)));
        // The sum lies between consecutive integral windows for a decreasing integrand.
        const IterLogSpec spec{2, 1.5};
        const double sum = reciprocal_partial_sum(spec, 100, 100000);
        CHECK(sum >= comparison_integral(spec, 100.0, 100001.0));
        CHECK(sum <= comparison_integral(spec, 99.0, 100000.0));
    }

    TEST_CASE("large-set probe") {
        for (unsigned d : {1u, 2u}) {
            const ProbeReport r = probe_large_set(d);
            REQUIRE(r.threshold_found);
            CHECK(r.samples.size() == 20);
            CHECK(r.threshold == r.samples.front().n);
            for (std::size_t i = 0; i < r.samples.size(); ++i) {
                CHECK(r.samples[i].ratio > 1.0);
                if (i) CHECK(r.samples[i].n == 2.0 * r.samples[i - 1].n);
            }
        }
    }

    TEST_CASE("small-set probe") {
        const ProbeReport r = probe_small_set(1, 1.5);
        REQUIRE(r.threshold_found);
        CHECK(r.epsilon == 0.25);
        CHECK(r.samples.size() == 20);
        for (const auto& s : r.samples) CHECK(s.ratio < 1.0);
        CHECK_THROWS_AS(probe_small_set(1, 1.0), InvalidParameter);
        CHECK_THROWS_AS(probe_large_set(1, 0.0), InvalidParameter);
    }

    TEST_CASE("probe JSON layout") {
        const auto doc = nlohmann::json::parse(probe_report_json(probe_large_set(1, 1.0, 5)));
        CHECK(doc["theorem"] == "11");
        CHECK(doc["d"] == 1);
        CHECK(doc["threshold_found"] == true);
        REQUIRE(doc["samples"].is_array());
        CHECK(doc["samples"].size() == 5);
        for (const auto& s : doc["samples"]) {
            REQUIRE(s.is_array());
            CHECK(s.size() == 2);
            CHECK(s[1].get<double>() > 1.0);
        }
        const auto small = nlohmann::json::parse(probe_report_json(probe_small_set(1, 1.5)));
        CHECK(small["theorem"] == "13");
        CHECK(small["s"] == 1.5);
    }
}
