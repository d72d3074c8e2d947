#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "apfree/ap_verify.hpp"
#include "apfree/construction.hpp"
#include "apfree/errors.hpp"
#include "apfree/integer_set.hpp"
#include "apfree/set_io.hpp"
#include "doctest.h"
#include "generators.hpp"
#include "naive_oracle.hpp"

using namespace apfree;
using apfree::testing::naive_find_ap;

namespace {

std::vector<std::uint64_t> members_of(const IntegerSet& s) { return s.members(); }

IntegerSet set_of(std::initializer_list<std::uint64_t> m) {
    const std::uint64_t top = m.size() ? *std::max_element(m.begin(), m.end()) : 1;
    return IntegerSet::from_members(top, m);
}

const VerifyOptions kStrategies[] = {
    {1, VerifyStrategy::pairs},
    {1, VerifyStrategy::strides},
    {4, VerifyStrategy::pairs},
    {4, VerifyStrategy::strides},
    {1, VerifyStrategy::automatic},
};

}  // namespace

TEST_SUITE("integer_set") {
    TEST_CASE("members iterate ascending and cardinality matches") {
        const auto s = IntegerSet::from_members(200, {3, 64, 65, 128, 129, 200, 1});
        CHECK(s.size() == 7);
        CHECK(s.check_invariants());
        const auto m = members_of(s);
        CHECK(std::is_sorted(m.begin(), m.end()));
        CHECK(m == std::vector<std::uint64_t>{1, 3, 64, 65, 128, 129, 200});
        CHECK(s.min() == 1u);
        CHECK(s.max() == 200u);
        CHECK(s.contains(64));
        CHECK_FALSE(s.contains(0));
        CHECK_FALSE(s.contains(201));
    }

    TEST_CASE("out-of-range members are rejected") {
        CHECK_THROWS_AS(IntegerSet::from_members(5, {6}), InvalidParameter);
        CHECK_THROWS_AS(IntegerSet::from_members(5, {0}), InvalidParameter);
    }

    TEST_CASE("padding bits are cleared by from_words") {
        const auto s = IntegerSet::from_words(3, {~0ull});
        CHECK(s.size() == 3);
        CHECK(s.check_invariants());
    }

    TEST_CASE("builder ranges and empty sets") {
        IntegerSet::Builder b(100);
        b.insert_range(10, 20).insert(99);
        const auto s = std::move(b).build();
        CHECK(s.size() == 12);
        CHECK(IntegerSet::empty(10).empty());
        CHECK_FALSE(IntegerSet::empty(10).min().has_value());
        CHECK(IntegerSet::interval(10, 4).members() == std::vector<std::uint64_t>{1, 2, 3, 4});
    }

    TEST_CASE("randomized invariants") {
        std::mt19937_64 rng(apfree::testing::kDefaultSeed);
        for (int trial = 0; trial < 200; ++trial) {
            const std::uint64_t n = 1 + rng() % 300;
            const auto raw = apfree::testing::random_subset(rng, n, 0.3);
            const auto s = IntegerSet::from_members(n, raw);
            CHECK(s.check_invariants());
            CHECK(s.size() == raw.size());
            CHECK(s.members() == raw);
        }
    }
}

TEST_SUITE("verify") {
    TEST_CASE("documented verdicts") {
        for (const auto& opt : kStrategies) {
            const auto w = verify_ap_free(set_of({1, 2, 3}), 3, opt).witness;
            REQUIRE(w.has_value());
            CHECK(w->start == 1);
            CHECK(w->difference == 1);
            CHECK(w->length == 3);

            CHECK(verify_ap_free(set_of({1, 2, 7, 8, 10, 11, 16, 17}), 3, opt).ap_free());
            CHECK(verify_ap_free(set_of({1, 2, 4, 5, 10, 11, 13, 14}), 3, opt).ap_free());

            const auto w2 = verify_ap_free(set_of({1, 2, 4, 5, 10, 11, 13, 14, 15}), 3, opt).witness;
            REQUIRE(w2.has_value());
            // 5, 10, 15 precedes 13, 14, 15 in (start, difference) order.
            CHECK(w2->start == 5);
            CHECK(w2->difference == 5);
        }
    }

    TEST_CASE("k below 3 is rejected") {
        CHECK_THROWS_AS(verify_ap_free(set_of({1, 2}), 2), InvalidParameter);
    }

    TEST_CASE("empty and tiny sets are AP-free") {
        CHECK(verify_ap_free(IntegerSet::empty(10), 3).ap_free());
        CHECK(verify_ap_free(set_of({5}), 3).ap_free());
        CHECK(verify_ap_free(set_of({1, 2, 3, 4}), 5).ap_free());
    }

    TEST_CASE("exhaustive agreement with the naive oracle for k=3, n<=14") {
        for (std::uint64_t n = 1; n <= 14; ++n) {
            for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
                const auto raw = apfree::testing::mask_members(mask);
                const auto s = IntegerSet::from_members(n, raw);
                const auto expected = naive_find_ap(raw, 3);
                const auto got = verify_ap_free(s, 3, {1, VerifyStrategy::pairs}).witness;
                const auto got2 = verify_ap_free(s, 3, {1, VerifyStrategy::strides}).witness;
                REQUIRE(got.has_value() == expected.has_value());
                REQUIRE(got2.has_value() == expected.has_value());
                if (expected) {
                    REQUIRE(got->start == expected->start);
                    REQUIRE(got->difference == expected->difference);
                    REQUIRE(*got == *got2);
                }
            }
        }
    }

    TEST_CASE("randomized agreement with the naive oracle up to n=30") {
        std::mt19937_64 rng(apfree::testing::kDefaultSeed + 1);
        for (unsigned k : {3u, 4u, 5u}) {
            for (int trial = 0; trial < 3000; ++trial) {
                const std::uint64_t n = 1 + rng() % 30;
                const auto raw = apfree::testing::random_subset(rng, n, 0.2 + 0.6 * (trial % 5) / 4.0);
                const auto s = IntegerSet::from_members(n, raw);
                const auto expected = naive_find_ap(raw, k);
                for (const auto& opt : kStrategies) {
                    const auto got = verify_ap_free(s, k, opt).witness;
                    REQUIRE(got.has_value() == expected.has_value());
                    if (expected) {
                        REQUIRE(got->start == expected->start);
                        REQUIRE(got->difference == expected->difference);
                    }
                }
            }
        }
    }

    TEST_CASE("witness is independent of worker count on large sets") {
        std::mt19937_64 rng(apfree::testing::kDefaultSeed + 2);
        const unsigned max_threads = std::max(2u, std::thread::hardware_concurrency());
        for (int trial = 0; trial < 20; ++trial) {
            const std::uint64_t n = 2000 + rng() % 3000;
            const auto s = IntegerSet::from_members(n, apfree::testing::random_subset(rng, n, 0.02));
            for (unsigned k : {3u, 4u}) {
                const auto base = verify_ap_free(s, k, {1, VerifyStrategy::pairs}).witness;
                for (unsigned t : {1u, 3u, max_threads}) {
                    for (auto strat : {VerifyStrategy::pairs, VerifyStrategy::strides}) {
                        CHECK(verify_ap_free(s, k, {t, strat}).witness == base);
                    }
                }
            }
        }
    }
}

TEST_SUITE("construction") {
    TEST_CASE("primality") {
        CHECK_FALSE(is_prime(0));
        CHECK_FALSE(is_prime(1));
        CHECK(is_prime(2));
        CHECK(is_prime(3));
        CHECK_FALSE(is_prime(4));
        CHECK(is_prime(101));
        CHECK_FALSE(is_prime(1001));
        CHECK(is_prime(1'000'003));
    }

    TEST_CASE("block expansion examples") {
        CHECK(block_expand(set_of({1, 3, 4, 6}), 3).members() ==
              std::vector<std::uint64_t>{1, 2, 7, 8, 10, 11, 16, 17});
        CHECK(block_expand(IntegerSet::empty(4), 5).empty());
        CHECK(block_expand(set_of({1, 2}), 3).members() == std::vector<std::uint64_t>{1, 2, 4, 5});
        CHECK_THROWS_AS(block_expand(set_of({1, 2}), 4), InvalidParameter);
        CHECK_THROWS_AS(block_expand(set_of({1, 2}), 9), InvalidParameter);
    }

    TEST_CASE("strict mode rejects an input that is not AP-free") {
        ConstructionOptions strict;
        strict.strict = true;
        CHECK_THROWS_AS(block_expand(set_of({1, 2, 3}), 3, strict), InvalidParameter);
        CHECK_NOTHROW(block_expand(set_of({1, 2, 3}), 3));
    }

    TEST_CASE("universe limit") {
        ConstructionOptions small;
        small.universe_limit = 100;
        CHECK_THROWS_AS(iterate_construction(3, 5, small), ResourceLimit);
        try {
            iterate_construction(3, 5, small);
        } catch (const ResourceLimit& e) {
            CHECK(std::string(e.what()).find("100") != std::string::npos);
        }
        CHECK_NOTHROW(iterate_construction(3, 4, small));
    }

    TEST_CASE("iterated construction examples") {
        const auto t1 = iterate_construction(3, 1);
        CHECK(t1.final_set.members() == std::vector<std::uint64_t>{1, 2});
        REQUIRE(t1.levels.size() == 1);
        CHECK(t1.levels[0].cardinality == 2);

        const auto t2 = iterate_construction(3, 2);
        CHECK(t2.final_set.members() == std::vector<std::uint64_t>{1, 2, 4, 5});
        CHECK(t2.final_set.universe_max() == 9);
        REQUIRE(t2.levels.size() == 2);
        CHECK(t2.levels[0].cardinality == 2);
        CHECK(t2.levels[1].cardinality == 4);

        const auto t3 = iterate_construction(5, 2);
        CHECK(t3.final_set.size() == 16);
        CHECK(t3.final_set.universe_max() == 25);
        CHECK(t3.verified);
        CHECK(apfree::testing::naive_ap_free(t3.final_set.members(), 5));
    }

    TEST_CASE("trace levels follow the size law") {
        for (unsigned k : {3u, 5u, 7u}) {
            const auto t = iterate_construction(k, 4);
            std::uint64_t universe = 1, size = 1;
            for (const auto& level : t.levels) {
                universe *= k;
                size *= k - 1;
                CHECK(level.universe_max == universe);
                CHECK(level.cardinality == size);
            }
            CHECK(t.verified);
        }
    }

    TEST_CASE("block expansion preserves AP-freeness on random AP-free inputs") {
        std::mt19937_64 rng(apfree::testing::kDefaultSeed + 3);
        ConstructionOptions strict;
        strict.strict = true;
        for (unsigned k : {3u, 5u, 7u, 11u}) {
            for (int trial = 0; trial < 60; ++trial) {
                const std::uint64_t n = 1 + rng() % 40;
                const auto a = apfree::testing::random_ap_free_set(rng, k, n);
                const auto b = block_expand(a, k, strict);
                CHECK(b.size() == a.size() * (k - 1));
                if (!a.empty()) CHECK(*b.max() <= k * *a.max() - 1);
                for (std::uint64_t m : b) CHECK(m % k != 0);
                CHECK(verify_ap_free(b, k).ap_free());
                CHECK(apfree::testing::naive_ap_free(b.members(), k));
            }
        }
    }

    TEST_CASE("truncation") {
        const auto a = set_of({1, 2, 7, 8, 10, 11, 16, 17});
        CHECK(truncate(set_of({1, 2, 4, 5}), 3).members() == std::vector<std::uint64_t>{1, 2});
        CHECK(truncate(a, 11).members() == std::vector<std::uint64_t>{1, 2, 7, 8, 10, 11});
        CHECK(truncate(IntegerSet::empty(20), 10).empty());

        std::mt19937_64 rng(apfree::testing::kDefaultSeed + 4);
        for (int trial = 0; trial < 100; ++trial) {
            const std::uint64_t n = 1 + rng() % 200;
            const auto s = IntegerSet::from_members(n, apfree::testing::random_subset(rng, n, 0.4));
            const std::uint64_t x = 1 + rng() % (n + 10), y = x + rng() % 50;
            const auto tx = truncate(s, x);
            CHECK(truncate(tx, x) == tx);
            const auto ty = truncate(s, y);
            for (std::uint64_t m : tx) CHECK(ty.contains(m));
            CHECK(tx.check_invariants());
        }
    }
}

TEST_SUITE("set_io") {
    TEST_CASE("round trip with header and comments") {
        std::istringstream in("# level 2\nuniverse=9\n1\n2\n\n# mid\n4\n5\n");
        const auto s = parse_set(in);
        CHECK(s.universe_max() == 9);
        CHECK(s.members() == std::vector<std::uint64_t>{1, 2, 4, 5});

        std::ostringstream out;
        write_set(out, s);
        std::istringstream again(out.str());
        CHECK(parse_set(again) == s);
    }

    TEST_CASE("universe defaults to the last element") {
        std::istringstream in("3\n7\n");
        CHECK(parse_set(in).universe_max() == 7);
    }

    TEST_CASE("malformed input") {
        for (const char* text : {"5\n3\n", "1\n1\n", "0\n", "abc\n", "1\nuniverse=5\n", "universe=3\n4\n", "-2\n", ""}) {
            std::istringstream in(text);
            CHECK_THROWS_AS(parse_set(in), ParseError);
        }
        std::istringstream descending("1\n2\n2\n");
        try {
            parse_set(descending);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
        }
    }

    TEST_CASE("universe limit applies to parsed files") {
        std::istringstream in("universe=1000\n1\n");
        CHECK_THROWS_AS(parse_set(in, 100), ResourceLimit);
    }

    TEST_CASE("missing file is an I/O error") {
        CHECK_THROWS_AS(read_set_file("/nonexistent/dir/set.txt"), IoError);
    }

    TEST_CASE("file round trip") {
        const auto path = std::filesystem::temp_directory_path() / "apfree_core_test_set.txt";
        const auto s = iterate_construction(3, 3).final_set;
        write_set_file(path, s);
        CHECK(read_set_file(path) == s);
        std::filesystem::remove(path);
    }
}
