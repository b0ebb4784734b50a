#include <random>
#include <set>

#include "doctest.h"
#include "shapeloci/field_oracle.hpp"
#include "shapeloci/positroid.hpp"
#include "test_helpers.hpp"

using namespace shapeloci;
using namespace shapeloci::testing;

TEST_CASE("random evaluation") {
    const SetSystem s = sys(4, {{1, 3, 4}, {1, 2}, {2, 3}});

    SUBCASE("deterministic in the seed, nonzero exactly on the support") {
        const FieldMatrix a = random_evaluation(s, 42);
        const FieldMatrix b = random_evaluation(s, 42);
        for (int r = 0; r < 3; ++r)
            for (int c = 1; c <= 4; ++c) {
                CHECK(a.entry(r, c) == b.entry(r, c));
                CHECK((a.entry(r, c) != 0) == s.set(r).contains(c));
            }
    }
    SUBCASE("different seeds give different matrices") {
        std::set<std::vector<std::uint64_t>> seen;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const FieldMatrix m = random_evaluation(s, seed);
            std::vector<std::uint64_t> flat;
            for (int r = 0; r < 3; ++r)
                for (int c = 1; c <= 4; ++c) flat.push_back(m.entry(r, c));
            seen.insert(flat);
        }
        CHECK(seen.size() == 100);
    }
    SUBCASE("composite or small moduli are rejected") {
        CHECK_THROWS_AS(random_evaluation(s, 1, 1u << 21), domain_error);    // composite
        CHECK_THROWS_AS(random_evaluation(s, 1, 65537), domain_error);       // too small
        CHECK_NOTHROW(random_evaluation(s, 1, 2147483647ull));
        CHECK_NOTHROW(random_evaluation(s, 1, 1048583ull)); // prime just above 2^20
    }
}

TEST_CASE("plucker determinants") {
    SUBCASE("identity pattern: the product of the diagonal") {
        const SetSystem s = sys(3, {{1}, {2}, {3}});
        const FieldMatrix m = random_evaluation(s, 7);
        const std::uint64_t expected = detail::mulmod(
            detail::mulmod(m.entry(0, 1), m.entry(1, 2), m.modulus()), m.entry(2, 3), m.modulus());
        CHECK(plucker(m, gs({1, 2, 3})) == expected);
    }
    SUBCASE("k = 1: the entry itself") {
        const SetSystem s = sys(3, {{1, 2, 3}});
        const FieldMatrix m = random_evaluation(s, 9);
        for (int c = 1; c <= 3; ++c) CHECK(plucker(m, GroundSubset::single(c)) == m.entry(0, c));
    }
    SUBCASE("no saturating matching forces a zero determinant") {
        std::mt19937_64 rng(179);
        for (int trial = 0; trial < 20; ++trial) {
            const SetSystem s = random_full_rank_system(rng, 6, 3);
            const FieldMatrix m = random_evaluation(s, rng());
            for_each_k_subset(6, 3, [&](GroundSubset i) {
                if (max_matching(s, all_rows(s), i) < 3) CHECK(plucker(m, i) == 0);
            });
        }
    }
    CHECK_THROWS_AS(plucker(random_evaluation(sys(3, {{1}, {2}, {3}}), 1), gs({1, 2})),
                    domain_error);
}

TEST_CASE("matroid from a matrix evaluation") {
    SUBCASE("generic evaluations of the worked systems") {
        CHECK(matroid_from_matrix(random_evaluation(sys(4, {{1, 3, 4}, {1, 2}, {2, 3}}), 1)) ==
              Matroid::uniform(3, 4));
        CHECK(matroid_from_matrix(random_evaluation(sys(4, {{1, 3, 4}, {2, 4}}), 1)) ==
              transversal_matroid(sys(4, {{1, 3, 4}, {2, 4}})));
    }
    SUBCASE("one-sided error: field bases are always matching-saturable") {
        std::mt19937_64 rng(181);
        for (int trial = 0; trial < 30; ++trial) {
            const SetSystem s = random_full_rank_system(rng, 7, 3);
            const Matroid by_matching = transversal_matroid(s);
            const Matroid by_field = matroid_from_matrix(random_evaluation(s, rng()));
            for (GroundSubset b : by_field.bases()) CHECK(by_matching.is_basis(b));
        }
    }
    SUBCASE("three-seed union equals the matching matroid on a broad sample") {
        std::mt19937_64 rng(191);
        for (int trial = 0; trial < 60; ++trial) {
            const int n = 4 + static_cast<int>(rng() % 5); // 4..8
            const int k = 1 + static_cast<int>(rng() % 4); // 1..4
            SetSystem s = random_full_rank_system(rng, n, k);
            CHECK(matroid_from_seeds(s, {rng(), rng(), rng()}) == transversal_matroid(s));
        }
    }
}

TEST_CASE("matching expansion") {
    SUBCASE("the 2x2 pattern gives the two signed terms of a determinant") {
        const auto terms = plucker_matching_expansion(sys(2, {{1, 2}, {1, 2}}), gs({1, 2}));
        REQUIRE(terms.size() == 2);
        CHECK(terms[0].sign + terms[1].sign == 0);
    }
    SUBCASE("unique matching in identity order has sign +1") {
        const auto terms = plucker_matching_expansion(sys(3, {{1}, {2}, {3}}), gs({1, 2, 3}));
        REQUIRE(terms.size() == 1);
        CHECK(terms[0].sign == 1);
    }
    SUBCASE("no matching gives an empty expansion") {
        CHECK(plucker_matching_expansion(sys(3, {{1}, {1}, {3}}), gs({1, 2, 3})).empty());
    }
    SUBCASE("evaluating the expansion equals the determinant") {
        std::mt19937_64 rng(193);
        for (int trial = 0; trial < 25; ++trial) {
            const SetSystem s = random_full_rank_system(rng, 6, 3);
            const FieldMatrix m = random_evaluation(s, rng());
            for_each_k_subset(6, 3, [&](GroundSubset i) {
                const auto terms = plucker_matching_expansion(s, i);
                CHECK(evaluate_expansion(terms, m) == plucker(m, i));
            });
        }
    }
    SUBCASE("budget overflow raises a capability error") {
        // Full 6x6 pattern: 720 matchings.
        std::vector<GroundSubset> sets(6, GroundSubset::full(6));
        CHECK_THROWS_AS(
            plucker_matching_expansion(SetSystem(6, sets), GroundSubset::full(6), 100),
            capability_error);
    }
}

TEST_CASE("field interval ranks agree with the matching-based interval rank matrix") {
    std::mt19937_64 rng(197);
    for (int trial = 0; trial < 25; ++trial) {
        const SetSystem s = random_full_rank_system(rng, 6, 3);
        const IntervalRankMatrix r = interval_rank_matrix(s);
        // One-sided per seed; amplify by taking the max over three seeds.
        std::vector<FieldMatrix> ms;
        for (int t = 0; t < 3; ++t) ms.push_back(random_evaluation(s, rng()));
        for (int i = 1; i <= 6; ++i)
            for (int j = i; j <= 6; ++j) {
                int best = 0;
                for (const FieldMatrix& m : ms) best = std::max(best, field_interval_rank(m, i, j));
                CHECK(best == r.at(i, j));
            }
    }
}
