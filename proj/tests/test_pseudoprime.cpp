#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "eclab/pseudoprime.hpp"
#include "oracles.hpp"

using namespace eclab;

TEST(Fermat, Examples) {
    EXPECT_TRUE(fermat_holds(2, 341));
    EXPECT_TRUE(fermat_holds(2, 7));
    EXPECT_FALSE(fermat_holds(2, 9));
    EXPECT_TRUE(fermat_holds(2, 1));
}

TEST(Fermat, MatchesRepeatedMultiplication) {
    for (u64 b : {2, 3, 5, 6, 10}) {
        for (u64 n = 1; n < 3000; ++n) EXPECT_EQ(fermat_holds(b, n), oracle::fermat_naive(b, n)) << b << ' ' << n;
    }
}

TEST(Fermat, StrictVariant) {
    EXPECT_TRUE(fermat_holds_strict(2, 341));
    EXPECT_FALSE(fermat_holds_strict(2, 2));  // gcd(2, 2) > 1
    EXPECT_TRUE(fermat_holds(2, 2));
    EXPECT_FALSE(fermat_holds_strict(3, 561 * 3));
}

TEST(Classify, Examples) {
    EXPECT_TRUE(classify(2, 341).pseudoprime);
    const auto v11 = classify(2, 11);
    EXPECT_FALSE(v11.pseudoprime);
    EXPECT_TRUE(v11.prime);
    const auto v1 = classify(2, 1);
    EXPECT_FALSE(v1.pseudoprime);
    EXPECT_TRUE(v1.fermat);
    EXPECT_FALSE(v1.prime);
    EXPECT_FALSE(v1.composite);
}

TEST(Classify, Base2PseudoprimesBelow10000) {
    std::vector<u64> expected;
    std::vector<u64> got;
    for (u64 n = 1; n < 10000; ++n) {
        if (!oracle::is_prime_td(n) && n > 1 && oracle::fermat_naive(2, n)) expected.push_back(n);
        if (classify(2, n).pseudoprime) got.push_back(n);
    }
    EXPECT_EQ(got, expected);
    ASSERT_GE(got.size(), 7u);
    EXPECT_EQ(std::vector<u64>(got.begin(), got.begin() + 7),
              (std::vector<u64>{341, 561, 645, 1105, 1387, 1729, 1905}));
}

TEST(MultOrder, Examples) {
    EXPECT_EQ(mult_order(2, 7), 3u);
    EXPECT_EQ(mult_order(2, 341), 10u);
    EXPECT_THROW(mult_order(2, 4), not_invertible);
    EXPECT_THROW(mult_order(2, 1), invalid_parameter);
}

TEST(MultOrder, MatchesScan) {
    for (u64 b : {2, 3, 7, 10}) {
        for (u64 d = 2; d < 2500; ++d) {
            if (oracle::gcd(b, d) != 1) continue;
            EXPECT_EQ(mult_order(b, d), oracle::order_scan(b, d)) << b << ' ' << d;
        }
    }
}

TEST(MultOrder, RandomLargeModuliDivideLambda) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        const u64 d = rng() % (u64{1} << 40) + 3;
        if (std::gcd(u64{2}, d) != 1) continue;
        const u64 o = mult_order(2, d);
        EXPECT_EQ(pow_mod(2, o, d), 1u);
        for (auto [q, e] : factorize(o)) EXPECT_NE(pow_mod(2, o / q, d), 1u);
    }
}

TEST(Crt, Examples) {
    EXPECT_EQ(crt_residue(2, 7), 7u);
    EXPECT_EQ(crt_residue(2, 5), oracle::crt_scan(2, 5));
    EXPECT_EQ(crt_residue(3, 13), 13u);
    EXPECT_THROW(crt_residue(2, 9), no_crt_solution);  // ord_9(2) = 6
}

TEST(Crt, MatchesScan) {
    for (u64 d = 3; d < 400; d += 2) {
        const u64 o = oracle::order_scan(2, d);
        if (oracle::gcd(d, o) != 1) continue;
        EXPECT_EQ(crt_residue(2, d), oracle::crt_scan(2, d)) << d;
    }
}

TEST(OrderCensus, Examples) {
    EXPECT_EQ(order_census(2, 10), (std::map<u64, u64>{{2, 1}, {3, 1}, {4, 1}}));
    EXPECT_TRUE(order_census(2, 2).empty());
}

TEST(OrderCensus, CountBound) {
    for (auto [m, c] : order_census(2, 100000)) EXPECT_LE(static_cast<double>(c), order_count_bound(2, m));
    for (auto [m, c] : order_census(10, 20000)) EXPECT_LE(static_cast<double>(c), order_count_bound(10, m));
}

TEST(OrderCensus, SkipsPrimesDividingBase) {
    const OrderTable t(6, 50);
    EXPECT_EQ(std::vector<u64>(t.skipped().begin(), t.skipped().end()), (std::vector<u64>{2, 3}));
}

TEST(TailSum, Examples) {
    EXPECT_EQ(tail_sum(2, 8.0, 7), 0.0);
    const double hand = 1.0 / 6 + 1.0 / 20 + 1.0 / 21;
    EXPECT_NEAR(tail_sum(2, 3, 7), hand, 1e-15);
    EXPECT_NEAR(tail_sum(2, 3, 7), 0.264285, 1e-6);
    EXPECT_NEAR(product_tail_sum(2, 1, 7), hand, 1e-15);
    EXPECT_EQ(product_tail_sum(2, 1e9, 1000), 0.0);
}

TEST(TailSum, MonotoneInT) {
    const OrderTable table(2, 100000);
    double prev = tail_sum(table, 3, 100000);
    for (double t : {10.0, 100.0, 1000.0, 10000.0}) {
        const double cur = tail_sum(table, t, 100000);
        EXPECT_LE(cur, prev);
        prev = cur;
    }
}

TEST(LFunction, Values) {
    EXPECT_NEAR(L_of(1e6), 160.6, 0.5);
    EXPECT_EQ(L_of(10), 1.0);
    EXPECT_TRUE(L_is_clamped(10));
    EXPECT_FALSE(L_is_clamped(16));
    const double l1 = std::log(1e6), l2 = std::log(l1), l3 = std::log(l2);
    EXPECT_DOUBLE_EQ(L_of(1e6), std::exp(l1 * l3 / l2));
}

TEST(PomeranceCount, Examples) {
    EXPECT_EQ(pomerance_count(2, 10, 2), 1u);
    EXPECT_EQ(pomerance_count(2, 10, 1), 0u);
    u64 scan = 0;
    for (u64 d = 2; d <= 100; ++d) scan += oracle::order_scan(2, d) == 4 ? 1 : 0;
    EXPECT_EQ(pomerance_count(2, 100, 4), scan);
}

TEST(PomeranceCount, MatchesScanForManyM) {
    for (u64 m = 1; m <= 30; ++m) {
        u64 scan = 0;
        for (u64 d = 2; d <= 3000; ++d) scan += oracle::order_scan(3, d) == m ? 1 : 0;
        EXPECT_EQ(pomerance_count(3, 3000, m), scan) << m;
    }
}
