#include <gtest/gtest.h>

#include <random>

#include "eclab/arith.hpp"
#include "oracles.hpp"

using namespace eclab;

TEST(Arith, IsPrimeAgreesWithTrialDivision) {
    for (u64 n = 0; n < 20000; ++n) EXPECT_EQ(is_prime(n), oracle::is_prime_td(n)) << n;
}

TEST(Arith, IsPrimeLargeKnownValues) {
    EXPECT_TRUE(is_prime(1000000007ULL));
    EXPECT_TRUE(is_prime(18446744073709551557ULL));
    EXPECT_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to 2, 3, 5, 7
    EXPECT_FALSE(is_prime(1000000007ULL * 998244353ULL));
}

TEST(Arith, FactorizeReassembles) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 300; ++i) {
        const u64 n = rng() % (u64{1} << 62) + 2;
        u64 prod = 1;
        for (auto [q, e] : factorize(n)) {
            EXPECT_TRUE(is_prime(q));
            for (int k = 0; k < e; ++k) prod *= q;
        }
        EXPECT_EQ(prod, n);
    }
}

TEST(Arith, FactorizeSmallMatchesTrialDivision) {
    for (u64 n = 2; n < 5000; ++n) {
        std::vector<u64> ps;
        for (auto [q, e] : factorize(n)) ps.push_back(q);
        EXPECT_EQ(ps, oracle::prime_factors_td(n)) << n;
    }
}

TEST(Arith, InverseAndPow) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i) {
        const u64 m = rng() % 1000000 + 2;
        const u64 a = rng() % m;
        const u64 inv = inv_mod(a, m);
        if (oracle::gcd(a, m) == 1) {
            EXPECT_EQ(mul_mod(a, inv, m), 1 % m);
        } else {
            EXPECT_EQ(inv, 0u);
        }
        const u64 e = rng() % 200;
        EXPECT_EQ(pow_mod(a, e, m), oracle::slow_pow(a, e, m));
    }
    const u64 big = 18446744073709551557ULL;
    EXPECT_EQ(mul_mod(inv_mod(123456789, big), 123456789, big), 1u);
}

TEST(Arith, PhiAndLambda) {
    EXPECT_EQ(euler_phi(1), 1u);
    EXPECT_EQ(euler_phi(36), 12u);
    EXPECT_EQ(carmichael_lambda(561), 80u);
    EXPECT_EQ(carmichael_lambda(8), 2u);
    for (u64 n = 2; n < 300; ++n) {
        for (u64 b = 1; b < n; ++b) {
            if (oracle::gcd(b, n) == 1) EXPECT_EQ(carmichael_lambda(n) % oracle::order_scan(b, n), 0u);
        }
    }
}

TEST(Arith, Isqrt) {
    for (u64 n = 0; n < 10000; ++n) {
        const u64 r = isqrt(n);
        EXPECT_LE(r * r, n);
        EXPECT_GT((r + 1) * (r + 1), n);
    }
    EXPECT_EQ(isqrt(~u64{0}), 4294967295u);
}
