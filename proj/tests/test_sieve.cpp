#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "eclab/census.hpp"
#include "eclab/sieve.hpp"
#include "oracles.hpp"

using namespace eclab;

namespace {

const WeierstrassCurve k37a({0, 0, 1, -1, 0}, "37a");

std::vector<TraceRecord> census_traces(u64 x) { return traces_of(run_census(k37a, 2, x).records); }

}  // namespace

TEST(Sieve, Density) {
    EXPECT_EQ(w_density(2, 1), Rational(4, 3));
    EXPECT_EQ(w_density(5, 1), Rational(115, 96));
    EXPECT_EQ(w_density(5, 7), Rational(0));
}

TEST(Sieve, VProductSmall) {
    EXPECT_NEAR(V_product(1, 3), 1.0 / 3, 1e-15);
    EXPECT_NEAR(V_product(1, 4), 3.0 / 16, 1e-15);
    EXPECT_EQ(V_product(7, 7), 1.0);
    EXPECT_THROW(V_product(5, 4), invalid_parameter);
}

TEST(Sieve, VProductMatchesExactRationals) {
    using Big = boost::rational<boost::multiprecision::cpp_int>;
    Big exact(1);
    for (u64 p : oracle::primes_td(60)) {
        const boost::multiprecision::cpp_int P = p;
        exact *= Big(1) - Big(P * (P * P - 2), P * (P - 1) * (P * P - 1));
    }
    const double ref = static_cast<double>(exact.numerator()) / static_cast<double>(exact.denominator());
    EXPECT_NEAR(V_product(1, 61), ref, 1e-14);
}

TEST(Sieve, Telescoping) {
    const auto primes = primes_up_to(200000);
    std::mt19937_64 rng(17);
    for (int i = 0; i < 50; ++i) {
        double y = 1 + static_cast<double>(rng() % 100000);
        double z = 1 + static_cast<double>(rng() % 100000);
        if (y > z) std::swap(y, z);
        const double lhs = V_product(primes, y, z);
        const double rhs = V_product(primes, 1, z) / V_product(primes, 1, y);
        EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(lhs)));
    }
}

TEST(Sieve, ConstantC) {
    EXPECT_NEAR(constant_C_partial(2), 2.0 / 3, 1e-15);
    EXPECT_NEAR(constant_C_partial(3), 0.5625, 1e-15);
    EXPECT_LT(constant_C_partial(1e5), constant_C_partial(1e4));
}

TEST(Sieve, MertensRatio) {
    const auto primes = primes_up_to(100000);
    const double ratio = mertens_ratio(primes, 1e5, constant_C_partial(primes, 1e5));
    EXPECT_GE(ratio, 0.95);
    EXPECT_LE(ratio, 1.05);
}

TEST(Sieve, FFunction) {
    const double eg = std::exp(oracle::euler_gamma_em());
    EXPECT_NEAR(F_linear(2), eg, 1e-12);
    EXPECT_NEAR(F_linear(1), 2 * eg, 1e-12);
    EXPECT_NEAR(F_linear(2), 1.781072, 1e-6);
    EXPECT_THROW(F_linear(4), domain_error);
    EXPECT_THROW(F_linear(0), domain_error);
}

TEST(Sieve, Envelopes) {
    const double u = theorem1_envelope(1e6, BoundMode::unconditional);
    const double g = theorem1_envelope(1e6, BoundMode::grh);
    EXPECT_NEAR(u / 2.275e6, 1.0, 0.01);
    EXPECT_NEAR(g / 6.86e5, 1.0, 0.01);
    EXPECT_GT(theorem1_envelope(1e6, BoundMode::grh, 0.5), g);
    EXPECT_THROW(theorem1_envelope(10, BoundMode::grh), domain_error);
}

TEST(Sieve, EmpiricalFixtures) {
    const std::vector<TraceRecord> r15 = {{13, -1, 15}};
    EXPECT_EQ(empirical_S(r15, 3, 7), 0u);
    EXPECT_EQ(empirical_S(r15, 7, 7), 1u);
    EXPECT_EQ(empirical_T(r15, 2, 7, 7), 0u);
    const std::vector<TraceRecord> r341 = {{331, -9, 341}};
    EXPECT_EQ(empirical_T(r341, 2, 11, 12), 1u);
}

TEST(Sieve, EmpiricalSAgainstTrialDivision) {
    const auto traces = census_traces(10000);
    u64 expect = 0;
    for (const auto& r : traces) {
        bool hit = false;
        for (u64 l : oracle::prime_factors_td(r.n)) hit = hit || (l >= 5 && l < 50);
        expect += hit ? 0 : 1;
    }
    EXPECT_EQ(empirical_S(traces, 5, 50), expect);
}

TEST(Sieve, QBoundedBySPlusT) {
    const auto traces = census_traces(100000);
    const u64 Q = empirical_Q(traces, 2);
    for (double y : {2.0, 3.0, 10.0, 50.0}) {
        for (double z : {60.0, 200.0, 1000.0}) {
            EXPECT_LE(Q, empirical_S(traces, y, z) + empirical_T(traces, 2, y, z));
        }
    }
}

TEST(Sieve, PresetsAreDegenerateAtDeskScale) {
    for (double x : {1e5, 1e6}) {
        for (auto mode : {BoundMode::unconditional, BoundMode::grh}) {
            const auto p = preset_params(x, mode);
            EXPECT_TRUE(p.degenerate);
            EXPECT_EQ(p.y, p.z);
        }
    }
}

TEST(Sieve, ReportFields) {
    const auto traces = census_traces(100000);
    const u64 pi_x = primes_up_to(100000).size();
    const auto rep = sieve_report(traces, 2, 1e5, SieveParams{3, 100, false, "custom"}, pi_x);
    EXPECT_EQ(rep.s, 2.0);
    EXPECT_NEAR(rep.F_s, 1.781072, 1e-6);
    EXPECT_TRUE(rep.q_within_s_plus_t());
    EXPECT_NEAR(rep.main_term, rep.prime_count * rep.V_y_z * rep.F_s, 1e-6);
    EXPECT_TRUE(rep.vacuous_uncond);
}

TEST(Sieve, OmegaFit) {
    const auto primes = primes_up_to(100000);
    const std::vector<std::pair<double, double>> pairs = {{10, 100}, {100, 1000}, {1000, 100000}};
    const double K = fit_omega1_K(primes, pairs);
    for (auto [z1, z2] : pairs) {
        const double ratio = V_product(primes, 1, z1) / V_product(primes, 1, z2);
        EXPECT_LE(ratio, std::log(z2) / std::log(z1) * (1 + K / std::log(z1)) + 1e-12);
    }
}
