#include <gtest/gtest.h>

#include "eclab/galois_classes.hpp"
#include "oracles.hpp"

using namespace eclab;

TEST(Gl2, Orders) {
    EXPECT_EQ(gl2_order(3, 1), 48u);
    EXPECT_EQ(gl2_order(5, 1), 480u);
    EXPECT_EQ(gl2_order(3, 2), 3888u);
    EXPECT_EQ(gl2_order(3, 1), oracle::gl2_count_naive(3));
    EXPECT_EQ(gl2_order(5, 1), oracle::gl2_count_naive(5));
    EXPECT_EQ(gl2_order(3, 2), oracle::gl2_count_naive(9));
    EXPECT_EQ(gl2_order(12), oracle::gl2_count_naive(12));
}

TEST(Classes, SmallTables) {
    const auto t2 = class_counts_bruteforce(2);
    EXPECT_EQ(t2.counts, (std::vector<u64>{4, 2}));
    EXPECT_EQ(t2.total(), 6u);
    EXPECT_EQ(class_counts_bruteforce(3).counts[0], 21u);
    EXPECT_EQ(class_counts_bruteforce(5).counts, (std::vector<u64>{115, 95, 90, 90, 90}));
}

TEST(Classes, MatchesNaiveEnumeration) {
    for (u64 n = 2; n <= 16; ++n) EXPECT_EQ(class_counts_bruteforce(n).counts, oracle::class_counts_naive(n)) << n;
}

TEST(Classes, ThreadedMatchesSingle) {
    EXPECT_EQ(class_counts_bruteforce(30, 4).counts, class_counts_bruteforce(30, 1).counts);
}

TEST(Classes, PartitionUpTo64) {
    for (u64 n = 2; n <= 64; ++n) {
        const auto t = class_counts_bruteforce(n);
        EXPECT_EQ(t.total(), t.group_order) << n;
    }
}

TEST(Classes, ResourceLimit) {
    EXPECT_THROW(class_counts_bruteforce(65), resource_limit);
    EXPECT_THROW(class_counts_bruteforce(1), invalid_parameter);
}

TEST(Classes, FormulaValues) {
    EXPECT_EQ(class_count_formula(5, 0), 115u);
    EXPECT_EQ(class_count_formula(5, 1), 95u);
    EXPECT_EQ(class_count_formula(5, 3), 90u);
    EXPECT_EQ(density_formula(5, 0), Rational(23, 96));
    EXPECT_EQ(density_formula(5, 2), Rational(3, 16));
    for (u64 l : {2, 3, 5, 7, 11, 13}) {
        Rational sum(0);
        for (u64 r = 0; r < l; ++r) sum += density_formula(l, r);
        EXPECT_EQ(sum, Rational(1)) << l;
    }
}

TEST(Classes, FormulaMatchesEnumerationForPrimes) {
    for (u64 l : {2, 3, 5, 7, 11, 13}) {
        const auto t = class_counts_bruteforce(l);
        for (u64 r = 0; r < l; ++r) EXPECT_EQ(t.counts[r], class_count_formula(l, r)) << l << ' ' << r;
    }
}

TEST(Classes, ClosedFormRowsAllMatch) {
    for (u64 n = 2; n <= 40; ++n) {
        for (const auto& row : class_rows(class_counts_bruteforce(n))) {
            if (row.formula_count) EXPECT_TRUE(row.match()) << n << ' ' << row.r;
        }
    }
    EXPECT_FALSE(class_count_closed_form(9, 3).has_value());
    EXPECT_TRUE(class_count_closed_form(15, 0).has_value());
}

TEST(Classes, CsvFormat) {
    std::ostringstream out;
    write_class_csv(out, class_rows(class_counts_bruteforce(3)));
    EXPECT_EQ(out.str(), "modulus,r,count,formula_count,match\n3,0,21,21,1\n3,1,15,15,1\n3,2,12,12,1\n");
}

TEST(Lifting, Examples) {
    const auto r1 = lifting_check(3, 2, 1);
    EXPECT_EQ(r1.count, 405u);
    EXPECT_EQ(r1.count, 27 * 15u);
    EXPECT_TRUE(r1.law_holds);
    EXPECT_TRUE(lifting_check(3, 2, 2).law_holds);
    const auto r0 = lifting_check(5, 2, 0);
    EXPECT_TRUE(r0.law_holds);
    ASSERT_TRUE(r0.identity_bound);
    EXPECT_EQ(*r0.identity_bound, Rational(5 * 125 * 125, 124));
    EXPECT_TRUE(r0.identity_bound_holds);
}

TEST(Lifting, C2Of27) {
    const auto r = lifting_check(3, 3, 2);
    EXPECT_EQ(r.count, 729 * class_counts_bruteforce(3).counts[2]);
    EXPECT_TRUE(r.law_holds);
}

TEST(Lifting, IdentityLiftsAtSquareModuli) {
    for (u64 l : {3, 5, 7}) {
        for (u64 r = 0; r < l * l; r += l) {
            const auto rep = lifting_check(l, 2, r);
            EXPECT_TRUE(rep.law_holds) << l << ' ' << r;
            EXPECT_TRUE(rep.identity_bound_holds) << l << ' ' << r;
        }
    }
}

// At 27 the identity lifts with r = 0 number 81 * 33 = 2673, above the bound 59049/26.
TEST(Lifting, IdentityBoundExceededAt27) {
    const auto rep = lifting_check(3, 3, 0);
    EXPECT_TRUE(rep.law_holds);
    EXPECT_EQ(*rep.identity_lifts, 2673u);
    EXPECT_EQ(*rep.identity_bound, Rational(3 * 729 * 27, 26));
    EXPECT_FALSE(rep.identity_bound_holds);
    EXPECT_TRUE(ratio_bounds_check(3, 3, 0).pass);
}

TEST(RatioBounds, AllPrimePowersUpTo64) {
    for (u64 l : {3, 5, 7}) {
        unsigned k = 1;
        for (u64 q = l; q <= 64; q *= l, ++k) {
            const auto t = class_counts_bruteforce(q);
            for (u64 r = 0; r < q; ++r) EXPECT_TRUE(ratio_bounds_check(l, k, r, t).pass) << q << ' ' << r;
        }
    }
}

TEST(RatioBounds, ValidatesInput) {
    EXPECT_THROW(ratio_bounds_check(4, 1, 0), invalid_parameter);
    EXPECT_THROW(ratio_bounds_check(3, 4, 0), resource_limit);
}
