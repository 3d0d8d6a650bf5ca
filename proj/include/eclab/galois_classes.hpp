#pragma once

/// Exact enumeration of C_r(n) = { g in GL2(Z/nZ) : det g + 1 - tr g = r (mod n) }
/// and checks of the closed forms, lifting laws and ratio bounds for these sets.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <boost/rational.hpp>

#include "eclab/arith.hpp"
#include "eclab/errors.hpp"

namespace eclab {

using Rational = boost::rational<i64>;

inline constexpr u64 kMaxClassModulus = 64;

struct ClassCountTable {
    u64 modulus = 0;
    u64 group_order = 0;
    std::vector<u64> counts;  ///< counts[r] = |C_r(modulus)|

    u64 total() const { return std::accumulate(counts.begin(), counts.end(), u64{0}); }
};

/// |GL2(Z/l^k Z)| = l^(4(k-1)) (l^2 - 1)(l^2 - l).
inline u64 gl2_order(u64 l, unsigned k) {
    if (k == 0) throw invalid_parameter("k must be >= 1");
    u64 order = (l * l - 1) * (l * l - l);
    for (unsigned i = 1; i < k; ++i) order *= l * l * l * l;
    return order;
}

/// |GL2(Z/nZ)| for any n >= 1, by multiplicativity over prime powers.
inline u64 gl2_order(u64 n) {
    u64 order = 1;
    for (auto [l, e] : factorize(n)) order *= gl2_order(l, static_cast<unsigned>(e));
    return order;
}

/// Counts every invertible 2x2 matrix mod n by its residue det + 1 - tr.
/// Work is split by the top-left entry across `threads` workers.
inline ClassCountTable class_counts_bruteforce(u64 n, unsigned threads = 1) {
    if (n < 2) throw invalid_parameter("modulus must be >= 2");
    if (n > kMaxClassModulus) {
        throw resource_limit("class enumeration is capped at n <= " +
                             std::to_string(kMaxClassModulus));
    }
    std::vector<char> unit(n);
    for (u64 v = 0; v < n; ++v) unit[v] = std::gcd(v, n) == 1;

    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    std::vector<std::vector<u64>> partial(threads, std::vector<u64>(n, 0));
    auto work = [&](unsigned shard) {
        auto& counts = partial[shard];
        for (u64 a = shard; a < n; a += threads) {
            for (u64 d = 0; d < n; ++d) {
                const u64 ad = a * d % n;
                const u64 shift = (2 * n + 1 - a - d) % n;
                for (u64 b = 0; b < n; ++b) {
                    for (u64 c = 0; c < n; ++c) {
                        const u64 det = (ad + n * n - b * c) % n;
                        if (unit[det]) ++counts[(det + shift) % n];
                    }
                }
            }
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned s = 0; s < threads; ++s) pool.emplace_back(work, s);
    }

    ClassCountTable table{n, gl2_order(n), std::vector<u64>(n, 0)};
    for (const auto& counts : partial) {
        for (u64 r = 0; r < n; ++r) table.counts[r] += counts[r];
    }
    return table;
}

/// Closed form of |C_r(l)| for prime l.
inline u64 class_count_formula(u64 l, u64 r) {
    r %= l;
    if (r == 0) return l * (l * l - 2);
    if (r == 1) return l * (l * l - l - 1);
    return l * (l * l - l - 2);
}

/// |C_r(l)| / |GL2(Z/lZ)| in lowest terms.
inline Rational density_formula(u64 l, u64 r) {
    r %= l;
    const i64 L = static_cast<i64>(l);
    const i64 denom = (L - 1) * (L - 1) * (L + 1);
    if (r == 0) return {L * L - 2, denom};
    if (r == 1) return {L * L - L - 1, denom};
    return {L * L - L - 2, denom};
}

/// Closed form for |C_r(n)| built from prime-power pieces, when every piece has one:
/// primes use the three-case formula, higher powers l^k use l^(3(k-1)) |C_r(l)| for r != 0 (mod l).
inline std::optional<u64> class_count_closed_form(u64 n, u64 r) {
    u64 count = 1;
    for (auto [l, e] : factorize(n)) {
        const u64 rl = r % l;
        if (e >= 2 && rl == 0) return std::nullopt;
        u64 piece = class_count_formula(l, rl);
        for (int i = 1; i < e; ++i) piece *= l * l * l;
        count *= piece;
    }
    return count;
}

/// One row of the class table export.
struct ClassRow {
    u64 modulus;
    u64 r;
    u64 count;
    std::optional<u64> formula_count;
    bool match() const { return formula_count && *formula_count == count; }
};

inline std::vector<ClassRow> class_rows(const ClassCountTable& table) {
    std::vector<ClassRow> rows;
    for (u64 r = 0; r < table.modulus; ++r) {
        rows.push_back({table.modulus, r, table.counts[r],
                        class_count_closed_form(table.modulus, r)});
    }
    return rows;
}

/// CSV with header modulus,r,count,formula_count,match; rows lacking a closed form are skipped.
inline void write_class_csv(std::ostream& out, const std::vector<ClassRow>& rows) {
    out << "modulus,r,count,formula_count,match\n";
    for (const auto& row : rows) {
        if (!row.formula_count) continue;
        out << row.modulus << ',' << row.r << ',' << row.count << ',' << *row.formula_count << ','
            << (row.match() ? 1 : 0) << '\n';
    }
}

namespace detail {

inline u64 ipow(u64 base, unsigned k) {
    u64 v = 1;
    for (unsigned i = 0; i < k; ++i) v *= base;
    return v;
}

inline void check_prime_power(u64 l, unsigned k) {
    if (!is_prime(l)) throw invalid_parameter("l must be prime");
    if (k == 0) throw invalid_parameter("k must be >= 1");
    u64 v = 1;
    for (unsigned i = 0; i < k; ++i) {
        v *= l;
        if (v > kMaxClassModulus) throw resource_limit("l^k exceeds the enumeration cap");
    }
}

}  // namespace detail

/// Brute-force ratio |C_r(l^k)| / |GL2| against the lower and upper bounds
///   (1/phi(l^k)) (l-2)/(l-1)  <=  ratio  <=  (1/phi(l^k)) (1 + [r = 0 mod l] / ((l^3-1)(l^2-1))).
struct RatioBoundCheck {
    u64 l = 0;
    unsigned k = 0;
    u64 r = 0;
    Rational ratio;
    Rational lower;
    Rational upper;
    bool pass = false;
};

inline RatioBoundCheck ratio_bounds_check(u64 l, unsigned k, u64 r, const ClassCountTable& table) {
    const u64 n = detail::ipow(l, k);
    if (table.modulus != n) throw invalid_parameter("table modulus does not match l^k");
    RatioBoundCheck c;
    c.l = l;
    c.k = k;
    c.r = r % n;
    const i64 L = static_cast<i64>(l);
    const i64 phi = static_cast<i64>(n / l * (l - 1));
    c.ratio = Rational(static_cast<i64>(table.counts[c.r]), static_cast<i64>(table.group_order));
    c.lower = Rational(1, phi) * Rational(L - 2, L - 1);
    c.upper = Rational(1, phi);
    if (c.r % l == 0) c.upper *= Rational(1) + Rational(1, (L * L * L - 1) * (L * L - 1));
    c.pass = c.lower <= c.ratio && c.ratio <= c.upper;
    return c;
}

inline RatioBoundCheck ratio_bounds_check(u64 l, unsigned k, u64 r) {
    detail::check_prime_power(l, k);
    return ratio_bounds_check(l, k, r, class_counts_bruteforce(detail::ipow(l, k)));
}

/// Matrices of C_r(l^k) congruent to the identity mod l, counted by enumerating the
/// l^(4(k-1)) lifts [[1 + k1 l, k2 l], [k3 l, 1 + k4 l]].
inline u64 identity_lift_count(u64 l, unsigned k, u64 r) {
    detail::check_prime_power(l, k);
    const u64 n = detail::ipow(l, k);
    const u64 steps = n / l;
    r %= n;
    u64 count = 0;
    for (u64 k1 = 0; k1 < steps; ++k1) {
        for (u64 k2 = 0; k2 < steps; ++k2) {
            for (u64 k3 = 0; k3 < steps; ++k3) {
                for (u64 k4 = 0; k4 < steps; ++k4) {
                    const u64 a = (1 + k1 * l) % n, b = k2 * l, c = k3 * l, d = (1 + k4 * l) % n;
                    const u64 det = (a * d % n + n * n - b * c % n) % n;
                    if ((det + 1 + 2 * n - a - d) % n == r) ++count;
                }
            }
        }
    }
    return count;
}

/// Lifting law checks at modulus l^k.
///
/// For r != 0 (mod l): |C_r(l^k)| = l^(3(k-1)) |C_r(l)| exactly.
/// For r = 0 (mod l): |C_r(l^k)| = l^(3(k-1)) (|C_0(l)| - 1) + I, where I counts the
/// identity lifts, and I is compared with the bound l * l^(3(k-1)) * l^3 / (l^3 - 1).
struct LiftingReport {
    u64 l = 0;
    unsigned k = 0;
    u64 r = 0;
    u64 count = 0;       ///< |C_r(l^k)|
    u64 base_count = 0;  ///< |C_{r mod l}(l)|
    u64 lift_factor = 0; ///< l^(3(k-1))
    bool identity_case = false;
    bool law_holds = false;  ///< the exact decomposition above
    std::optional<u64> identity_lifts;
    std::optional<Rational> identity_bound;
    bool identity_bound_holds = true;

    bool pass() const { return law_holds && identity_bound_holds; }
};

inline LiftingReport lifting_check(u64 l, unsigned k, u64 r, const ClassCountTable& lk,
                                   const ClassCountTable& l1) {
    LiftingReport rep;
    rep.l = l;
    rep.k = k;
    rep.r = r % lk.modulus;
    rep.count = lk.counts[rep.r];
    rep.base_count = l1.counts[rep.r % l];
    rep.lift_factor = detail::ipow(l, 3 * (k - 1));
    rep.identity_case = rep.r % l == 0;
    if (!rep.identity_case) {
        rep.law_holds = rep.count == rep.lift_factor * rep.base_count;
        return rep;
    }
    const u64 lifts = identity_lift_count(l, k, rep.r);
    rep.identity_lifts = lifts;
    rep.law_holds = rep.count == rep.lift_factor * (rep.base_count - 1) + lifts;
    const i64 L = static_cast<i64>(l);
    const i64 l3 = L * L * L;
    rep.identity_bound = Rational(L * static_cast<i64>(rep.lift_factor) * l3, l3 - 1);
    rep.identity_bound_holds = Rational(static_cast<i64>(lifts)) <= *rep.identity_bound;
    return rep;
}

inline LiftingReport lifting_check(u64 l, unsigned k, u64 r) {
    detail::check_prime_power(l, k);
    return lifting_check(l, k, r, class_counts_bruteforce(detail::ipow(l, k)),
                         class_counts_bruteforce(l));
}

}  // namespace eclab
