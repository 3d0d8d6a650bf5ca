#pragma once

/// Fermat pseudoprimes, multiplicative orders and the order statistics that
/// control how often n_E(p) can satisfy b^n = b (mod n).

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eclab/arith.hpp"
#include "eclab/errors.hpp"
#include "eclab/primes.hpp"

namespace eclab {

/// Which congruence defines "passes the Fermat test at n".
enum class FermatVariant {
    weak,    ///< b^n = b (mod n)
    strict,  ///< gcd(b, n) = 1 and b^(n-1) = 1 (mod n)
};

/// b^n = b (mod n); n = 1 always holds.
inline bool fermat_holds(u64 b, u64 n) {
    if (n == 1) return true;
    return pow_mod(b % n, n, n) == b % n;
}

inline bool fermat_holds_strict(u64 b, u64 n) {
    if (n == 1) return true;
    return std::gcd(b, n) == 1 && pow_mod(b % n, n - 1, n) == 1;
}

inline bool fermat_holds(u64 b, u64 n, FermatVariant variant) {
    return variant == FermatVariant::weak ? fermat_holds(b, n) : fermat_holds_strict(b, n);
}

struct PseudoprimeVerdict {
    u64 n = 0;
    u64 b = 0;
    bool fermat = false;
    bool prime = false;
    bool composite = false;
    bool pseudoprime = false;
};

/// n = 1 is neither prime nor composite, so never a pseudoprime.
inline PseudoprimeVerdict classify(u64 b, u64 n, FermatVariant variant = FermatVariant::weak) {
    PseudoprimeVerdict v;
    v.n = n;
    v.b = b;
    v.fermat = fermat_holds(b, n, variant);
    v.prime = is_prime(n);
    v.composite = n > 1 && !v.prime;
    v.pseudoprime = v.fermat && v.composite;
    return v;
}

/// Multiplicative order of b modulo d: divides lambda(d), found by stripping its prime factors.
inline u64 mult_order(u64 b, u64 d) {
    if (d < 2) throw invalid_parameter("mult_order needs d >= 2");
    b %= d;
    if (std::gcd(b, d) != 1) {
        throw not_invertible("gcd(" + std::to_string(b) + ", " + std::to_string(d) + ") > 1");
    }
    u64 order = carmichael_lambda(d);
    for (auto [q, e] : factorize(order)) {
        for (int i = 0; i < e && pow_mod(b, order / q, d) == 1; ++i) order /= q;
    }
    return order;
}

/// Order for prime modulus l, using a known factorization of l - 1.
inline u64 mult_order_prime(u64 b, u64 l, std::span<const std::pair<u64, int>> lm1_factors) {
    b %= l;
    u64 order = l - 1;
    for (auto [q, e] : lm1_factors) {
        for (int i = 0; i < e && pow_mod(b, order / q, l) == 1; ++i) order /= q;
    }
    return order;
}

/// b, d, ord_d(b) and the CRT residue r_{b,d} when it exists.
struct OrderRecord {
    u64 d = 0;
    u64 b = 0;
    u64 ord = 0;
    std::optional<u64> crt_residue;
};

/// The r in [1, d ord_d(b)] with r = 0 (mod d) and r = 1 (mod ord_d(b)).
inline u64 crt_residue(u64 b, u64 d) {
    const u64 ord = mult_order(b, d);
    if (std::gcd(d, ord) != 1) {
        throw no_crt_solution("gcd(d, ord_d(b)) > 1 for d = " + std::to_string(d));
    }
    // r = d * k with d k = 1 (mod ord)
    const u64 k = ord == 1 ? 0 : inv_mod(d % ord, ord);
    const u64 r = d * k;
    return r == 0 ? d * ord : r;
}

inline OrderRecord order_record(u64 b, u64 d) {
    OrderRecord rec{d, b, mult_order(b, d), std::nullopt};
    if (std::gcd(d, rec.ord) == 1) rec.crt_residue = crt_residue(b, d);
    return rec;
}

/// ord_l(b) for every prime l <= cap coprime to b; primes dividing b are listed separately.
class OrderTable {
public:
    OrderTable(u64 b, u64 cap) : b_(b), cap_(cap) {
        if (b < 2) throw invalid_parameter("base must be >= 2");
        const auto primes = primes_up_to(cap);
        for (u64 l : primes) {
            if (b % l == 0) {
                skipped_.push_back(l);
                continue;
            }
            const auto f = factorize(l - 1);
            entries_.push_back({l, mult_order_prime(b, l, f)});
        }
    }

    struct Entry {
        u64 l;
        u64 ord;
    };

    u64 base() const { return b_; }
    u64 cap() const { return cap_; }
    std::span<const Entry> entries() const { return entries_; }
    /// Primes <= cap dividing b (excluded from every statistic).
    std::span<const u64> skipped() const { return skipped_; }

private:
    u64 b_;
    u64 cap_;
    std::vector<Entry> entries_;
    std::vector<u64> skipped_;
};

/// m -> number of primes l <= t (coprime to b) with ord_l(b) = m.
inline std::map<u64, u64> order_census(const OrderTable& table, u64 t) {
    std::map<u64, u64> counts;
    for (const auto& e : table.entries()) {
        if (e.l > t) break;
        ++counts[e.ord];
    }
    return counts;
}

inline std::map<u64, u64> order_census(u64 b, u64 t) { return order_census(OrderTable(b, t), t); }

/// Upper bound (log b / log 2) m on the number of primes of order m.
inline double order_count_bound(u64 b, u64 m) {
    return std::log(static_cast<double>(b)) / std::log(2.0) * static_cast<double>(m);
}

/// Sum over primes t <= l <= cap of 1 / (l ord_l(b)).
inline double tail_sum(const OrderTable& table, double t, u64 cap) {
    double sum = 0.0;
    const auto entries = table.entries();
    // smallest terms first
    for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
        if (it->l > cap) continue;
        if (static_cast<double>(it->l) < t) break;
        sum += 1.0 / (static_cast<double>(it->l) * static_cast<double>(it->ord));
    }
    return sum;
}

inline double tail_sum(u64 b, double t, u64 cap) { return tail_sum(OrderTable(b, cap), t, cap); }

/// Sum over primes l <= cap with l ord_l(b) >= t of 1 / (l ord_l(b)).
inline double product_tail_sum(const OrderTable& table, double t, u64 cap) {
    double sum = 0.0;
    const auto entries = table.entries();
    for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
        if (it->l > cap) continue;
        const double prod = static_cast<double>(it->l) * static_cast<double>(it->ord);
        if (prod >= t) sum += 1.0 / prod;
    }
    return sum;
}

inline double product_tail_sum(u64 b, double t, u64 cap) {
    return product_tail_sum(OrderTable(b, cap), t, cap);
}

/// exp(log x log_3 x / log_2 x), clamped to 1 for x <= e^e where log_3 x <= 0.
inline double L_of(double x) {
    if (!(x > std::exp(std::exp(1.0)))) return 1.0;
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    const double l3 = std::log(l2);
    return std::exp(l1 * l3 / l2);
}

inline bool L_is_clamped(double x) { return !(x > std::exp(std::exp(1.0))); }

/// |{2 <= d <= t : gcd(b, d) = 1, ord_d(b) = m}|.
inline u64 pomerance_count(u64 b, u64 t, u64 m) {
    if (m == 0) throw invalid_parameter("order m must be >= 1");
    u64 count = 0;
    for (u64 d = 2; d <= t; ++d) {
        if (std::gcd(b, d) != 1) continue;
        // d | b^m - 1
        if (pow_mod(b, m, d) != 1) continue;
        if (mult_order(b, d) == m) ++count;
    }
    return count;
}

/// Count of d <= t with ord_d(b) = m against t / sqrt(L(t)); violations are flagged, not fatal.
struct PomeranceReport {
    u64 b = 0;
    u64 t = 0;
    u64 m = 0;
    u64 count = 0;
    double bound = 0.0;
    bool within_bound = true;
    bool L_clamped = false;
};

inline PomeranceReport pomerance_report(u64 b, u64 t, u64 m) {
    PomeranceReport r;
    r.b = b;
    r.t = t;
    r.m = m;
    r.count = pomerance_count(b, t, m);
    r.L_clamped = L_is_clamped(static_cast<double>(t));
    r.bound = static_cast<double>(t) / std::sqrt(L_of(static_cast<double>(t)));
    r.within_bound = static_cast<double>(r.count) <= r.bound;
    return r;
}

}  // namespace eclab
