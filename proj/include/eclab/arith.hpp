#pragma once

/// Word-size modular arithmetic, deterministic primality and factorization.
///
/// Everything here works on unsigned 64-bit integers with 128-bit
/// intermediates, so moduli up to 2^64 - 1 are safe.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "eclab/errors.hpp"

namespace eclab {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline constexpr u64 mul_mod(u64 a, u64 b, u64 m) {
    if (((a | b) >> 32) == 0) return a * b % m;
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline constexpr u64 add_mod(u64 a, u64 b, u64 m) {
    u64 s = a + b;
    if (s < a || s >= m) s -= m;
    return s;
}

inline constexpr u64 sub_mod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

inline constexpr u64 pow_mod(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

/// Reduces a signed value into [0, m).
inline constexpr u64 reduce_signed(i64 a, u64 m) {
    i128 r = static_cast<i128>(a) % static_cast<i128>(m);
    if (r < 0) r += m;
    return static_cast<u64>(r);
}

/// Inverse of a modulo m, or 0 when gcd(a, m) != 1.
inline constexpr u64 inv_mod(u64 a, u64 m) {
    if (m == 1) return 0;
    if (m >> 63) {
        i128 t = 0, new_t = 1;
        i128 r = m, new_r = a % m;
        while (new_r != 0) {
            i128 q = r / new_r;
            i128 tmp = t - q * new_t;
            t = new_t;
            new_t = tmp;
            tmp = r - q * new_r;
            r = new_r;
            new_r = tmp;
        }
        if (r != 1) return 0;
        if (t < 0) t += m;
        return static_cast<u64>(t);
    }
    i64 t = 0, new_t = 1;
    u64 r = m, new_r = a % m;
    while (new_r != 0) {
        const u64 q = r / new_r;
        const i64 tmp = t - static_cast<i64>(q) * new_t;
        t = new_t;
        new_t = tmp;
        const u64 rr = r - q * new_r;
        r = new_r;
        new_r = rr;
    }
    if (r != 1) return 0;
    return t < 0 ? static_cast<u64>(t + static_cast<i64>(m)) : static_cast<u64>(t);
}

inline constexpr u64 isqrt(u64 n) {
    if (n < 2) return n;
    u64 x = static_cast<u64>(__builtin_sqrt(static_cast<double>(n)));
    while (x > 0 && static_cast<u128>(x) * x > n) --x;
    while (static_cast<u128>(x + 1) * (x + 1) <= n) ++x;
    return x;
}

namespace detail {

inline bool miller_rabin_witness(u64 n, u64 a, u64 d, int s) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mul_mod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

}  // namespace detail

/// Deterministic for every 64-bit n (the first twelve prime bases suffice).
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    static constexpr u64 small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 p : small) {
        if (n % p == 0) return n == p;
    }
    if (n < 37 * 37) return true;
    u64 d = n - 1;
    int s = std::countr_zero(d);
    d >>= s;
    for (u64 a : small) {
        if (!detail::miller_rabin_witness(n, a, d, s)) return false;
    }
    return true;
}

namespace detail {

/// Brent's variant of Pollard rho; returns a nontrivial factor of odd composite n.
inline u64 pollard_brent(u64 n) {
    for (u64 c = 1;; ++c) {
        u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
        const u64 block = 128;
        u64 r = 1;
        auto f = [&](u64 v) { return add_mod(mul_mod(v, v, n), c, n); };
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            do {
                ys = y;
                for (u64 i = 0; i < std::min(block, r - k); ++i) {
                    y = f(y);
                    q = mul_mod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += block;
            } while (k < r && g == 1);
            r <<= 1;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

inline void factor_into(u64 n, std::map<u64, int>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    u64 d = pollard_brent(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace detail

/// Prime factorization as ascending (prime, exponent) pairs; empty for n <= 1.
inline std::vector<std::pair<u64, int>> factorize(u64 n) {
    std::map<u64, int> found;
    if (n <= 1) return {};
    for (u64 p : {2ULL, 3ULL, 5ULL}) {
        while (n % p == 0) {
            ++found[p];
            n /= p;
        }
    }
    static constexpr u64 wheel[] = {4, 2, 4, 2, 4, 6, 2, 6};
    u64 p = 7;
    for (int i = 0; p <= 1000 && p * p <= n; p += wheel[i++ & 7]) {
        while (n % p == 0) {
            ++found[p];
            n /= p;
        }
    }
    if (n > 1) detail::factor_into(n, found);
    return {found.begin(), found.end()};
}

inline u64 euler_phi(u64 n) {
    u64 phi = n;
    for (auto [p, e] : factorize(n)) phi = phi / p * (p - 1);
    return phi;
}

/// Carmichael function lambda(n), the exponent of (Z/nZ)^*.
inline u64 carmichael_lambda(u64 n) {
    u64 lambda = 1;
    for (auto [p, e] : factorize(n)) {
        u64 pk = 1;
        for (int i = 1; i < e; ++i) pk *= p;
        u64 part = pk * (p - 1);
        if (p == 2 && e >= 3) part /= 2;
        lambda = std::lcm(lambda, part);
    }
    return lambda;
}

}  // namespace eclab
