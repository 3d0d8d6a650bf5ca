#pragma once

// Slow, obviously-correct reference computations. Nothing here calls into eclab.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;
using i64 = std::int64_t;

inline bool is_prime_td(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

inline std::vector<u64> primes_td(u64 x) {
    std::vector<u64> out;
    for (u64 n = 2; n <= x; ++n) {
        if (is_prime_td(n)) out.push_back(n);
    }
    return out;
}

inline std::vector<u64> prime_factors_td(u64 n) {
    std::vector<u64> out;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

inline u64 gcd(u64 a, u64 b) {
    while (b) {
        const u64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline u64 mod(i64 a, u64 m) {
    const i64 r = a % static_cast<i64>(m);
    return static_cast<u64>(r < 0 ? r + static_cast<i64>(m) : r);
}

// |E(F_p)| for y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 by trying every (x, y).
inline u64 count_points_exhaustive(const std::array<i64, 5>& a, u64 p) {
    const u64 a1 = mod(a[0], p), a2 = mod(a[1], p), a3 = mod(a[2], p), a4 = mod(a[3], p),
              a6 = mod(a[4], p);
    u64 n = 1;
    for (u64 x = 0; x < p; ++x) {
        const u64 rhs = ((x * x % p * x) + a2 * x % p * x + a4 * x + a6) % p;
        for (u64 y = 0; y < p; ++y) {
            const u64 lhs = (y * y + a1 * x % p * y + a3 * y) % p;
            if (lhs == rhs) ++n;
        }
    }
    return n;
}

// b^e mod m by repeated multiplication.
inline u64 slow_pow(u64 b, u64 e, u64 m) {
    u64 r = 1 % m;
    b %= m;
    for (u64 i = 0; i < e; ++i) r = static_cast<u64>(static_cast<unsigned __int128>(r) * b % m);
    return r;
}

inline bool fermat_naive(u64 b, u64 n) { return slow_pow(b, n, n) == b % n; }

// Smallest k >= 1 with b^k = 1 (mod d), or 0 if none.
inline u64 order_scan(u64 b, u64 d) {
    if (d == 1) return 1;
    if (gcd(b, d) != 1) return 0;
    u64 v = b % d;
    for (u64 k = 1; k <= d; ++k) {
        if (v == 1) return k;
        v = v * (b % d) % d;
    }
    return 0;
}

inline u64 crt_scan(u64 b, u64 d) {
    const u64 o = order_scan(b, d);
    for (u64 r = 1; r <= d * o; ++r) {
        if (r % d == 0 && r % o == 1 % o) return r;
    }
    return 0;
}

// Counts of det + 1 - tr over all 2x2 matrices mod n with unit determinant.
inline std::vector<u64> class_counts_naive(u64 n) {
    std::vector<u64> counts(n, 0);
    for (u64 a = 0; a < n; ++a)
        for (u64 b = 0; b < n; ++b)
            for (u64 c = 0; c < n; ++c)
                for (u64 d = 0; d < n; ++d) {
                    const u64 det = (a * d + n * n - b * c) % n;
                    if (gcd(det, n) != 1) continue;
                    ++counts[(det + 1 + 2 * n - a - d) % n];
                }
    return counts;
}

inline u64 gl2_count_naive(u64 n) {
    u64 total = 0;
    for (u64 c : class_counts_naive(n)) total += c;
    return total;
}

// Euler-Mascheroni constant by Euler-Maclaurin on H_N - log N.
inline double euler_gamma_em() {
    const int N = 1000;
    long double h = 0;
    for (int k = 1; k <= N; ++k) h += 1.0L / k;
    const long double n = N;
    return static_cast<double>(h - std::log(n) - 1.0L / (2 * n) + 1.0L / (12 * n * n) -
                               1.0L / (120 * n * n * n * n));
}

struct CsvRecord {
    u64 p;
    i64 a_p;
    u64 n;
    int is_prime;
    int is_pseudoprime;
    int fermat;
};

inline std::vector<CsvRecord> read_records(const std::string& path) {
    std::ifstream in(path);
    std::vector<CsvRecord> out;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        CsvRecord r{};
        ss >> r.p >> r.a_p >> r.n >> r.is_prime >> r.is_pseudoprime >> r.fermat;
        out.push_back(r);
    }
    return out;
}

// n -> number of records with that n.
inline std::map<u64, u64> recount(const std::vector<CsvRecord>& recs) {
    std::map<u64, u64> m;
    for (const auto& r : recs) ++m[r.n];
    return m;
}

}  // namespace oracle
