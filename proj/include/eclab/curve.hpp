#pragma once

/// Elliptic curves over Q in long Weierstrass form, their reductions modulo
/// primes, and exact point counting over F_p.

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "eclab/arith.hpp"
#include "eclab/errors.hpp"

namespace eclab {

using BigInt = boost::multiprecision::cpp_int;

/// Coefficients [a1, a2, a3, a4, a6] of
///   y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
using Coefficients = std::array<i64, 5>;

/// Standard discriminant from the b-invariants; zero means singular.
inline BigInt discriminant(const Coefficients& a) {
    const BigInt a1 = a[0], a2 = a[1], a3 = a[2], a4 = a[3], a6 = a[4];
    const BigInt b2 = a1 * a1 + 4 * a2;
    const BigInt b4 = 2 * a4 + a1 * a3;
    const BigInt b6 = a3 * a3 + 4 * a6;
    const BigInt b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
}

struct WeierstrassCurve {
    Coefficients a{};
    BigInt disc;
    std::string label;
    bool cm_flag = false;
    /// Stand-in for the Serre constant M_E: mod-n images are assumed full for gcd(n, M_E) = 1.
    std::optional<u64> serre_bound;

    WeierstrassCurve() = default;
    WeierstrassCurve(Coefficients coeffs, std::string name = {}, bool cm = false,
                     std::optional<u64> serre = std::nullopt)
        : a(coeffs), disc(discriminant(coeffs)), label(std::move(name)), cm_flag(cm),
          serre_bound(serre) {}

    bool singular() const { return disc == 0; }

    /// True when p does not divide the discriminant.
    bool good_at(u64 p) const { return BigInt(disc % p) != 0; }
};

struct ReducedCurve {
    u64 p = 0;
    std::array<u64, 5> a{};
    bool good = false;
};

inline ReducedCurve reduce_mod(const WeierstrassCurve& curve, u64 p) {
    ReducedCurve rc;
    rc.p = p;
    for (std::size_t i = 0; i < 5; ++i) rc.a[i] = reduce_signed(curve.a[i], p);
    rc.good = curve.good_at(p);
    return rc;
}

/// (p, a_E(p), n_E(p)) with n = p + 1 - a_p.
struct TraceRecord {
    u64 p = 0;
    i64 a_p = 0;
    u64 n = 0;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

inline bool hasse_holds(const TraceRecord& r) {
    const i128 a = r.a_p;
    return a * a <= 4 * static_cast<i128>(r.p) &&
           static_cast<i128>(r.n) == static_cast<i128>(r.p) + 1 - a;
}

/// n/16 <= p <= 16 n.
inline bool hasse_ratio_holds(const TraceRecord& r) {
    return static_cast<u128>(r.n) <= 16 * static_cast<u128>(r.p) &&
           static_cast<u128>(r.p) <= 16 * static_cast<u128>(r.n);
}

namespace detail {

inline void require_good(const ReducedCurve& rc) {
    if (!rc.good) throw domain_error("bad reduction at p = " + std::to_string(rc.p));
}

/// Counts affine solutions by trying every (x, y); only used for p in {2, 3}.
inline u64 count_by_enumeration(const ReducedCurve& rc) {
    const u64 p = rc.p;
    const auto& [a1, a2, a3, a4, a6] = rc.a;
    u64 count = 1;
    for (u64 x = 0; x < p; ++x) {
        const u64 rhs = (x * x % p * x + a2 * x % p * x + a4 * x + a6) % p;
        for (u64 y = 0; y < p; ++y) {
            if ((y * y + a1 * x % p * y + a3 * y) % p == rhs) ++count;
        }
    }
    return count;
}

/// Invariants b2, b4, b6 reduced mod p.
inline std::array<u64, 3> b_invariants(const ReducedCurve& rc) {
    const u64 p = rc.p;
    const auto& [a1, a2, a3, a4, a6] = rc.a;
    const u64 b2 = add_mod(mul_mod(a1, a1, p), mul_mod(4 % p, a2, p), p);
    const u64 b4 = add_mod(mul_mod(2 % p, a4, p), mul_mod(a1, a3, p), p);
    const u64 b6 = add_mod(mul_mod(a3, a3, p), mul_mod(4 % p, a6, p), p);
    return {b2, b4, b6};
}

}  // namespace detail

/// Quadratic character table: chi[v] for v in [0, p), built by squaring.
inline std::vector<signed char> quadratic_character_table(u64 p) {
    std::vector<signed char> chi(p, -1);
    chi[0] = 0;
    for (u64 y = 1; y <= p / 2; ++y) chi[y * y % p] = 1;
    return chi;
}

/// O(p) count: completes the square for odd p, enumerates (x, y) for p in {2, 3}.
inline u64 count_points_naive(const ReducedCurve& rc) {
    detail::require_good(rc);
    const u64 p = rc.p;
    if (p <= 3) return detail::count_by_enumeration(rc);
    // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    const auto [b2, b4, b6] = detail::b_invariants(rc);
    const auto chi = quadratic_character_table(p);
    i64 sum = 0;
    for (u64 x = 0; x < p; ++x) {
        const u64 x2 = mul_mod(x, x, p);
        u64 f = mul_mod(4, mul_mod(x2, x, p), p);
        f = add_mod(f, mul_mod(b2, x2, p), p);
        f = add_mod(f, mul_mod(mul_mod(2, b4, p), x, p), p);
        f = add_mod(f, b6, p);
        sum += chi[f];
    }
    return static_cast<u64>(static_cast<i64>(p) + 1 + sum);
}

/// Short model y^2 = x^3 + A x + B over F_p (p > 3) with affine point arithmetic.
class ShortCurve {
public:
    struct Point {
        u64 x = 0;
        u64 y = 0;
        bool inf = true;
        friend bool operator==(const Point&, const Point&) = default;
    };

    ShortCurve(u64 p, u64 A, u64 B) : p_(p), A_(A), B_(B) {}

    /// Isomorphic short model of a reduced long-form curve (x -> x/36 scaling via c4, c6).
    static ShortCurve from_reduced(const ReducedCurve& rc) {
        const u64 p = rc.p;
        const auto [b2, b4, b6] = detail::b_invariants(rc);
        // c4 = b2^2 - 24 b4, c6 = -b2^3 + 36 b2 b4 - 216 b6
        const u64 c4 = sub_mod(mul_mod(b2, b2, p), mul_mod(24 % p, b4, p), p);
        u64 c6 = sub_mod(mul_mod(36 % p, mul_mod(b2, b4, p), p),
                         mul_mod(mul_mod(b2, b2, p), b2, p), p);
        c6 = sub_mod(c6, mul_mod(216 % p, b6, p), p);
        const u64 A = sub_mod(0, mul_mod(27 % p, c4, p), p);
        const u64 B = sub_mod(0, mul_mod(54 % p, c6, p), p);
        return ShortCurve(p, A, B);
    }

    u64 p() const { return p_; }
    u64 A() const { return A_; }
    u64 B() const { return B_; }

    u64 rhs(u64 x) const {
        return add_mod(mul_mod(add_mod(mul_mod(x, x, p_), A_, p_), x, p_), B_, p_);
    }

    bool on_curve(const Point& P) const { return P.inf || mul_mod(P.y, P.y, p_) == rhs(P.x); }

    Point add(const Point& P, const Point& Q) const {
        if (P.inf) return Q;
        if (Q.inf) return P;
        u64 lambda;
        if (P.x == Q.x) {
            if (add_mod(P.y, Q.y, p_) == 0) return {};
            const u64 num = add_mod(mul_mod(3, mul_mod(P.x, P.x, p_), p_), A_, p_);
            lambda = mul_mod(num, inv_mod(add_mod(P.y, P.y, p_), p_), p_);
        } else {
            lambda = mul_mod(sub_mod(Q.y, P.y, p_), inv_mod(sub_mod(Q.x, P.x, p_), p_), p_);
        }
        const u64 x3 = sub_mod(sub_mod(mul_mod(lambda, lambda, p_), P.x, p_), Q.x, p_);
        const u64 y3 = sub_mod(mul_mod(lambda, sub_mod(P.x, x3, p_), p_), P.y, p_);
        return {x3, y3, false};
    }

    Point negate(const Point& P) const {
        return P.inf ? P : Point{P.x, sub_mod(0, P.y, p_), false};
    }

    Point multiply(const Point& P, u64 k) const {
        Point result{}, base = P;
        while (k > 0) {
            if (k & 1) result = add(result, base);
            base = add(base, base);
            k >>= 1;
        }
        return result;
    }

    /// Exact order of P given any positive multiple of it.
    u64 order_from_multiple(const Point& P, u64 multiple) const {
        u64 order = multiple;
        for (auto [q, e] : factorize(multiple)) {
            for (int i = 0; i < e && multiple_is_zero(P, order / q); ++i) order /= q;
        }
        return order;
    }

    /// Some multiple N of ord(P) with lo <= N <= hi, or a smaller one found on the way.
    /// Requires that the interval contains a multiple of ord(P).
    u64 multiple_in_interval(const Point& P, u64 lo, u64 hi) const;

private:
    bool multiple_is_zero(const Point& P, u64 k) const { return multiply(P, k).inf; }

    u64 p_, A_, B_;
};

inline u64 ShortCurve::multiple_in_interval(const Point& P, u64 lo, u64 hi) const {
    const u64 width = hi - lo;
    const u64 m = isqrt(width / 2) + 1;
    // baby steps jP, j = 1..m, keyed by x-coordinate
    std::vector<std::pair<u64, u64>> baby;
    baby.reserve(m);
    Point jP = P;
    for (u64 j = 1; j <= m; ++j) {
        if (jP.inf) return j;
        baby.emplace_back(jP.x, j);
        jP = add(jP, P);
    }
    std::sort(baby.begin(), baby.end());
    const Point step = multiply(P, 2 * m + 1);
    u64 center = lo + m;
    Point R = multiply(P, center);
    while (center <= hi + m) {
        if (R.inf) return center;
        auto it = std::lower_bound(baby.begin(), baby.end(), std::make_pair(R.x, u64{0}));
        if (it != baby.end() && it->first == R.x) {
            const u64 j = it->second;
            const Point Pj = multiply(P, j);
            // R = jP  =>  (center - j)P = O;  R = -jP  =>  (center + j)P = O
            return Pj.y == R.y ? center - j : center + j;
        }
        R = add(R, step);
        center += 2 * m + 1;
    }
    throw std::logic_error("baby-step/giant-step found no multiple in the Hasse interval");
}

/// Result of the accelerated count, with a flag for the rare O(p) fallback.
struct AcceleratedCount {
    u64 n = 0;
    bool used_fallback = false;
    int points_used = 0;
};

/// Hasse interval [p + 1 - floor(2 sqrt p), p + 1 + floor(2 sqrt p)].
inline std::pair<u64, u64> hasse_interval(u64 p) {
    const u64 w = isqrt(4 * p);
    return {p + 1 - w, p + 1 + w};
}

/// Baby-step/giant-step count for p > 3.
///
/// Random points come from both E and its quadratic twist: for v = f(x0) != 0 the
/// point (x0 v, v^2) lies on y^2 = X^3 + A v^2 X + B v^3, which is E when v is a
/// square and the twist otherwise. Orders of such points give n = 0 (mod L_E) and
/// 2p + 2 - n = 0 (mod L_T); sampling continues until one n in the Hasse interval
/// survives both congruences.
inline AcceleratedCount count_points_bsgs(const ReducedCurve& rc, int max_points = 64) {
    detail::require_good(rc);
    const u64 p = rc.p;
    if (p <= 3) throw invalid_parameter("baby-step/giant-step counting needs p > 3");
    const ShortCurve E = ShortCurve::from_reduced(rc);
    const auto [lo, hi] = hasse_interval(p);
    std::mt19937_64 rng(p * 0x9E3779B97F4A7C15ULL + E.A() * 31 + E.B());

    u64 lcm_e = 1, lcm_t = 1;
    AcceleratedCount result;
    const u64 exponent = (p - 1) / 2;
    while (result.points_used < max_points) {
        const u64 x0 = rng() % p;
        const u64 v = E.rhs(x0);
        if (v == 0) continue;
        ++result.points_used;
        const u64 v2 = mul_mod(v, v, p);
        const ShortCurve Ev(p, mul_mod(E.A(), v2, p), mul_mod(E.B(), mul_mod(v2, v, p), p));
        const ShortCurve::Point P{mul_mod(x0, v, p), v2, false};
        const u64 order = Ev.order_from_multiple(P, Ev.multiple_in_interval(P, lo, hi));
        const bool on_twist = pow_mod(v, exponent, p) != 1;
        u64& acc = on_twist ? lcm_t : lcm_e;
        acc = std::lcm(acc, order);

        // candidates n with lcm_e | n and lcm_t | 2p + 2 - n
        u64 found = 0, how_many = 0;
        for (u64 n = (lo + lcm_e - 1) / lcm_e * lcm_e; n <= hi && how_many < 2; n += lcm_e) {
            if ((2 * p + 2 - n) % lcm_t == 0) {
                found = n;
                ++how_many;
            }
        }
        if (how_many == 1) {
            result.n = found;
            return result;
        }
    }
    result.n = count_points_naive(rc);
    result.used_fallback = true;
    return result;
}

inline constexpr u64 kAcceleratedThreshold = 4096;

/// |E(F_p)| including the point at infinity.
inline u64 count_points(const ReducedCurve& rc) {
    if (rc.p < kAcceleratedThreshold) return count_points_naive(rc);
    return count_points_bsgs(rc).n;
}

inline TraceRecord trace_record(const WeierstrassCurve& curve, u64 p) {
    const ReducedCurve rc = reduce_mod(curve, p);
    const u64 n = count_points(rc);
    return {p, static_cast<i64>(p + 1) - static_cast<i64>(n), n};
}

// ---------------------------------------------------------------------------
// Text format: label:a1,a2,a3,a4,a6[,cm=0|1][,serre=<int>]

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <typename Int>
Int parse_exact_int(std::string_view s, std::string_view what) {
    s = trim(s);
    Int value{};
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw invalid_parameter("not an integer for " + std::string(what) + ": '" +
                                std::string(s) + "'");
    }
    return value;
}

}  // namespace detail

inline WeierstrassCurve parse_curve_line(std::string_view line) {
    line = detail::trim(line);
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw invalid_parameter("curve line needs 'label:'");
    const std::string label(detail::trim(line.substr(0, colon)));
    if (label.empty()) throw invalid_parameter("empty curve label");

    std::vector<std::string_view> fields;
    std::string_view rest = line.substr(colon + 1);
    while (true) {
        const auto comma = rest.find(',');
        fields.push_back(detail::trim(rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    if (fields.size() < 5) throw invalid_parameter("curve '" + label + "' needs five coefficients");

    Coefficients coeffs{};
    for (std::size_t i = 0; i < 5; ++i) coeffs[i] = detail::parse_exact_int<i64>(fields[i], "a_i");
    bool cm = false;
    std::optional<u64> serre;
    for (std::size_t i = 5; i < fields.size(); ++i) {
        const auto f = fields[i];
        if (f.starts_with("cm=")) {
            const int v = detail::parse_exact_int<int>(f.substr(3), "cm");
            if (v != 0 && v != 1) throw invalid_parameter("cm must be 0 or 1");
            cm = v == 1;
        } else if (f.starts_with("serre=")) {
            serre = detail::parse_exact_int<u64>(f.substr(6), "serre");
            if (*serre == 0) throw invalid_parameter("serre bound must be positive");
        } else {
            throw invalid_parameter("unknown curve option '" + std::string(f) + "'");
        }
    }
    return WeierstrassCurve(coeffs, label, cm, serre);
}

/// Reads every non-blank, non-comment ('#') line.
inline std::vector<WeierstrassCurve> parse_curve_file(std::istream& in) {
    std::vector<WeierstrassCurve> curves;
    std::string line;
    while (std::getline(in, line)) {
        const auto t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        curves.push_back(parse_curve_line(t));
    }
    return curves;
}

inline std::string format_curve_line(const WeierstrassCurve& c) {
    std::string s = c.label + ":";
    for (std::size_t i = 0; i < 5; ++i) s += (i ? "," : "") + std::to_string(c.a[i]);
    s += c.cm_flag ? ",cm=1" : ",cm=0";
    if (c.serre_bound) s += ",serre=" + std::to_string(*c.serre_bound);
    return s;
}

/// A few well-known curves, available without a curve file.
inline const std::vector<WeierstrassCurve>& builtin_curves() {
    static const std::vector<WeierstrassCurve> curves = [] {
        std::vector<WeierstrassCurve> v;
        for (const char* line : {
                 "37a:0,0,1,-1,0,cm=0,serre=74",
                 "11a:0,-1,1,-10,-20,cm=0,serre=110",
                 "389a:0,1,1,-2,0,cm=0,serre=778",
                 "5077a:0,0,1,-7,6,cm=0,serre=10154",
                 "32a:0,0,0,-1,0,cm=1",
                 "27a:0,0,1,0,-7,cm=1",
             }) {
            v.push_back(parse_curve_line(line));
        }
        return v;
    }();
    return curves;
}

inline std::optional<WeierstrassCurve> find_curve(const std::vector<WeierstrassCurve>& curves,
                                                  std::string_view label) {
    for (const auto& c : curves) {
        if (c.label == label) return c;
    }
    return std::nullopt;
}

}  // namespace eclab
