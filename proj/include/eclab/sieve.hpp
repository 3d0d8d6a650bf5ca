#pragma once

/// Linear-sieve ingredients for sieving the sequence n_E(p): the density
/// w_y(l), the products V_y(z), the constant C, F(s), the main-result
/// envelopes and the empirical S / T counts they bound.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eclab/arith.hpp"
#include "eclab/curve.hpp"
#include "eclab/errors.hpp"
#include "eclab/galois_classes.hpp"
#include "eclab/primes.hpp"
#include "eclab/pseudoprime.hpp"

namespace eclab {

inline constexpr long double kEulerGamma = 0.577215664901532860606512090082402431L;
/// e^gamma to 18 significant digits.
inline constexpr long double kExpEulerGamma = 1.78107241799019798524L;

/// w_y(l) = l (l^2 - 2) / ((l - 1)(l^2 - 1)) for l >= y, 0 below y.
inline Rational w_density(u64 l, double y) {
    if (static_cast<double>(l) < y) return Rational(0);
    if (l > (u64{1} << 20)) throw invalid_parameter("w_density rational form needs l <= 2^20");
    const i64 L = static_cast<i64>(l);
    return Rational(L * (L * L - 2), (L - 1) * (L * L - 1));
}

/// 1 - w_1(p)/p = 1 - (p^2 - 2)/((p - 1)(p^2 - 1)).
inline long double sieve_factor(u64 p) {
    const long double P = static_cast<long double>(p);
    return 1.0L - (P * P - 2.0L) / ((P - 1.0L) * (P * P - 1.0L));
}

/// V_y(z) = prod over primes y <= p < z of (1 - w_y(p)/p).
inline double V_product(std::span<const u64> primes, double y, double z) {
    long double v = 1.0L;
    for (u64 p : primes) {
        const double pd = static_cast<double>(p);
        if (pd >= z) break;
        if (pd >= y) v *= sieve_factor(p);
    }
    return static_cast<double>(v);
}

inline double V_product(double y, double z) {
    if (y < 1.0 || z < y) throw invalid_parameter("V_product needs 1 <= y <= z");
    const auto primes = primes_up_to(static_cast<u64>(std::ceil(z)));
    return V_product(primes, y, z);
}

/// Partial product over p <= P of 1 - (p^2 - p - 1)/((p - 1)^3 (p + 1)).
inline double constant_C_partial(std::span<const u64> primes, double P) {
    long double c = 1.0L;
    for (u64 p : primes) {
        if (static_cast<double>(p) > P) break;
        const long double q = static_cast<long double>(p);
        c *= 1.0L - (q * q - q - 1.0L) / ((q - 1.0L) * (q - 1.0L) * (q - 1.0L) * (q + 1.0L));
    }
    return static_cast<double>(c);
}

inline double constant_C_partial(double P) {
    if (P < 2.0) throw invalid_parameter("constant_C_partial needs P >= 2");
    const auto primes = primes_up_to(static_cast<u64>(std::floor(P)));
    return constant_C_partial(primes, P);
}

/// Upper sieve function F(s) = 2 e^gamma / s on 0 < s <= 3.
inline double F_linear(double s) {
    if (!(s > 0.0 && s <= 3.0)) throw domain_error("F(s) is only provided for 0 < s <= 3");
    return static_cast<double>(2.0L * kExpEulerGamma / static_cast<long double>(s));
}

enum class BoundMode { unconditional, grh };

inline const char* to_string(BoundMode m) {
    return m == BoundMode::unconditional ? "unconditional" : "grh";
}

/// Upper envelope for Q_{E,b}(x):
///   unconditional  (48 e^gamma + eps) x log_3 x / (log x log_2 x)
///   grh            (28 e^gamma + eps) x log_2 x / (log x)^2
inline double theorem1_envelope(double x, BoundMode mode, double eps = 0.0) {
    if (!(x > std::exp(std::exp(1.0)))) throw domain_error("envelope needs x > e^e");
    const double l1 = std::log(x), l2 = std::log(l1), l3 = std::log(l2);
    const double eg = static_cast<double>(kExpEulerGamma);
    if (mode == BoundMode::unconditional) return (48.0 * eg + eps) * x * l3 / (l1 * l2);
    return (28.0 * eg + eps) * x * l2 / (l1 * l1);
}

/// True when n has a prime factor l with y <= l < z.
inline bool has_factor_in(u64 n, double y, double z) {
    for (auto [l, e] : factorize(n)) {
        const double ld = static_cast<double>(l);
        if (ld >= y && ld < z) return true;
    }
    return false;
}

/// |S(x, y, z)|: records whose n is coprime to every prime in [y, z).
inline u64 empirical_S(std::span<const TraceRecord> records, double y, double z) {
    if (z < y) throw invalid_parameter("empirical_S needs y <= z");
    u64 count = 0;
    for (const auto& r : records) {
        if (!has_factor_in(r.n, y, z)) ++count;
    }
    return count;
}

/// |T(x, y, z)|: records sharing a prime in [y, z) with n and passing b^n = b (mod n).
inline u64 empirical_T(std::span<const TraceRecord> records, u64 b, double y, double z) {
    if (z < y) throw invalid_parameter("empirical_T needs y <= z");
    u64 count = 0;
    for (const auto& r : records) {
        if (has_factor_in(r.n, y, z) && fermat_holds(b, r.n)) ++count;
    }
    return count;
}

inline u64 empirical_Q(std::span<const TraceRecord> records, u64 b) {
    u64 count = 0;
    for (const auto& r : records) count += fermat_holds(b, r.n) ? 1 : 0;
    return count;
}

/// Sieve range (y, z) chosen as functions of x. At desk-scale x the formulas give
/// z <= y; z is then raised to y (empty sieving range) and `degenerate` is set.
struct SieveParams {
    double y = 2.0;
    double z = 2.0;
    bool degenerate = false;
    std::string preset;
};

inline SieveParams preset_params(double x, BoundMode mode) {
    if (!(x > std::exp(std::exp(1.0)))) throw domain_error("presets need x > e^e");
    const double l1 = std::log(x), l2 = std::log(l1), l3 = std::log(l2);
    SieveParams p;
    p.preset = to_string(mode);
    if (mode == BoundMode::unconditional) {
        p.y = l2 * l2 * l3;
        p.z = std::pow(l1, 1.0 / 24.0) / l2;
    } else {
        p.y = l1 * l1 * l2;
        p.z = std::pow(x, 1.0 / 14.0) / l1;
    }
    if (p.z <= p.y) {
        p.z = p.y;
        p.degenerate = true;
    }
    return p;
}

/// Everything the sieve says about one census at one (y, z).
struct SieveReport {
    double x = 0, y = 0, z = 0;
    double s = 2.0;  ///< sieve level log(z^2)/log z
    double V_y_z = 0;
    double F_s = 0;
    double envelope_uncond = 0;
    double envelope_grh = 0;
    u64 empirical_S = 0;
    u64 empirical_T = 0;
    u64 empirical_Q = 0;
    u64 prime_count = 0;     ///< good primes in the census, standing in for Li(x)
    double main_term = 0;    ///< prime_count * V_y(z) * F(s)
    bool vacuous_uncond = false;
    bool vacuous_grh = false;
    bool degenerate = false;
    std::string preset;

    bool q_within_s_plus_t() const { return empirical_Q <= empirical_S + empirical_T; }
};

inline SieveReport sieve_report(std::span<const TraceRecord> records, u64 b, double x,
                                const SieveParams& params, u64 pi_x) {
    SieveReport rep;
    rep.x = x;
    rep.y = params.y;
    rep.z = params.z;
    rep.degenerate = params.degenerate;
    rep.preset = params.preset;
    rep.V_y_z = V_product(std::max(1.0, params.y), std::max(params.y, params.z));
    rep.F_s = F_linear(rep.s);
    rep.envelope_uncond = theorem1_envelope(x, BoundMode::unconditional);
    rep.envelope_grh = theorem1_envelope(x, BoundMode::grh);
    rep.vacuous_uncond = rep.envelope_uncond >= static_cast<double>(pi_x);
    rep.vacuous_grh = rep.envelope_grh >= static_cast<double>(pi_x);
    rep.empirical_S = empirical_S(records, params.y, params.z);
    rep.empirical_T = empirical_T(records, b, params.y, params.z);
    rep.empirical_Q = empirical_Q(records, b);
    rep.prime_count = records.size();
    rep.main_term = static_cast<double>(rep.prime_count) * rep.V_y_z * rep.F_s;
    return rep;
}

/// Smallest K making V_1(z1)/V_1(z2) <= (log z2 / log z1)(1 + K / log z1) on the given pairs.
inline double fit_omega1_K(std::span<const u64> primes,
                           std::span<const std::pair<double, double>> pairs) {
    double K = 0.0;
    for (auto [z1, z2] : pairs) {
        const double ratio = V_product(primes, 1.0, z1) / V_product(primes, 1.0, z2);
        const double lz1 = std::log(z1), lz2 = std::log(z2);
        K = std::max(K, (ratio * lz1 / lz2 - 1.0) * lz1);
    }
    return K;
}

/// V_1(z) log z / (C e^-gamma), which tends to 1.
inline double mertens_ratio(std::span<const u64> primes, double z, double C) {
    return V_product(primes, 1.0, z) * std::log(z) /
           (C * static_cast<double>(1.0L / kExpEulerGamma));
}

}  // namespace eclab
