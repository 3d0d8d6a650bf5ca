#pragma once

/// Census of n_E(p) over good primes p <= x: classification, counting
/// functions, residue statistics, multiplicities and the four-class
/// decomposition of pseudoprime values.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <future>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "eclab/arith.hpp"
#include "eclab/curve.hpp"
#include "eclab/errors.hpp"
#include "eclab/galois_classes.hpp"
#include "eclab/primes.hpp"
#include "eclab/pseudoprime.hpp"

namespace eclab {

/// A trace record together with its classification at base b.
struct CensusRecord {
    TraceRecord trace;
    bool is_prime = false;
    bool is_pseudoprime = false;
    bool fermat = false;

    friend bool operator==(const CensusRecord&, const CensusRecord&) = default;
};

/// Worker count: ECLAB_THREADS when set to a positive integer, else hardware concurrency.
inline unsigned default_thread_count() {
    if (const char* env = std::getenv("ECLAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

struct CensusOptions {
    u64 segment_len = kDefaultSegmentLen;
    unsigned threads = 0;  ///< 0 = default_thread_count()
    FermatVariant variant = FermatVariant::weak;
};

struct CensusSummary {
    u64 x = 0;
    std::string curve_label;
    u64 base_b = 0;
    u64 twin = 0;        ///< n_E(p) prime
    u64 pseu = 0;        ///< n_E(p) a pseudoprime to base b
    u64 Q = 0;           ///< Fermat congruence holds at n_E(p)
    u64 unit_count = 0;  ///< n_E(p) = 1
    std::vector<u64> skipped_bad;
    std::array<u64, 4> s_classes{};
    std::map<u64, u64> multiplicity;
    u64 second_moment = 0;

    u64 good_primes = 0;
    u64 prime_fermat_failures = 0;  ///< prime n failing the congruence (strict variant with n | b)
    u64 bsgs_fallbacks = 0;
    FermatVariant variant = FermatVariant::weak;
};

struct CensusResult {
    CensusSummary summary;
    std::vector<CensusRecord> records;
};

inline CensusRecord classify_record(const TraceRecord& t, u64 b, FermatVariant variant) {
    const auto v = classify(b, t.n, variant);
    return {t, v.prime, v.pseudoprime, v.fermat};
}

namespace detail {

struct SegmentOutput {
    std::vector<CensusRecord> records;
    std::vector<u64> bad;
    u64 fallbacks = 0;
};

inline SegmentOutput census_segment(const WeierstrassCurve& curve, u64 b, FermatVariant variant,
                                    const PrimeSegment& seg) {
    SegmentOutput out;
    out.records.reserve(seg.primes.size());
    for (u64 p : seg.primes) {
        const ReducedCurve rc = reduce_mod(curve, p);
        if (!rc.good) {
            out.bad.push_back(p);
            continue;
        }
        u64 n;
        if (p < kAcceleratedThreshold) {
            n = count_points_naive(rc);
        } else {
            const auto acc = count_points_bsgs(rc);
            n = acc.n;
            out.fallbacks += acc.used_fallback ? 1 : 0;
        }
        const TraceRecord t{p, static_cast<i64>(p + 1) - static_cast<i64>(n), n};
        out.records.push_back(classify_record(t, b, variant));
    }
    return out;
}

}  // namespace detail

/// M_E(n): number of records sharing each group order n.
inline std::map<u64, u64> multiplicity_map(std::span<const TraceRecord> records) {
    std::map<u64, u64> m;
    for (const auto& r : records) ++m[r.n];
    return m;
}

inline u64 second_moment(const std::map<u64, u64>& multiplicity) {
    u64 s = 0;
    for (auto [n, c] : multiplicity) s += c * c;
    return s;
}

inline u64 second_moment(std::span<const TraceRecord> records) {
    return second_moment(multiplicity_map(records));
}

inline std::vector<TraceRecord> traces_of(std::span<const CensusRecord> records) {
    std::vector<TraceRecord> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.trace);
    return out;
}

/// Membership of one pseudoprime value n in the four (overlapping) classes
///   S1: n <= x/L
///   S2: some l | n with ord_l(b) <= L and l > L^3
///   S3: some l | n with ord_l(b) > L
///   S4: n > x/L and every l | n has l <= L^3
/// where L = L(x). Primes l dividing b have no order and are ignored by S2, S3.
struct SClassMembership {
    std::array<bool, 4> in{};
    bool covered() const { return in[0] || in[1] || in[2] || in[3]; }
};

inline SClassMembership s_class_membership(u64 n, u64 b, double x, double L) {
    SClassMembership m;
    const double nd = static_cast<double>(n);
    const double L3 = L * L * L;
    m.in[0] = nd <= x / L;
    bool all_small = true;
    for (auto [l, e] : factorize(n)) {
        const double ld = static_cast<double>(l);
        if (ld > L3) all_small = false;
        if (b % l == 0) continue;
        const double ord = static_cast<double>(mult_order(b, l));
        if (ord <= L && ld > L3) m.in[1] = true;
        if (ord > L) m.in[2] = true;
    }
    m.in[3] = nd > x / L && all_small;
    return m;
}

/// n = n' n'' with n' | b^infinity and gcd(n'', b) = 1.
inline std::pair<u64, u64> split_b_part(u64 n, u64 b) {
    u64 smooth = 1;
    for (auto [l, e] : factorize(n)) {
        if (b % l != 0) continue;
        for (int i = 0; i < e; ++i) smooth *= l;
    }
    return {smooth, n / smooth};
}

/// Some divisor d of m with lo < d <= hi.
inline bool has_divisor_in(u64 m, double lo, double hi) {
    std::vector<u64> divisors{1};
    for (auto [l, e] : factorize(m)) {
        const std::size_t size = divisors.size();
        u64 pk = 1;
        for (int i = 0; i < e; ++i) {
            pk *= l;
            for (std::size_t j = 0; j < size; ++j) divisors.push_back(divisors[j] * pk);
        }
    }
    return std::any_of(divisors.begin(), divisors.end(), [&](u64 d) {
        const double dd = static_cast<double>(d);
        return dd > lo && dd <= hi;
    });
}

struct S4Split {
    u64 s4_prime = 0;          ///< S4' : n' > x^(2/3)
    u64 s4_double_prime = 0;   ///< S4'': n' <= x^(2/3)
    u64 s4_double_prime_with_window_divisor = 0;  ///< S4'' with d | n'' in (x^(1/18), x^(1/17)]
};

inline S4Split s4_split(std::span<const u64> s4_values, u64 b, double x) {
    S4Split s;
    const double cut = std::pow(x, 2.0 / 3.0);
    const double lo = std::pow(x, 1.0 / 18.0), hi = std::pow(x, 1.0 / 17.0);
    for (u64 n : s4_values) {
        const auto [smooth, rest] = split_b_part(n, b);
        if (static_cast<double>(smooth) > cut) {
            ++s.s4_prime;
        } else {
            ++s.s4_double_prime;
            if (has_divisor_in(rest, lo, hi)) ++s.s4_double_prime_with_window_divisor;
        }
    }
    return s;
}

struct PomeranceDecomposition {
    double L = 1.0;
    bool L_clamped = false;
    std::array<u64, 4> counts{};
    std::array<std::array<u64, 4>, 4> overlap{};  ///< overlap[i][j] = |S_i and S_j|
    u64 total = 0;
    u64 uncovered = 0;
    /// Uncovered records where b > L^3, i.e. every large prime factor divides b;
    /// the classes are exhaustive only when b <= L(x)^3.
    u64 uncovered_outside_regime = 0;
    S4Split s4;
};

/// Decomposes the pseudoprime-classified records.
inline PomeranceDecomposition pomerance_decomposition(std::span<const CensusRecord> records, u64 b,
                                                      double x) {
    PomeranceDecomposition d;
    d.L = L_of(x);
    d.L_clamped = L_is_clamped(x);
    std::vector<u64> s4_values;
    for (const auto& r : records) {
        if (!r.is_pseudoprime) continue;
        ++d.total;
        const auto m = s_class_membership(r.trace.n, b, x, d.L);
        for (int i = 0; i < 4; ++i) {
            if (!m.in[i]) continue;
            ++d.counts[i];
            for (int j = 0; j < 4; ++j) d.overlap[i][j] += m.in[j] ? 1 : 0;
        }
        if (m.in[3]) s4_values.push_back(r.trace.n);
        if (!m.covered()) {
            ++d.uncovered;
            if (static_cast<double>(b) > d.L * d.L * d.L) ++d.uncovered_outside_regime;
        }
    }
    d.s4 = s4_split(s4_values, b, x);
    return d;
}

/// Runs the census over good primes p <= x. Segments are computed by up to
/// `threads` workers and merged in ascending order, so output is schedule-independent.
inline CensusResult run_census(const WeierstrassCurve& curve, u64 b, u64 x,
                               const CensusOptions& opts = {}) {
    if (curve.singular()) throw domain_error("curve '" + curve.label + "' is singular");
    if (x < 2) throw invalid_parameter("census needs x >= 2");
    if (b < 2) throw invalid_parameter("census needs b >= 2");

    const unsigned threads = opts.threads ? opts.threads : default_thread_count();
    SegmentedPrimes stream(x, opts.segment_len);
    const auto starts = stream.segment_starts();

    CensusResult result;
    auto& s = result.summary;
    s.x = x;
    s.curve_label = curve.label;
    s.base_b = b;
    s.variant = opts.variant;

    auto absorb = [&](detail::SegmentOutput&& out) {
        s.skipped_bad.insert(s.skipped_bad.end(), out.bad.begin(), out.bad.end());
        s.bsgs_fallbacks += out.fallbacks;
        result.records.insert(result.records.end(), std::make_move_iterator(out.records.begin()),
                              std::make_move_iterator(out.records.end()));
    };
    auto compute = [&](u64 lo) {
        return detail::census_segment(curve, b, opts.variant, stream.segment_at(lo));
    };

    if (threads <= 1) {
        for (u64 lo : starts) absorb(compute(lo));
    } else {
        for (std::size_t i = 0; i < starts.size(); i += threads) {
            std::vector<std::future<detail::SegmentOutput>> batch;
            for (std::size_t j = i; j < std::min(starts.size(), i + threads); ++j) {
                batch.push_back(std::async(std::launch::async, compute, starts[j]));
            }
            for (auto& f : batch) absorb(f.get());
        }
    }

    for (const auto& r : result.records) {
        if (r.trace.n == 1) {
            ++s.unit_count;
            s.Q += r.fermat ? 1 : 0;
            continue;
        }
        if (r.is_prime) {
            ++s.twin;
            if (!r.fermat) ++s.prime_fermat_failures;
        }
        if (r.is_pseudoprime) ++s.pseu;
        if (r.fermat) ++s.Q;
    }
    s.good_primes = result.records.size();
    const auto traces = traces_of(result.records);
    s.multiplicity = multiplicity_map(traces);
    s.second_moment = second_moment(s.multiplicity);
    s.s_classes = pomerance_decomposition(result.records, b, static_cast<double>(x)).counts;
    return result;
}

/// Hard invariants of a finished census; each violation is described in one line.
inline std::vector<std::string> census_violations(const CensusResult& result) {
    std::vector<std::string> v;
    const auto& s = result.summary;
    if (s.Q != s.twin - s.prime_fermat_failures + s.pseu + s.unit_count) {
        v.push_back("Q != twin + pseu + unit_count");
    }
    if (s.variant == FermatVariant::weak && s.twin > s.Q) v.push_back("twin > Q");
    u64 total = 0;
    for (auto [n, c] : s.multiplicity) total += c;
    if (total != s.good_primes) v.push_back("sum of multiplicities != good prime count");
    if (s.second_moment < total) v.push_back("second moment below first moment");
    for (const auto& r : result.records) {
        if (!hasse_holds(r.trace)) v.push_back("Hasse bound fails at p = " + std::to_string(r.trace.p));
        if (!hasse_ratio_holds(r.trace)) {
            v.push_back("n/16 <= p <= 16n fails at p = " + std::to_string(r.trace.p));
        }
        if (r.is_prime && !r.fermat && s.variant == FermatVariant::weak) {
            v.push_back("prime n fails Fermat at p = " + std::to_string(r.trace.p));
        }
    }
    bool all_ge5 = std::all_of(result.records.begin(), result.records.end(),
                               [](const CensusRecord& r) { return r.trace.p >= 5; });
    if (all_ge5 && s.unit_count != 0) v.push_back("n = 1 at a prime p >= 5");
    return v;
}

// ---------------------------------------------------------------------------
// Residue statistics

struct CongruenceStat {
    u64 modulus = 0;
    u64 residue = 0;
    u64 observed = 0;
    u64 total = 0;
    std::optional<Rational> density;
    std::optional<double> expected;
    std::optional<double> rel_err;
    std::string unavailable_reason;
};

/// Observed count of n_E(p) = r (mod n) against density * (good-prime count).
/// The density is the full-GL2 value, offered only for prime n coprime to the Serre bound.
inline CongruenceStat congruence_stats(std::span<const TraceRecord> records, u64 n, u64 r,
                                       std::optional<u64> serre_bound) {
    if (n < 2) throw invalid_parameter("modulus must be >= 2");
    CongruenceStat st;
    st.modulus = n;
    st.residue = r % n;
    st.total = records.size();
    for (const auto& rec : records) st.observed += rec.n % n == st.residue ? 1 : 0;
    if (!is_prime(n)) {
        st.unavailable_reason = "modulus is not prime";
    } else if (serre_bound && std::gcd(n, *serre_bound) != 1) {
        st.unavailable_reason = "modulus shares a factor with the Serre bound";
    } else {
        st.density = density_formula(n, st.residue);
        st.expected = boost::rational_cast<double>(*st.density) * static_cast<double>(st.total);
        if (*st.expected > 0) {
            st.rel_err = std::abs(static_cast<double>(st.observed) - *st.expected) / *st.expected;
        }
    }
    return st;
}

// ---------------------------------------------------------------------------
// Multiplicities

struct MultiplicityReport {
    std::map<u64, u64> multiplicity;
    u64 max_multiplicity = 0;
    u64 argmax_n = 0;
    u64 repeated_values = 0;  ///< n with M_E(n) >= 2
    std::optional<double> delta_hat;
    u64 trivial_bound_violations = 0;  ///< n with M_E(n) > 1 + pi(n + 9 sqrt n) - pi(n - 9 sqrt n)
};

/// Least-squares slope of log M_E(n) on log n over n with M_E(n) >= 2.
inline std::optional<double> fit_delta(const std::map<u64, u64>& multiplicity) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    u64 k = 0;
    for (auto [n, c] : multiplicity) {
        if (c < 2) continue;
        const double lx = std::log(static_cast<double>(n)), ly = std::log(static_cast<double>(c));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++k;
    }
    if (k < 2) return std::nullopt;
    const double kd = static_cast<double>(k);
    const double var = sxx - sx * sx / kd;
    if (!(var > 0)) return std::nullopt;
    return (sxy - sx * sy / kd) / var;
}

inline MultiplicityReport multiplicity_stats(std::span<const TraceRecord> records) {
    if (records.empty()) throw invalid_parameter("multiplicity_stats needs records");
    MultiplicityReport rep;
    rep.multiplicity = multiplicity_map(records);
    u64 max_n = 0;
    for (auto [n, c] : rep.multiplicity) {
        if (c > rep.max_multiplicity) {
            rep.max_multiplicity = c;
            rep.argmax_n = n;
        }
        rep.repeated_values += c >= 2 ? 1 : 0;
        max_n = std::max(max_n, n);
    }
    rep.delta_hat = fit_delta(rep.multiplicity);

    const auto primes = primes_up_to(max_n + 9 * isqrt(max_n) + 10);
    auto pi = [&](double t) -> u64 {
        if (t < 2) return 0;
        const u64 ti = static_cast<u64>(std::floor(t));
        return static_cast<u64>(std::upper_bound(primes.begin(), primes.end(), ti) - primes.begin());
    };
    for (auto [n, c] : rep.multiplicity) {
        if (c < 2) continue;
        const double w = 9.0 * std::sqrt(static_cast<double>(n));
        const double nd = static_cast<double>(n);
        if (c > 1 + pi(nd + w) - pi(nd - w)) ++rep.trivial_bound_violations;
    }
    return rep;
}

/// sum M_E(n)^2 against x / (log x)^0.9, the comparison scale for CM curves.
struct SecondMomentReport {
    u64 second_moment = 0;
    double reference = 0;
    double ratio = 0;
    bool cm = false;
};

inline SecondMomentReport second_moment_report(std::span<const TraceRecord> records, double x,
                                               bool cm) {
    SecondMomentReport r;
    r.second_moment = second_moment(records);
    r.cm = cm;
    r.reference = x / std::pow(std::log(x), 0.9);
    r.ratio = static_cast<double>(r.second_moment) / r.reference;
    return r;
}

// ---------------------------------------------------------------------------
// Record persistence: p,a_p,n,is_prime,is_pseudoprime,fermat

inline void write_record_csv_header(std::ostream& out) {
    out << "p,a_p,n,is_prime,is_pseudoprime,fermat\n";
}

inline void write_record_csv_row(std::ostream& out, const CensusRecord& r) {
    out << r.trace.p << ',' << r.trace.a_p << ',' << r.trace.n << ',' << (r.is_prime ? 1 : 0) << ','
        << (r.is_pseudoprime ? 1 : 0) << ',' << (r.fermat ? 1 : 0) << '\n';
}

inline void write_records_csv(std::ostream& out, std::span<const CensusRecord> records) {
    write_record_csv_header(out);
    for (const auto& r : records) write_record_csv_row(out, r);
}

inline std::vector<CensusRecord> read_records_csv(std::istream& in) {
    std::vector<CensusRecord> out;
    std::string line;
    if (!std::getline(in, line) || line != "p,a_p,n,is_prime,is_pseudoprime,fermat") {
        throw invalid_parameter("record CSV header mismatch");
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::array<std::string_view, 6> f;
        std::string_view rest = line;
        for (std::size_t i = 0; i < 6; ++i) {
            const auto comma = rest.find(',');
            if ((comma == std::string_view::npos) != (i == 5)) {
                throw invalid_parameter("record CSV row needs six fields: " + line);
            }
            f[i] = rest.substr(0, comma);
            if (i < 5) rest = rest.substr(comma + 1);
        }
        CensusRecord r;
        r.trace.p = detail::parse_exact_int<u64>(f[0], "p");
        r.trace.a_p = detail::parse_exact_int<i64>(f[1], "a_p");
        r.trace.n = detail::parse_exact_int<u64>(f[2], "n");
        r.is_prime = detail::parse_exact_int<int>(f[3], "is_prime") == 1;
        r.is_pseudoprime = detail::parse_exact_int<int>(f[4], "is_pseudoprime") == 1;
        r.fermat = detail::parse_exact_int<int>(f[5], "fermat") == 1;
        out.push_back(r);
    }
    return out;
}

}  // namespace eclab
