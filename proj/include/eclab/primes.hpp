#pragma once

/// Sieve of Eratosthenes over odd numbers, one-shot and segmented.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "eclab/arith.hpp"
#include "eclab/errors.hpp"

namespace eclab {

inline constexpr u64 kDefaultSegmentLen = u64{1} << 16;
inline constexpr u64 kMaxCutoff = (u64{1} << 63) - 1;

/// Primes in the half-open range [lo, hi), ascending.
struct PrimeSegment {
    u64 lo = 0;
    u64 hi = 0;
    std::vector<u64> primes;

    friend bool operator==(const PrimeSegment&, const PrimeSegment&) = default;
};

inline void check_cutoff(u64 x) {
    if (x > kMaxCutoff) throw invalid_parameter("prime cutoff exceeds 2^63 - 1");
}

/// All primes <= x, ascending.
inline std::vector<u64> primes_up_to(u64 x) {
    check_cutoff(x);
    std::vector<u64> out;
    if (x < 2) return out;
    out.push_back(2);
    // index i stands for the odd number 2i + 1
    const u64 n = (x - 1) / 2 + 1;
    std::vector<bool> composite(n, false);
    for (u64 i = 1; i < n; ++i) {
        if (composite[i]) continue;
        const u64 p = 2 * i + 1;
        out.push_back(p);
        for (u64 j = (p * p) / 2; j < n && p <= x / p; j += p) composite[j] = true;
    }
    return out;
}

/// Sieves [lo, hi) using `base` (ascending primes covering at least sqrt(hi - 1)).
inline PrimeSegment sieve_segment(u64 lo, u64 hi, std::span<const u64> base) {
    PrimeSegment seg{lo, hi, {}};
    if (hi <= lo || hi <= 2) return seg;
    if (lo <= 2) seg.primes.push_back(2);
    // odd numbers in [max(lo, 3), hi)
    u64 first = std::max<u64>(lo, 3) | 1;
    if (first >= hi) return seg;
    const u64 count = (hi - first + 1) / 2;
    std::vector<bool> composite(count, false);
    for (u64 p : base) {
        if (p == 2) continue;
        if (p > (hi - 1) / p) break;
        u64 start = std::max(p * p, (first + p - 1) / p * p);
        if ((start & 1) == 0) start += p;
        for (u64 m = start; m < hi; m += 2 * p) composite[(m - first) / 2] = true;
    }
    for (u64 i = 0; i < count; ++i) {
        if (!composite[i]) seg.primes.push_back(first + 2 * i);
    }
    return seg;
}

/// Streams the primes <= x as consecutive segments [k*len, (k+1)*len).
///
/// Holds only the base primes up to sqrt(x) plus one segment at a time.
class SegmentedPrimes {
public:
    SegmentedPrimes(u64 x, u64 segment_len = kDefaultSegmentLen)
        : x_(x), len_(segment_len) {
        if (segment_len < 2) throw invalid_parameter("segment_len must be >= 2");
        check_cutoff(x);
        base_ = primes_up_to(isqrt(x));
        if (x < 2) next_lo_ = end();
    }

    /// One past the last integer covered.
    u64 end() const { return x_ + 1; }
    u64 segment_len() const { return len_; }
    std::span<const u64> base_primes() const { return base_; }

    /// Bounds of the segment starting at `lo`; usable by concurrent producers.
    PrimeSegment segment_at(u64 lo) const {
        const u64 hi = (end() - lo > len_) ? lo + len_ : end();
        return sieve_segment(lo, hi, base_);
    }

    std::optional<PrimeSegment> next() {
        if (next_lo_ >= end()) return std::nullopt;
        PrimeSegment seg = segment_at(next_lo_);
        next_lo_ = seg.hi;
        return seg;
    }

    /// Starting points of every segment, ascending.
    std::vector<u64> segment_starts() const {
        std::vector<u64> starts;
        if (x_ < 2) return starts;
        for (u64 lo = 0; lo < end(); lo += len_) {
            starts.push_back(lo);
            if (end() - lo <= len_) break;
        }
        return starts;
    }

private:
    u64 x_;
    u64 len_;
    u64 next_lo_ = 0;
    std::vector<u64> base_;
};

/// Calls `fn(const PrimeSegment&)` for each segment of the primes <= x.
template <typename Fn>
void for_each_segment(u64 x, u64 segment_len, Fn&& fn) {
    SegmentedPrimes stream(x, segment_len);
    while (auto seg = stream.next()) fn(*seg);
}

}  // namespace eclab
