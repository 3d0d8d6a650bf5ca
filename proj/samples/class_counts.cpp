// |C_r(l)| by enumeration next to the closed form, for a few small primes.
#include <iostream>

#include "eclab/galois_classes.hpp"

int main() {
    for (eclab::u64 l : {2, 3, 5, 7}) {
        const auto table = eclab::class_counts_bruteforce(l);
        for (eclab::u64 r = 0; r < l; ++r) {
            std::cout << "l=" << l << " r=" << r << " count=" << table.counts[r]
                      << " formula=" << eclab::class_count_formula(l, r) << '\n';
        }
    }
}
