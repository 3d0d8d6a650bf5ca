// Prints p, a_p and n_E(p) for the first good primes of a curve.
#include <iostream>

#include "eclab/curve.hpp"
#include "eclab/primes.hpp"

int main(int argc, char** argv) {
    const char* label = argc > 1 ? argv[1] : "37a";
    const auto curve = eclab::find_curve(eclab::builtin_curves(), label);
    if (!curve) {
        std::cerr << "unknown curve " << label << '\n';
        return 2;
    }
    std::cout << "p\ta_p\tn\n";
    for (eclab::u64 p : eclab::primes_up_to(100)) {
        if (!curve->good_at(p)) continue;
        const auto t = eclab::trace_record(*curve, p);
        std::cout << t.p << '\t' << t.a_p << '\t' << t.n << '\n';
    }
}
