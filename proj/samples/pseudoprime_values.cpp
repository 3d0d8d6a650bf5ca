// Lists the p <= x for which n_E(p) is a base-2 Fermat pseudoprime.
#include <cstdlib>
#include <iostream>

#include "eclab/census.hpp"

int main(int argc, char** argv) {
    const eclab::u64 x = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 100000;
    const auto curve = *eclab::find_curve(eclab::builtin_curves(), "37a");
    const auto result = eclab::run_census(curve, 2, x, {});
    for (const auto& r : result.records) {
        if (r.is_pseudoprime) std::cout << r.trace.p << ' ' << r.trace.n << '\n';
    }
    std::cout << "Q=" << result.summary.Q << " pseu=" << result.summary.pseu
              << " twin=" << result.summary.twin << '\n';
}
