#pragma once

/// JSON views of the census and sieve results (nlohmann::ordered_json, so
/// field order is the declaration order and output is byte-stable).

#include <string>

#include "json.hpp"

#include "eclab/census.hpp"
#include "eclab/galois_classes.hpp"
#include "eclab/pseudoprime.hpp"
#include "eclab/sieve.hpp"

namespace eclab {

using Json = nlohmann::ordered_json;

inline std::string rational_string(const Rational& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline Json to_json(const CensusSummary& s) {
    Json j;
    j["x"] = s.x;
    j["curve_label"] = s.curve_label;
    j["base_b"] = s.base_b;
    j["twin"] = s.twin;
    j["pseu"] = s.pseu;
    j["Q"] = s.Q;
    j["unit_count"] = s.unit_count;
    j["skipped_bad"] = s.skipped_bad;
    j["s_classes"] = s.s_classes;
    // keys are sorted and distinct
    Json mult = Json::object();
    auto& entries = static_cast<Json::object_t::Container&>(mult.get_ref<Json::object_t&>());
    entries.reserve(s.multiplicity.size());
    for (auto [n, c] : s.multiplicity) entries.emplace_back(std::to_string(n), Json(c));
    j["multiplicity"] = std::move(mult);
    j["second_moment"] = s.second_moment;
    return j;
}

inline Json to_json(const CongruenceStat& st) {
    Json j;
    j["modulus"] = st.modulus;
    j["residue"] = st.residue;
    j["observed"] = st.observed;
    j["total"] = st.total;
    if (st.density) {
        j["density"] = rational_string(*st.density);
        j["expected"] = *st.expected;
        j["rel_err"] = st.rel_err ? Json(*st.rel_err) : Json(nullptr);
    } else {
        j["density"] = nullptr;
        j["unavailable"] = st.unavailable_reason;
    }
    return j;
}

inline Json to_json(const MultiplicityReport& r) {
    Json j;
    j["max_multiplicity"] = r.max_multiplicity;
    j["argmax_n"] = r.argmax_n;
    j["repeated_values"] = r.repeated_values;
    j["delta_hat"] = r.delta_hat ? Json(*r.delta_hat) : Json(nullptr);
    j["delta_hat_note"] = r.delta_hat ? "finite-x least-squares proxy"
                                      : "undefined: fewer than two values with M_E(n) >= 2";
    j["trivial_bound_violations"] = r.trivial_bound_violations;
    return j;
}

inline Json to_json(const SecondMomentReport& r) {
    Json j;
    j["second_moment"] = r.second_moment;
    j["reference_x_over_logx_0.9"] = r.reference;
    j["ratio"] = r.ratio;
    j["cm"] = r.cm;
    j["note"] = r.cm ? "diagnostic comparison for a CM curve" : "non-CM curve: reported only";
    return j;
}

inline Json to_json(const PomeranceDecomposition& d) {
    Json j;
    j["L"] = d.L;
    j["L_clamped"] = d.L_clamped;
    j["pseudoprime_records"] = d.total;
    j["s_classes"] = d.counts;
    j["overlap"] = d.overlap;
    j["uncovered"] = d.uncovered;
    j["uncovered_outside_regime"] = d.uncovered_outside_regime;
    j["s4_prime"] = d.s4.s4_prime;
    j["s4_double_prime"] = d.s4.s4_double_prime;
    j["s4_double_prime_with_window_divisor"] = d.s4.s4_double_prime_with_window_divisor;
    return j;
}

inline Json to_json(const PomeranceReport& r) {
    Json j;
    j["b"] = r.b;
    j["t"] = r.t;
    j["m"] = r.m;
    j["count"] = r.count;
    j["bound_t_over_sqrt_L"] = r.bound;
    j["within_bound"] = r.within_bound;
    j["L_clamped"] = r.L_clamped;
    return j;
}

inline Json to_json(const SieveReport& r) {
    Json j;
    j["x"] = r.x;
    j["y"] = r.y;
    j["z"] = r.z;
    j["V_y_z"] = r.V_y_z;
    j["F_s"] = r.F_s;
    j["envelope_uncond"] = r.envelope_uncond;
    j["envelope_grh"] = r.envelope_grh;
    j["empirical_S"] = r.empirical_S;
    j["empirical_T"] = r.empirical_T;
    j["empirical_Q"] = r.empirical_Q;
    j["s"] = r.s;
    j["prime_count"] = r.prime_count;
    j["main_term"] = r.main_term;
    j["vacuous_uncond"] = r.vacuous_uncond;
    j["vacuous_grh"] = r.vacuous_grh;
    j["degenerate"] = r.degenerate;
    j["preset"] = r.preset;
    return j;
}

}  // namespace eclab
