#pragma once

/// Command-line front end: argument parsing into a RunConfig and the
/// batch runner behind each subcommand.
///
/// Exit codes: 0 success, 1 invariant violation, 2 usage error, 3 I/O failure.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "eclab/census.hpp"
#include "eclab/curve.hpp"
#include "eclab/galois_classes.hpp"
#include "eclab/pseudoprime.hpp"
#include "eclab/report.hpp"
#include "eclab/sieve.hpp"

namespace eclab::cli {

enum class Command { census, verify_classes, order_stats, sieve_report, pomerance };
enum class Format { csv, json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

struct RunConfig {
    Command command = Command::census;
    std::string curve_file;
    std::string curve_label;  ///< a label, or an inline "label:a1,...,a6[,...]" line
    u64 base = 2;
    u64 x = 100000;
    std::optional<double> y;
    std::optional<double> z;
    std::string out_dir = ".";
    Format format = Format::csv;
    bool strict_fermat = false;
    u64 max_modulus = kMaxClassModulus;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline const char* command_name(Command c) {
    switch (c) {
        case Command::census: return "census";
        case Command::verify_classes: return "verify-classes";
        case Command::order_stats: return "order-stats";
        case Command::sieve_report: return "sieve-report";
        case Command::pomerance: return "pomerance";
    }
    return "?";
}

inline bool needs_curve(Command c) {
    return c == Command::census || c == Command::sieve_report || c == Command::pomerance;
}

/// Parses argv (without the program name). Returns nullopt after printing --help.
/// Throws UsageError for anything invalid.
inline std::optional<RunConfig> parse_args(const std::vector<std::string>& args,
                                           std::ostream& out = std::cout) {
    CLI::App app{"Census and exact checks for Fermat pseudoprime values of n_E(p)", "eclab"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string format = "csv";

    struct Sub {
        Command cmd;
        const char* help;
    };
    const Sub subs[] = {
        {Command::census, "census of n_E(p) for p <= x: records.csv, summary.json"},
        {Command::verify_classes, "brute-force |C_r(n)| in GL2(Z/nZ): classes.csv"},
        {Command::order_stats, "multiplicative order statistics of base b: orders.csv"},
        {Command::sieve_report, "sieve densities, envelopes and S/T counts: sieve.json"},
        {Command::pomerance, "four-class decomposition of pseudoprime values: summary.json"},
    };
    std::vector<CLI::App*> handles;
    for (const auto& s : subs) {
        CLI::App* sub = app.add_subcommand(command_name(s.cmd), s.help);
        sub->add_option("--curve", cfg.curve_label, "curve label or inline 'label:a1,a2,a3,a4,a6'");
        sub->add_option("--curve-file", cfg.curve_file, "file of curve lines");
        sub->add_option("--base", cfg.base, "Fermat base b >= 2");
        sub->add_option("--x", cfg.x, "cutoff x >= 2");
        sub->add_option("--y", cfg.y, "sieve range start");
        sub->add_option("--z", cfg.z, "sieve range end");
        sub->add_option("--out,--out-dir", cfg.out_dir, "output directory");
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_flag("--strict-fermat,--strict_fermat", cfg.strict_fermat, "use gcd(b,n)=1 and b^(n-1) = 1 (mod n)");
        sub->add_option("--max-modulus", cfg.max_modulus, "largest modulus for verify-classes");
        handles.push_back(sub);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::Success&) {
        out << app.help();
        for (auto* h : handles) {
            if (h->parsed()) out << h->help();
        }
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    for (std::size_t i = 0; i < handles.size(); ++i) {
        if (handles[i]->parsed()) cfg.command = subs[i].cmd;
    }
    cfg.format = format == "json" ? Format::json : Format::csv;

    if (cfg.x < 2) throw UsageError("--x must be >= 2");
    if (cfg.base < 2) throw UsageError("--base must be >= 2");
    if (cfg.y && cfg.z && !(*cfg.y < *cfg.z)) throw UsageError("--y must be smaller than --z");
    if (cfg.y.has_value() != cfg.z.has_value()) throw UsageError("--y and --z go together");
    if (cfg.y && *cfg.y < 1.0) throw UsageError("--y must be >= 1");
    if (needs_curve(cfg.command) && cfg.curve_label.empty()) {
        throw UsageError(std::string(command_name(cfg.command)) + " needs --curve");
    }
    if (cfg.max_modulus < 2 || cfg.max_modulus > kMaxClassModulus) {
        throw UsageError("--max-modulus must lie in [2, 64]");
    }
    return cfg;
}

/// Inline curve line, else a label from --curve-file, else from the built-in list.
inline WeierstrassCurve resolve_curve(const RunConfig& cfg) {
    if (cfg.curve_label.find(':') != std::string::npos) {
        try {
            return parse_curve_line(cfg.curve_label);
        } catch (const invalid_parameter& e) {
            throw UsageError(e.what());
        }
    }
    std::vector<WeierstrassCurve> pool;
    if (!cfg.curve_file.empty()) {
        std::ifstream in(cfg.curve_file);
        if (!in) throw IoError("cannot open curve file " + cfg.curve_file);
        try {
            pool = parse_curve_file(in);
        } catch (const invalid_parameter& e) {
            throw UsageError(e.what());
        }
    } else {
        pool = builtin_curves();
    }
    if (auto c = find_curve(pool, cfg.curve_label)) return *c;
    throw UsageError("unknown curve label '" + cfg.curve_label + "'");
}

namespace detail {

inline std::filesystem::path prepare_out_dir(const RunConfig& cfg) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("cannot create " + cfg.out_dir + ": " + ec.message());
    return cfg.out_dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

inline Json curve_json(const WeierstrassCurve& c) {
    Json j;
    j["label"] = c.label;
    j["coefficients"] = c.a;
    j["discriminant"] = c.disc.str();
    j["cm_flag"] = c.cm_flag;
    j["serre_bound"] = c.serre_bound ? Json(*c.serre_bound) : Json(nullptr);
    return j;
}

inline CensusResult census_for(const RunConfig& cfg, const WeierstrassCurve& curve) {
    CensusOptions opts;
    opts.variant = cfg.strict_fermat ? FermatVariant::strict : FermatVariant::weak;
    return run_census(curve, cfg.base, cfg.x, opts);
}

inline Json census_metadata(const RunConfig& cfg, const WeierstrassCurve& curve,
                            const CensusResult& res) {
    const double x = static_cast<double>(cfg.x);
    Json m;
    m["command"] = command_name(cfg.command);
    m["curve"] = curve_json(curve);
    m["fermat_variant"] = cfg.strict_fermat ? "strict: gcd(b,n)=1 and b^(n-1)=1 mod n"
                                            : "weak: b^n=b mod n";
    m["good_primes"] = res.summary.good_primes;
    m["prime_fermat_failures"] = res.summary.prime_fermat_failures;
    m["bsgs_fallbacks"] = res.summary.bsgs_fallbacks;
    m["L_x"] = L_of(x);
    m["L_clamped"] = L_is_clamped(x);
    if (L_is_clamped(x)) m["L_note"] = "x <= e^e: L(x) clamped to 1 in the class definitions";
    m["pseu_over_twin"] = res.summary.twin
                              ? Json(static_cast<double>(res.summary.pseu) / res.summary.twin)
                              : Json(nullptr);
    return m;
}

inline Json census_document(const RunConfig& cfg, const WeierstrassCurve& curve,
                            const CensusResult& res, const PomeranceDecomposition& decomp,
                            const std::vector<std::string>& violations) {
    Json doc = to_json(res.summary);
    doc["metadata"] = census_metadata(cfg, curve, res);
    const auto traces = traces_of(res.records);
    Json cong = Json::array();
    for (u64 l : {3, 5, 7}) {
        for (u64 r = 0; r < l; ++r) cong.push_back(to_json(congruence_stats(traces, l, r, curve.serre_bound)));
    }
    doc["congruence"] = std::move(cong);
    if (!traces.empty()) doc["multiplicity_report"] = to_json(multiplicity_stats(traces));
    doc["second_moment_report"] =
        to_json(second_moment_report(traces, static_cast<double>(cfg.x), curve.cm_flag));
    doc["pomerance"] = to_json(decomp);
    doc["violations"] = violations;
    return doc;
}

inline int run_census_like(const RunConfig& cfg, std::ostream& log, bool write_records) {
    const WeierstrassCurve curve = resolve_curve(cfg);
    CensusResult res;
    try {
        res = census_for(cfg, curve);
    } catch (const domain_error& e) {
        log << "error: " << e.what() << '\n';
        return kExitInvariant;
    }
    const auto dir = prepare_out_dir(cfg);
    auto violations = census_violations(res);
    const auto decomp = pomerance_decomposition(res.records, cfg.base, static_cast<double>(cfg.x));
    if (decomp.uncovered > decomp.uncovered_outside_regime) {
        violations.push_back("pseudoprime record outside all four classes");
    }
    if (write_records) {
        std::ostringstream csv;
        write_records_csv(csv, res.records);
        write_file(dir / "records.csv", csv.str());
    }
    Json doc = census_document(cfg, curve, res, decomp, violations);
    if (cfg.command == Command::pomerance) {
        Json reports = Json::array();
        const u64 t = std::max<u64>(2, static_cast<u64>(std::pow(static_cast<double>(cfg.x), 1.0 / 17.0)));
        for (u64 m = 1; m <= 12; ++m) reports.push_back(to_json(pomerance_report(cfg.base, t, m)));
        doc["order_count_reports"] = std::move(reports);
    }
    write_file(dir / "summary.json", doc.dump(2) + "\n");

    const auto& s = res.summary;
    log << command_name(cfg.command) << ' ' << curve.label << " b=" << cfg.base << " x=" << cfg.x
        << ": good=" << s.good_primes << " twin=" << s.twin << " pseu=" << s.pseu << " Q=" << s.Q
        << " unit=" << s.unit_count << " S=[" << s.s_classes[0] << ',' << s.s_classes[1] << ','
        << s.s_classes[2] << ',' << s.s_classes[3] << "]\n";
    for (const auto& v : violations) log << "violation: " << v << '\n';
    return violations.empty() ? kExitOk : kExitInvariant;
}

inline int run_verify_classes(const RunConfig& cfg, std::ostream& log) {
    const auto dir = prepare_out_dir(cfg);
    std::vector<ClassRow> rows;
    std::vector<ClassCountTable> tables(cfg.max_modulus + 1);
    int failures = 0;
    for (u64 n = 2; n <= cfg.max_modulus; ++n) {
        tables[n] = class_counts_bruteforce(n);
        if (tables[n].total() != tables[n].group_order) {
            log << "partition fails at n = " << n << '\n';
            ++failures;
        }
        for (auto& row : class_rows(tables[n])) rows.push_back(row);
    }
    for (const auto& row : rows) {
        if (row.formula_count && !row.match()) {
            log << "closed form mismatch at n = " << row.modulus << ", r = " << row.r << '\n';
            ++failures;
        }
    }
    // prime powers: lifting law and ratio bounds
    u64 identity_bound_exceeded = 0;
    for (u64 l = 2; l <= cfg.max_modulus; ++l) {
        if (!is_prime(l)) continue;
        unsigned k = 1;
        for (u64 q = l; q <= cfg.max_modulus; q *= l, ++k) {
            for (u64 r = 0; r < q; ++r) {
                if (l > 2) {
                    const auto rb = ratio_bounds_check(l, k, r, tables[q]);
                    if (!rb.pass) {
                        log << "ratio bound fails at l^k = " << q << ", r = " << r << '\n';
                        ++failures;
                    }
                }
                if (k < 2) continue;
                const auto lift = lifting_check(l, k, r, tables[q], tables[l]);
                if (!lift.law_holds) {
                    log << "lifting law fails at l^k = " << q << ", r = " << r << '\n';
                    ++failures;
                }
                if (!lift.identity_bound_holds) {
                    ++identity_bound_exceeded;
                    log << "note: identity lifts " << *lift.identity_lifts << " exceed "
                        << rational_string(*lift.identity_bound) << " at l^k = " << q
                        << ", r = " << r << '\n';
                }
            }
        }
    }
    if (cfg.format == Format::json) {
        Json arr = Json::array();
        for (const auto& row : rows) {
            if (!row.formula_count) continue;
            arr.push_back({{"modulus", row.modulus}, {"r", row.r}, {"count", row.count},
                           {"formula_count", *row.formula_count}, {"match", row.match() ? 1 : 0}});
        }
        write_file(dir / "classes.json", arr.dump(2) + "\n");
    } else {
        std::ostringstream csv;
        write_class_csv(csv, rows);
        write_file(dir / "classes.csv", csv.str());
    }
    log << "verify-classes: moduli 2.." << cfg.max_modulus << ", " << failures << " failures, "
        << identity_bound_exceeded << " identity-lift bound notes\n";
    return failures == 0 ? kExitOk : kExitInvariant;
}

inline int run_order_stats(const RunConfig& cfg, std::ostream& log) {
    const auto dir = prepare_out_dir(cfg);
    const OrderTable table(cfg.base, cfg.x);
    const auto counts = order_census(table, cfg.x);
    int failures = 0;
    Json rows = Json::array();
    std::ostringstream csv;
    csv << "m,count,bound,within_bound\n";
    for (auto [m, c] : counts) {
        const double bound = order_count_bound(cfg.base, m);
        const bool ok = static_cast<double>(c) <= bound;
        failures += ok ? 0 : 1;
        csv << m << ',' << c << ',' << bound << ',' << (ok ? 1 : 0) << '\n';
        rows.push_back({{"m", m}, {"count", c}, {"bound", bound}, {"within_bound", ok}});
    }
    Json tails = Json::array();
    for (u64 t = 10; t <= cfg.x; t *= 10) {
        const double ts = tail_sum(table, static_cast<double>(t), cfg.x);
        const double ps = product_tail_sum(table, static_cast<double>(t), cfg.x);
        tails.push_back({{"t", t}, {"tail_sum", ts}, {"tail_sum_sqrt_t", ts * std::sqrt(t)},
                         {"product_tail_sum", ps}, {"product_tail_sum_cbrt_t", ps * std::cbrt(t)}});
        log << "t=" << t << " tail_sum*sqrt(t)=" << ts * std::sqrt(t)
            << " product_tail_sum*t^(1/3)=" << ps * std::cbrt(t) << '\n';
    }
    if (cfg.format == Format::json) {
        Json doc;
        doc["base"] = cfg.base;
        doc["t"] = cfg.x;
        doc["skipped_primes"] = std::vector<u64>(table.skipped().begin(), table.skipped().end());
        doc["orders"] = std::move(rows);
        doc["tail_sums"] = std::move(tails);
        write_file(dir / "orders.json", doc.dump(2) + "\n");
    } else {
        write_file(dir / "orders.csv", csv.str());
    }
    for (u64 l : table.skipped()) log << "skipped prime " << l << " (divides the base)\n";
    log << "order-stats: " << counts.size() << " distinct orders, " << failures << " bound failures\n";
    return failures == 0 ? kExitOk : kExitInvariant;
}

inline int run_sieve_report(const RunConfig& cfg, std::ostream& log) {
    const WeierstrassCurve curve = resolve_curve(cfg);
    CensusResult res;
    try {
        res = census_for(cfg, curve);
    } catch (const domain_error& e) {
        log << "error: " << e.what() << '\n';
        return kExitInvariant;
    }
    const double x = static_cast<double>(cfg.x);
    if (!(x > std::exp(std::exp(1.0)))) {
        log << "error: sieve-report needs x > e^e\n";
        return kExitInvariant;
    }
    const auto dir = prepare_out_dir(cfg);
    const auto traces = traces_of(res.records);
    const u64 pi_x = primes_up_to(cfg.x).size();

    std::vector<SieveParams> presets = {preset_params(x, BoundMode::unconditional),
                                        preset_params(x, BoundMode::grh)};
    SieveParams primary = presets.front();
    if (cfg.y) primary = SieveParams{*cfg.y, *cfg.z, false, "custom"};

    int failures = 0;
    auto check = [&](const SieveReport& r) {
        if (!r.q_within_s_plus_t()) {
            log << "violation: Q > S + T at y=" << r.y << " z=" << r.z << '\n';
            ++failures;
        }
    };
    const SieveReport main = sieve_report(traces, cfg.base, x, primary, pi_x);
    check(main);
    Json doc = to_json(main);
    Json extra = Json::array();
    for (const auto& p : presets) {
        const auto r = sieve_report(traces, cfg.base, x, p, pi_x);
        check(r);
        extra.push_back(to_json(r));
    }
    doc["presets"] = std::move(extra);
    doc["pi_x"] = pi_x;
    doc["curve"] = curve_json(curve);
    write_file(dir / "sieve.json", doc.dump(2) + "\n");
    log << "sieve-report: y=" << main.y << " z=" << main.z << " S=" << main.empirical_S
        << " T=" << main.empirical_T << " Q=" << main.empirical_Q
        << (main.vacuous_uncond ? " (unconditional envelope vacuous)" : "") << '\n';
    return failures == 0 ? kExitOk : kExitInvariant;
}

}  // namespace detail

inline int run(const RunConfig& cfg, std::ostream& log = std::cerr) {
    try {
        switch (cfg.command) {
            case Command::census:
            case Command::pomerance:
                return detail::run_census_like(cfg, log, cfg.command == Command::census);
            case Command::verify_classes: return detail::run_verify_classes(cfg, log);
            case Command::order_stats: return detail::run_order_stats(cfg, log);
            case Command::sieve_report: return detail::run_sieve_report(cfg, log);
        }
    } catch (const UsageError& e) {
        log << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError& e) {
        log << "I/O error: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitUsage;
}

inline int main_entry(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::optional<RunConfig> cfg;
    try {
        cfg = parse_args(args);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\nrun 'eclab --help' for usage\n";
        return kExitUsage;
    }
    if (!cfg) return kExitOk;
    return run(*cfg);
}

}  // namespace eclab::cli
