#pragma once

#include <CLI11.hpp>

#include "su3cg/closed_forms.hpp"
#include "su3cg/batch.hpp"
#include "su3cg/symmetry.hpp"
#include "su3cg/verification.hpp"

namespace su3cg::cli {

// All CLI angular momenta are doubled integers (2j, 2m); state labels are
// occupation triples plus doubled su(2) label, so every argument is an int.

namespace detail {

inline HalfInt h(int tw) { return HalfInt::from_twice(tw); }

inline StateLabel parse_state(IrrepLabel r, const std::vector<int>& v) {
    if (v.size() != 4) throw OutOfRange("state wants 4 integers: nu1 nu2 nu3 2I");
    StateLabel s{r, {v[0], v[1], v[2]}, h(v[3])};
    if (!s.valid()) throw OutOfRange("invalid state " + s.to_string());
    return s;
}

inline std::string render(const ExactReal& v, const std::string& format) {
    if (format == "latex") return v.to_latex();
    if (format == "decimal") return v.to_decimal() + "  # decimal display only";
    if (format == "json") return v.to_json();
    return v.to_string();
}

inline Perm parse_perm(const std::string& name) {
    if (name == "p12") return Perm::p12;
    if (name == "p13") return Perm::p13;
    if (name == "p23") return Perm::p23;
    if (name == "p123") return Perm::p123;
    if (name == "p132") return Perm::p132;
    if (name == "e" || name == "identity") return Perm::identity;
    throw OutOfRange("unknown permutation " + name);
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    using detail::h;
    CLI::App app{"Exact SU(3) Clebsch-Gordan engine"};
    app.require_subcommand(1);
    app.fallthrough();
    int threads = 0;
    long cache_mb = 0;
    app.add_option("--threads", threads, "batch parallelism (default: all cores)");
    app.add_option("--cache-mb", cache_mb, "memo cache cap in MiB (overrides SU3CG_CACHE_MB)");

    // ---- su2 cg|6j|9j ----
    auto* su2 = app.add_subcommand("su2", "exact su(2) coupling coefficients");
    su2->require_subcommand(1);
    su2->fallthrough();
    std::vector<int> su2_args;
    bool su2_json = false;
    su2->add_flag("--json", su2_json, "term-form JSON instead of canonical text");
    auto* su2cg = su2->add_subcommand("cg", "<2j1 2m1 2j2 2m2 2J 2M>");
    su2cg->add_option("args", su2_args)->expected(6);
    auto* su26j = su2->add_subcommand("6j", "<2j1..2j6>");
    su26j->add_option("args", su2_args)->expected(6);
    auto* su29j = su2->add_subcommand("9j", "<2j1..2j9>");
    su29j->add_option("args", su2_args)->expected(9);

    // ---- decompose ----
    auto* dec = app.add_subcommand("decompose", "tensor product decomposition");
    std::vector<int> dec_args;
    bool dec_json = false, dec_csv = false, dec_count = false;
    dec->add_option("labels", dec_args, "P1 Q1 L M")->expected(4);
    dec->add_flag("--json", dec_json);
    dec->add_flag("--csv", dec_csv);
    dec->add_flag("--count", dec_count, "print only the number of entries");

    // ---- hw ----
    auto* hw = app.add_subcommand("hw", "highest-weight reduced CGs");
    std::vector<int> hw_args;
    int hw_rho = 1;
    bool hw_json = false;
    hw->add_option("labels", hw_args, "P1 Q1 L M P2 Q2")->expected(6);
    hw->add_option("--rho", hw_rho, "multiplicity copy (1-based)");
    hw->add_flag("--json", hw_json);

    // ---- rme ----
    auto* rme = app.add_subcommand("rme", "reduced matrix elements of T^k");
    std::vector<int> rme_irrep;
    int rme_p = 0, rme_J = -1, rme_k = -1, rme_Jp = -1;
    rme->add_option("labels", rme_irrep, "L M")->expected(2);
    rme->add_option("--p", rme_p, "layers below the highest weight")->required();
    rme->add_option("--J", rme_J, "2J of the source multiplet")->required();
    rme->add_option("--k", rme_k, "2k tensor rank (with --Jp)");
    rme->add_option("--Jp", rme_Jp, "2J' of the target multiplet");

    // ---- cg ----
    auto* cg = app.add_subcommand("cg", "SU(3) Clebsch-Gordan coefficients");
    std::vector<int> cg_labels, cg_state, cg_bra1, cg_bra2;
    int cg_rho = 1;
    bool cg_all = false;
    std::string cg_format = "exact";
    cg->add_option("labels", cg_labels, "P1 Q1 L M P2 Q2")->expected(6);
    cg->add_option("--rho", cg_rho);
    cg->add_option("--state", cg_state, "target: nu1 nu2 nu3 2I")->expected(4);
    cg->add_option("--bra1", cg_bra1, "left factor state: nu1 nu2 nu3 2J")->expected(4);
    cg->add_option("--bra2", cg_bra2, "right factor state: nu1 nu2 nu3 2I")->expected(4);
    cg->add_flag("--all", cg_all, "stream the full reduced table");
    cg->add_option("--format", cg_format)
        ->check(CLI::IsMember({"exact", "latex", "decimal", "csv", "json"}));

    // ---- weyl-check ----
    auto* weyl = app.add_subcommand("weyl-check", "Weyl reflection expansion of one CG");
    std::vector<int> w_labels, w_state, w_bra1, w_bra2;
    std::string w_perm = "p12";
    int w_rho = 1;
    weyl->add_option("labels", w_labels, "P1 Q1 L M P2 Q2")->expected(6);
    weyl->add_option("--state", w_state)->expected(4)->required();
    weyl->add_option("--bra1", w_bra1)->expected(4)->required();
    weyl->add_option("--bra2", w_bra2)->expected(4)->required();
    weyl->add_option("--perm", w_perm, "p12|p13|p23|p123|p132");
    weyl->add_option("--rho", w_rho);

    // ---- appb ----
    auto* appb = app.add_subcommand("appb", "(lambda,0)x(0,lambda)->(s,s) closed forms");
    int ab_lambda = 0, ab_sigma = 0;
    std::vector<int> ab_state;
    appb->add_option("--lambda", ab_lambda)->required();
    appb->add_option("--sigma", ab_sigma)->required();
    appb->add_option("--state", ab_state, "target: nu1 nu2 nu3 2I")->expected(4);

    // ---- oracle-check ----
    auto* oracle = app.add_subcommand("oracle-check", "engine vs Fock-space projections");
    std::vector<int> or_labels;
    long or_cap = 100;
    oracle->add_option("labels", or_labels, "P1 Q1 L M (default: all products in cap)")
        ->expected(4);
    oracle->add_option("--max-dim", or_cap, "cap on dim(a)*dim(b)");

    // ---- batch / bench ----
    auto* batch = app.add_subcommand("batch", "reduced-CG family across a decomposition");
    std::vector<int> b_labels, b_family, b_ks;
    bool b_json = false, b_timing = false;
    batch->add_option("labels", b_labels, "P1 Q1 L M")->expected(4);
    batch->add_option("--family", b_family, "nu1p 2Jp n1p 2Inp 2Ibar")->expected(5)->required();
    batch->add_option("--k", b_ks, "restrict to these grades");
    batch->add_flag("--json", b_json);
    batch->add_flag("--timing", b_timing, "append the timing footer");

    auto* bench = app.add_subcommand("bench", "the (75,60)x(53,0) desk-scale benchmark");
    std::vector<int> bench_ks{15, 33};
    bool bench_json = false, bench_no_timing = false, bench_all = false;
    bench->add_option("--k", bench_ks, "sub-family grades (default 15 33)");
    bench->add_flag("--all-k", bench_all, "run every grade");
    bench->add_flag("--json", bench_json);
    bench->add_flag("--no-timing", bench_no_timing, "suppress the timing footer");

    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return 0;
        }
        err << e.what() << "\n";
        return 2;
    }

    if (cache_mb > 0) set_cache_limit_mb(cache_mb);

    try {
        if (su2->parsed()) {
            ExactReal v;
            if (su2cg->parsed())
                v = clebsch_gordan(h(su2_args[0]), h(su2_args[1]), h(su2_args[2]),
                                   h(su2_args[3]), h(su2_args[4]), h(su2_args[5]));
            else if (su26j->parsed())
                v = wigner_6j(h(su2_args[0]), h(su2_args[1]), h(su2_args[2]), h(su2_args[3]),
                              h(su2_args[4]), h(su2_args[5]));
            else
                v = wigner_9j(h(su2_args[0]), h(su2_args[1]), h(su2_args[2]), h(su2_args[3]),
                              h(su2_args[4]), h(su2_args[5]), h(su2_args[6]), h(su2_args[7]),
                              h(su2_args[8]));
            out << (su2_json ? v.to_json() : v.to_string()) << "\n";
        } else if (dec->parsed()) {
            auto entries =
                decompose_product({dec_args[0], dec_args[1]}, {dec_args[2], dec_args[3]});
            if (dec_count) {
                out << entries.size() << "\n";
            } else if (dec_json) {
                out << "[";
                for (size_t i = 0; i < entries.size(); ++i)
                    out << (i ? "," : "") << "\n  {\"p\": " << entries[i].irrep.lambda
                        << ", \"q\": " << entries[i].irrep.mu
                        << ", \"mult\": " << entries[i].multiplicity
                        << ", \"k\": " << entries[i].grade_k << "}";
                out << "\n]\n";
            } else {
                if (dec_csv) out << "p,q,mult,k\n";
                for (const auto& e : entries)
                    out << e.irrep.lambda << ',' << e.irrep.mu << ',' << e.multiplicity << ','
                        << e.grade_k << "\n";
            }
        } else if (hw->parsed()) {
            CouplingQuery q{{hw_args[0], hw_args[1]},
                            {hw_args[2], hw_args[3]},
                            {hw_args[4], hw_args[5]},
                            hw_rho};
            HwVector v = solve_hw(q);
            if (hw_json) {
                out << "{\"convention\": \""
                    << (v.convention == HwConvention::unique        ? "unique"
                        : v.convention == HwConvention::tabulated   ? "tabulated"
                                                                    : "lexicographic")
                    << "\", \"entries\": [";
                bool first = true;
                for (const auto& [key, val] : v.entries) {
                    out << (first ? "" : ",") << "\n  {\"nu1\": " << key.nu1
                        << ", \"2J\": " << key.J.tw << ", \"n1\": " << key.n1
                        << ", \"2In\": " << key.In.tw << ", \"value\": \"" << val.to_string()
                        << "\"}";
                    first = false;
                }
                out << "\n]}\n";
            } else {
                for (const auto& [key, val] : v.entries)
                    out << key.to_string() << " " << val.to_string() << "\n";
            }
        } else if (rme->parsed()) {
            IrrepLabel r{rme_irrep[0], rme_irrep[1]};
            ExactReal v = (rme_k >= 0 && rme_Jp >= 0)
                              ? rme_general(r, rme_p, h(rme_k), h(rme_J), h(rme_Jp))
                              : rme_from_hw(r, rme_p, h(rme_J));
            out << v.to_string() << "\n";
        } else if (cg->parsed()) {
            CouplingQuery q{{cg_labels[0], cg_labels[1]},
                            {cg_labels[2], cg_labels[3]},
                            {cg_labels[4], cg_labels[5]},
                            cg_rho};
            HwVector v = solve_hw(q);
            if (cg_all || cg_state.empty() || cg_bra1.empty() || cg_bra2.empty()) {
                // stream the reduced table (all targets, or one --state slice)
                bool csv = cg_format == "csv";
                bool json = cg_format == "json";
                if (csv) out << "nu1p,2Jp,n1p,2Inp,nbar1,2Ibar,value_exact,value_decimal\n";
                if (json) out << "[";
                bool first = true;
                auto emit = [&](int nbar1, HalfInt Ibar) {
                    for (const auto& [key, val] : reduced_cg_slice(v, nbar1, Ibar)) {
                        if (csv)
                            out << key.nu1p << ',' << key.Jp.tw << ',' << key.n1p << ','
                                << key.Inp.tw << ',' << nbar1 << ',' << Ibar.tw << ','
                                << val.to_string() << ',' << val.to_decimal() << "\n";
                        else if (json) {
                            out << (first ? "" : ",") << "\n  {\"nu1p\": " << key.nu1p
                                << ", \"2Jp\": " << key.Jp.tw << ", \"n1p\": " << key.n1p
                                << ", \"2Inp\": " << key.Inp.tw << ", \"nbar1\": " << nbar1
                                << ", \"2Ibar\": " << Ibar.tw << ", \"value\": \""
                                << val.to_string() << "\"}";
                            first = false;
                        } else {
                            out << "(" << key.nu1p << "," << key.Jp.tw << "," << key.n1p
                                << "," << key.Inp.tw << ") -> (" << nbar1 << "," << Ibar.tw
                                << ")  "
                                << detail::render(val, cg_format) << "\n";
                        }
                    }
                };
                if (!cg_state.empty() && !cg_all) {
                    StateLabel t = detail::parse_state(q.target, cg_state);
                    emit(t.nu[0], t.I);
                } else {
                    for (int nbar1 = q.target.lambda + q.target.mu; nbar1 >= 0; --nbar1)
                        for (HalfInt Ibar : multiplet_spins(q.target, nbar1))
                            emit(nbar1, Ibar);
                }
                if (json) out << "\n]\n";
            } else {
                StateLabel t = detail::parse_state(q.target, cg_state);
                StateLabel b1 = detail::parse_state(q.left, cg_bra1);
                StateLabel b2 = detail::parse_state(q.right, cg_bra2);
                FullCG res = full_cg_from_hw(v, b1, b2, t);
                out << detail::render(res.value, cg_format) << "\n";
                if (!res.weight_ok)
                    err << "note: occupation balance fails; coefficient is a hard zero\n";
            }
        } else if (weyl->parsed()) {
            CouplingQuery q{{w_labels[0], w_labels[1]},
                            {w_labels[2], w_labels[3]},
                            {w_labels[4], w_labels[5]},
                            w_rho};
            StateLabel t = detail::parse_state(q.target, w_state);
            StateLabel b1 = detail::parse_state(q.left, w_bra1);
            StateLabel b2 = detail::parse_state(q.right, w_bra2);
            Perm p = detail::parse_perm(w_perm);
            HwVector v = solve_hw(q);
            ExactReal direct = full_cg_from_hw(v, b1, b2, t).value;
            ExactReal sum;
            for (const auto& term : weyl_relate(q, p, b1, b2, t)) {
                ExactReal cgv = full_cg_from_hw(v, term.bra1, term.bra2, term.target).value;
                sum += term.coeff * cgv;
                out << term.coeff.to_string() << "  x  CG[" << term.bra1.to_string() << " , "
                    << term.bra2.to_string() << " -> " << term.target.to_string() << " = "
                    << cgv.to_string() << "]\n";
            }
            out << "expansion sum: " << sum.to_string() << "\n";
            out << "direct value:  " << direct.to_string() << "\n";
            out << (sum == direct ? "exact match" : "MISMATCH") << "\n";
            if (!(sum == direct)) return 1;
        } else if (appb->parsed()) {
            if (ab_state.empty()) {
                for (int a = 0; a <= ab_lambda - ab_sigma; ++a)
                    out << "a=" << a << "  "
                        << hw_chain_closed_form(ab_lambda, ab_sigma, a).to_string() << "\n";
            } else {
                StateLabel t =
                    detail::parse_state({ab_sigma, ab_sigma}, ab_state);
                int p = 2 * ab_sigma - t.nu[0];
                for (int nu1p = 0; nu1p <= ab_lambda; ++nu1p) {
                    ExactReal val = reduced_cg_3f2(ab_lambda, ab_sigma, nu1p, p, t.I);
                    out << "nu1p=" << nu1p << "  " << val.to_string() << "\n";
                }
            }
        } else if (oracle->parsed()) {
            std::vector<std::pair<IrrepLabel, IrrepLabel>> products;
            if (!or_labels.empty()) {
                products.push_back({{or_labels[0], or_labels[1]}, {or_labels[2], or_labels[3]}});
            } else {
                for (int l1 = 0; l1 * 1 <= or_cap; ++l1)
                    for (int m1 = 0; dimension({l1, m1}) <= or_cap; ++m1)
                        for (int l2 = 0; l2 <= l1; ++l2)
                            for (int m2 = 0;
                                 dimension({l1, m1}) * dimension({l2, m2}) <= or_cap; ++m2) {
                                if (l2 == l1 && m2 > m1) break;
                                products.push_back({{l1, m1}, {l2, m2}});
                            }
            }
            bool all_ok = true;
            for (const auto& [a, b] : products) {
                OracleComparison r = oracle_compare(a, b, or_cap);
                out << a.to_string() << " x " << b.to_string() << ": "
                    << (r.ok ? "ok" : ("FAIL " + r.detail))
                    << " (reconciliation sign " << (r.reconciliation_sign > 0 ? "+1" : "-1")
                    << ")\n";
                all_ok = all_ok && r.ok;
            }
            if (!all_ok) return 1;
        } else if (batch->parsed() || bench->parsed()) {
            IrrepLabel a{75, 60}, b{53, 0};
            FamilySelector sel{47, h(44), 27, h(26), h(70), {}};
            BatchFormat fmt = BatchFormat::csv;
            bool timing = false;
            if (batch->parsed()) {
                a = {b_labels[0], b_labels[1]};
                b = {b_labels[2], b_labels[3]};
                sel = {b_family[0], h(b_family[1]), b_family[2], h(b_family[3]), h(b_family[4]),
                       b_ks};
                fmt = b_json ? BatchFormat::json : BatchFormat::csv;
                timing = b_timing;
            } else {
                if (!bench_all) sel.k_filter = bench_ks;
                fmt = bench_json ? BatchFormat::json : BatchFormat::csv;
                timing = !bench_no_timing;
                auto t0 = std::chrono::steady_clock::now();
                auto entries = decompose_product(a, b);
                double dt =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                        .count();
                err << "decomposition: " << entries.size() << " irreps in " << dt << " s\n";
            }
            auto rows = batch_family(a, b, sel, threads);
            write_batch(out, rows, sel, fmt, timing);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace su3cg::cli
