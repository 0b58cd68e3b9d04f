#pragma once

#include <atomic>
#include <chrono>
#include <ostream>
#include <sstream>
#include <thread>

#include "su3cg/cg_engine.hpp"

namespace su3cg {

enum class BatchFormat { csv, json };

// A reduced-CG state family: one fixed source key, target states
// (nu1p + n1p - k, Ibar) across every irrep of the decomposition.
struct FamilySelector {
    int nu1p = 0;
    HalfInt Jp;
    int n1p = 0;
    HalfInt Inp;
    HalfInt Ibar;
    std::vector<int> k_filter;  // empty: all grades
};

struct BatchRow {
    IrrepLabel target;
    int k = 0;
    bool ok = false;
    std::string error;
    ExactReal value;
    double seconds = 0;
};

namespace detail {

inline HwVector solve_hw_fast(const CouplingQuery& q) {
    // the batch path avoids the decomposition-membership lookup; targets come
    // straight from decompose_product
    auto c = HwContext::make(q);
    if (c.grade_k == 0) return hw_k0_closed_form(q);
    if (q.right.mu == 0) return hw_lambda0_chains(q);
    return solve_hw(q);
}

}  // namespace detail

// One row per decomposition entry, computed in parallel, emitted in
// decomposition order.  Per-row failures land in the error column and the
// run continues.
inline std::vector<BatchRow> batch_family(IrrepLabel left, IrrepLabel right,
                                          const FamilySelector& sel, int threads = 0) {
    auto decomp = decompose_product(left, right);
    std::vector<const DecompEntry*> selected;
    for (const auto& e : decomp) {
        if (!sel.k_filter.empty() &&
            std::find(sel.k_filter.begin(), sel.k_filter.end(), e.grade_k) ==
                sel.k_filter.end())
            continue;
        selected.push_back(&e);
    }
    std::vector<BatchRow> rows(selected.size());
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<int>(threads, static_cast<int>(selected.size())));

    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= selected.size()) break;
            const DecompEntry& e = *selected[i];
            BatchRow& row = rows[i];
            row.target = e.irrep;
            row.k = e.grade_k;
            auto t0 = std::chrono::steady_clock::now();
            try {
                CouplingQuery q{left, right, e.irrep, 1};
                HwVector hw = detail::solve_hw_fast(q);
                int nbar1 = sel.nu1p + sel.n1p - e.grade_k;
                row.value = reduced_cg_single(hw, sel.nu1p, sel.Jp, sel.n1p, sel.Inp, nbar1,
                                              sel.Ibar);
                row.ok = true;
            } catch (const Error& err) {
                row.error = err.what();
            }
            row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                              .count();
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

inline void write_batch(std::ostream& out, const std::vector<BatchRow>& rows,
                        const FamilySelector& sel, BatchFormat format,
                        bool timing_footer = false) {
    if (format == BatchFormat::csv) {
        out << "p2,q2,k,nu1p,2Jp,n1p,2Inp,nbar1,2Ibar,value_exact,value_decimal\n";
        for (const auto& r : rows) {
            out << r.target.lambda << ',' << r.target.mu << ',' << r.k << ',' << sel.nu1p
                << ',' << sel.Jp.tw << ',' << sel.n1p << ',' << sel.Inp.tw << ','
                << sel.nu1p + sel.n1p - r.k << ',' << sel.Ibar.tw << ',';
            if (r.ok)
                out << r.value.to_string() << ',' << r.value.to_decimal();
            else
                out << "error: " << r.error << ',';
            out << '\n';
        }
    } else {
        out << "[\n";
        for (size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            out << "  {\"p2\": " << r.target.lambda << ", \"q2\": " << r.target.mu
                << ", \"k\": " << r.k << ", \"nu1p\": " << sel.nu1p
                << ", \"2Jp\": " << sel.Jp.tw << ", \"n1p\": " << sel.n1p
                << ", \"2Inp\": " << sel.Inp.tw
                << ", \"nbar1\": " << sel.nu1p + sel.n1p - r.k
                << ", \"2Ibar\": " << sel.Ibar.tw;
            if (r.ok)
                out << ", \"value_exact\": \"" << r.value.to_string()
                    << "\", \"value_decimal\": " << r.value.to_decimal();
            else
                out << ", \"error\": \"" << r.error << "\"";
            out << "}" << (i + 1 < rows.size() ? "," : "") << "\n";
        }
        out << "]\n";
    }
    if (timing_footer) {
        std::map<int, std::pair<double, double>> by_k;  // k -> (total, max)
        for (const auto& r : rows) {
            auto& [total, mx] = by_k[r.k];
            total += r.seconds;
            mx = std::max(mx, r.seconds);
        }
        for (const auto& [k, tm] : by_k)
            out << "# timing k=" << k << " total=" << tm.first << "s max=" << tm.second
                << "s\n";
    }
}

}  // namespace su3cg
