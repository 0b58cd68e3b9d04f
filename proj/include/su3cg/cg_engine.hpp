#pragma once

#include <functional>

#include "su3cg/hw_solver.hpp"

namespace su3cg {

// From a solved highest-weight vector to reduced CGs of every target state
// (the 9j master formula), and on to full CGs.

// Key of one reduced CG: source multiplets and target multiplet.
struct ReducedKey {
    int nu1p = 0;
    HalfInt Jp;
    int n1p = 0;
    HalfInt Inp;
    int nbar1 = 0;
    HalfInt Ibar;

    friend constexpr auto operator<=>(const ReducedKey&, const ReducedKey&) = default;
};

struct ReducedCGTable {
    CouplingQuery query;
    int grade_k = 0;
    std::map<ReducedKey, ExactReal> entries;
};

// Construct a state label from its multiplet (nu1, I) and su(2) projection m.
inline StateLabel make_state(IrrepLabel r, int nu1, HalfInt I, HalfInt m) {
    int rest = r.quanta() - nu1;
    StateLabel s{r, {nu1, (rest + m.tw) / 2, (rest - m.tw) / 2}, I};
    return s;
}

namespace detail {

inline ExactReal reduced_cg_sum(const HwVector& hw, int nu1p, HalfInt Jp, HalfInt Inp,
                                int p, HalfInt Ibar, const ExactReal& den) {
    const CouplingQuery& q = hw.query;
    const HalfInt q2half = HalfInt::from_twice(q.target.mu);
    ExactReal sum;
    for (const auto& [k, X] : hw.entries) {
        if (X.is_zero()) continue;
        int d1 = k.nu1 - nu1p;  // left tensor rank 2*(d1/2)
        if (d1 < 0 || d1 > p) continue;
        int d2 = p - d1;
        HalfInt k1 = HalfInt::from_twice(d1), k2 = HalfInt::from_twice(d2);
        if (!triangle(k.J, k1, Jp) || !triangle(k.In, k2, Inp)) continue;
        ExactReal r1 = try_rme_general(q.left, q.left.lambda + q.left.mu - k.nu1, k1, k.J, Jp);
        if (r1.is_zero()) continue;
        ExactReal r2 =
            try_rme_general(q.right, q.right.lambda + q.right.mu - k.n1, k2, k.In, Inp);
        if (r2.is_zero()) continue;
        ExactReal ninej =
            wigner_9j(k.In, k.J, q2half, k2, k1, HalfInt::from_twice(p), Inp, Jp, Ibar);
        if (ninej.is_zero()) continue;
        int phase = parity(static_cast<long>(q.target.mu + k.J.tw + k.In.tw) / 2);
        sum += ExactReal(Rational(phase) * Rational(binomial(p, d1))) * X * r1 * r2 * ninej;
    }
    int phase = parity(static_cast<long>(2 * p - Ibar.tw - Jp.tw - Inp.tw) / 2);
    SqrtRatioBuilder pre;
    pre.mul_twice_plus_one(Ibar);
    pre.mul_integer(q.target.mu + 1);
    pre.mul_integer(p + 1);
    return ExactReal(Rational(phase)) * pre.take_sqrt() * sum / den;
}

}  // namespace detail

// One reduced CG <.. nu1p Jp; .. n1p Inp || (p2,q2) nbar1; Ibar>.
inline ExactReal reduced_cg_single(const HwVector& hw, int nu1p, HalfInt Jp, int n1p,
                                   HalfInt Inp, int nbar1, HalfInt Ibar) {
    const IrrepLabel t = hw.query.target;
    const int p = t.lambda + t.mu - nbar1;
    if (p < 0 || !multiplet_exists(t, nbar1, Ibar))
        throw NonexistentTarget(t.to_string() + " nu1=" + std::to_string(nbar1) +
                                " I=" + Ibar.to_string());
    if (nu1p + n1p != t.lambda + t.mu + hw.grade_k - p)
        throw OutOfRange("source labels violate the occupation balance");
    if (!multiplet_exists(hw.query.left, nu1p, Jp) ||
        !multiplet_exists(hw.query.right, n1p, Inp) || !triangle(Jp, Inp, Ibar))
        return ExactReal();
    if (p == 0) return hw.at({nu1p, Jp, n1p, Inp});
    return detail::reduced_cg_sum(hw, nu1p, Jp, Inp, p, Ibar, rme_from_hw(t, p, Ibar));
}

// All reduced CGs feeding one target multiplet (nbar1, Ibar), keyed by the
// source multiplets.  Entries inside an existing target multiplet are stored
// even when exactly zero.
inline std::map<ReducedKey, ExactReal> reduced_cg_slice(const HwVector& hw, int nbar1,
                                                        HalfInt Ibar) {
    const CouplingQuery& q = hw.query;
    const IrrepLabel t = q.target;
    const int p = t.lambda + t.mu - nbar1;
    if (p < 0 || !multiplet_exists(t, nbar1, Ibar))
        throw NonexistentTarget(t.to_string() + " nu1=" + std::to_string(nbar1) +
                                " I=" + Ibar.to_string());
    const int total_u1 = t.lambda + t.mu + hw.grade_k;

    std::map<ReducedKey, ExactReal> out;
    if (p == 0) {
        // identity lowering: the hw entries themselves
        for (const auto& [k, v] : hw.entries)
            out.emplace(ReducedKey{k.nu1, k.J, k.n1, k.In, nbar1, Ibar}, v);
        return out;
    }

    ExactReal den = rme_from_hw(t, p, Ibar);
    const int cp = total_u1 - p;  // nu1' + n1' for the lowered layer

    for (int nu1p = std::min(q.left.lambda + q.left.mu, cp); nu1p >= 0; --nu1p) {
        int n1p = cp - nu1p;
        if (n1p < 0 || n1p > q.right.lambda + q.right.mu) continue;
        for (HalfInt Jp : multiplet_spins(q.left, nu1p)) {
            for (HalfInt Inp : multiplet_spins(q.right, n1p)) {
                if (!triangle(Jp, Inp, Ibar)) continue;
                ExactReal value = detail::reduced_cg_sum(hw, nu1p, Jp, Inp, p, Ibar, den);
                out.emplace(ReducedKey{nu1p, Jp, n1p, Inp, nbar1, Ibar}, value);
            }
        }
    }
    return out;
}

// Complete reduced table for one query (all target multiplets).
inline ReducedCGTable reduced_cg_all(const HwVector& hw) {
    ReducedCGTable table{hw.query, hw.grade_k, {}};
    const IrrepLabel t = hw.query.target;
    for (int nbar1 = t.lambda + t.mu; nbar1 >= 0; --nbar1)
        for (HalfInt Ibar : multiplet_spins(t, nbar1))
            for (auto& [key, v] : reduced_cg_slice(hw, nbar1, Ibar))
                table.entries.emplace(key, std::move(v));
    return table;
}

struct FullCG {
    ExactReal value;
    bool weight_ok = true;  // false: occupation balance failed (hard zero)
};

// Full CG = reduced CG x su(2) CG with projections from the occupation
// half-differences.
inline FullCG full_cg_from_hw(const HwVector& hw, const StateLabel& bra1,
                              const StateLabel& bra2, const StateLabel& target) {
    if (!bra1.valid() || !bra2.valid() || !target.valid())
        throw OutOfRange("invalid state label in full_cg");
    for (int i = 0; i < 3; ++i)
        if (bra1.nu[i] + bra2.nu[i] != target.nu[i] + hw.grade_k) return {ExactReal(), false};
    auto slice_key = ReducedKey{bra1.nu[0], bra1.I, bra2.nu[0], bra2.I, target.nu[0], target.I};
    auto slice = reduced_cg_slice(hw, target.nu[0], target.I);
    auto it = slice.find(slice_key);
    ExactReal reduced = (it == slice.end()) ? ExactReal() : it->second;
    ExactReal cg =
        clebsch_gordan(bra1.I, bra1.m23(), bra2.I, bra2.m23(), target.I, target.m23());
    return {reduced * cg, true};
}

inline FullCG full_cg(const CouplingQuery& q, const StateLabel& bra1, const StateLabel& bra2,
                      const StateLabel& target) {
    return full_cg_from_hw(solve_hw(q), bra1, bra2, target);
}

// End-to-end coupling: solved hw vectors plus a per-target streaming visitor
// over reduced slices, in su3-rep target-state order.
struct CoupledTables {
    std::vector<HwVector> copies;

    void for_each_slice(
        const std::function<void(int rho, int nbar1, HalfInt Ibar,
                                 const std::map<ReducedKey, ExactReal>&)>& visit) const {
        for (const auto& hw : copies) {
            const IrrepLabel t = hw.query.target;
            for (int nbar1 = t.lambda + t.mu; nbar1 >= 0; --nbar1)
                for (HalfInt Ibar : multiplet_spins(t, nbar1))
                    visit(hw.query.rho, nbar1, Ibar, reduced_cg_slice(hw, nbar1, Ibar));
        }
    }
};

inline CoupledTables couple(const CouplingQuery& q) { return {solve_hw_all(q)}; }

}  // namespace su3cg
