#pragma once

#include "su3cg/cg_engine.hpp"

namespace su3cg {

// Weyl-group action on the occupation basis and the induced relations among
// CG coefficients, plus the factor-interchange symmetries.

enum class Perm { identity, p12, p13, p23, p123, p132 };

// sigma as a function on row indices (1-based): p123 maps 1->2->3->1.
inline int perm_map(Perm p, int i) {
    static constexpr int table[6][3] = {
        {1, 2, 3},  // identity
        {2, 1, 3},  // p12
        {3, 2, 1},  // p13
        {1, 3, 2},  // p23
        {2, 3, 1},  // p123
        {3, 1, 2},  // p132
    };
    return table[static_cast<int>(p)][i - 1];
}

inline Perm perm_inverse(Perm p) {
    if (p == Perm::p123) return Perm::p132;
    if (p == Perm::p132) return Perm::p123;
    return p;
}

inline bool is_transposition(Perm p) {
    return p == Perm::p12 || p == Perm::p13 || p == Perm::p23;
}

// Occupations of P_sigma |nu>: quanta of row i move to row sigma(i).
inline std::array<int, 3> permute_occ(Perm p, const std::array<int, 3>& nu) {
    std::array<int, 3> out{};
    for (int i = 1; i <= 3; ++i) out[perm_map(p, i) - 1] = nu[i - 1];
    return out;
}

// The determinant-factor phase exponent: k for transpositions, 0 otherwise.
inline int sigma_of_k(Perm p, int k) { return is_transposition(p) ? k : 0; }

namespace detail {

// <(l,m) nu2 nu1 nu3; I' | P12 | (l,m) nu1 nu2 nu3; I>, the 6j form.
inline ExactReal p12_element(IrrepLabel r, const StateLabel& bra, const StateLabel& ket) {
    long expo = (ket.nu[2] - ket.I.tw - bra.I.tw + 2 * r.mu - r.lambda) / 2;
    SqrtRatioBuilder b;
    b.mul_twice_plus_one(ket.I);
    b.mul_twice_plus_one(bra.I);
    ExactReal sixj =
        wigner_6j(HalfInt::from_twice(ket.nu[0]), HalfInt::from_twice(ket.nu[2]), bra.I,
                  HalfInt::from_twice(ket.nu[1]), HalfInt::from_twice(r.lambda), ket.I);
    return ExactReal(Rational(parity(expo))) * b.take_sqrt() * sixj;
}

// P23 swaps the two su(2)_23-coupled rows; the CG swap symmetry gives a
// diagonal phase (-1)^{(nu2+nu3)/2 - I}.
inline ExactReal p23_element(const StateLabel& bra, const StateLabel& ket) {
    if (bra.I != ket.I) return ExactReal();
    return ExactReal(Rational(parity((ket.nu[1] + ket.nu[2] - ket.I.tw) / 2)));
}

}  // namespace detail

// <bra| P_sigma |ket> in one irrep.  Exact zero unless the bra occupations
// are the permuted ket occupations; 3-cycles and P13 evaluate by composing
// the two generating transpositions.
inline ExactReal permutation_matrix_element(IrrepLabel r, Perm p, const StateLabel& bra,
                                            const StateLabel& ket) {
    if (bra.irrep != r || ket.irrep != r) throw OutOfRange("irrep mismatch");
    if (bra.nu != permute_occ(p, ket.nu)) return ExactReal();
    switch (p) {
        case Perm::identity:
            return bra.I == ket.I ? ExactReal(1) : ExactReal();
        case Perm::p12:
            return detail::p12_element(r, bra, ket);
        case Perm::p23:
            return detail::p23_element(bra, ket);
        default:
            break;
    }
    // p13 = p12 . p23 . p12 (operator product); p123 = p12 p23; p132 = p23 p12
    std::vector<Perm> word = (p == Perm::p13) ? std::vector<Perm>{Perm::p12, Perm::p23, Perm::p12}
                             : (p == Perm::p123)
                                 ? std::vector<Perm>{Perm::p12, Perm::p23}
                                 : std::vector<Perm>{Perm::p23, Perm::p12};
    // fold right-to-left: states after each generator
    std::map<StateLabel, ExactReal> wave{{ket, ExactReal(1)}};
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        std::map<StateLabel, ExactReal> next;
        for (const auto& [s, c] : wave) {
            std::array<int, 3> occ = permute_occ(*it, s.nu);
            for (HalfInt I : multiplet_spins(r, occ[0])) {
                StateLabel t{r, occ, I};
                if (!t.valid()) continue;
                ExactReal me = permutation_matrix_element(r, *it, t, s);
                if (!me.is_zero()) next[t] += me * c;
            }
        }
        wave = std::move(next);
    }
    auto found = wave.find(bra);
    return found == wave.end() ? ExactReal() : found->second;
}

// One term of a Weyl relation: coefficient times a permuted-label CG.
struct WeylTerm {
    ExactReal coeff;
    StateLabel bra1, bra2, target;
};

// Express CG(bra1, bra2 -> target) as a sum over CGs at permuted labels:
//   (-1)^{sigma(k)} sum <bra1|P^-1|x1><bra2|P^-1|x2><x3|P|target> CG(x1,x2,x3).
inline std::vector<WeylTerm> weyl_relate(const CouplingQuery& q, Perm p,
                                         const StateLabel& bra1, const StateLabel& bra2,
                                         const StateLabel& target) {
    const int k = grade(q.left, q.right, q.target);
    const int global = parity(static_cast<long>(sigma_of_k(p, k)));
    const Perm pinv = perm_inverse(p);
    std::array<int, 3> occ1 = permute_occ(p, bra1.nu);
    std::array<int, 3> occ2 = permute_occ(p, bra2.nu);
    std::array<int, 3> occ3 = permute_occ(p, target.nu);
    std::vector<WeylTerm> terms;
    for (HalfInt I1 : multiplet_spins(q.left, occ1[0])) {
        StateLabel x1{q.left, occ1, I1};
        if (!x1.valid()) continue;
        ExactReal m1 = permutation_matrix_element(q.left, pinv, bra1, x1);
        if (m1.is_zero()) continue;
        for (HalfInt I2 : multiplet_spins(q.right, occ2[0])) {
            StateLabel x2{q.right, occ2, I2};
            if (!x2.valid()) continue;
            ExactReal m2 = permutation_matrix_element(q.right, pinv, bra2, x2);
            if (m2.is_zero()) continue;
            for (HalfInt I3 : multiplet_spins(q.target, occ3[0])) {
                StateLabel x3{q.target, occ3, I3};
                if (!x3.valid()) continue;
                ExactReal m3 = permutation_matrix_element(q.target, p, x3, target);
                if (m3.is_zero()) continue;
                ExactReal c = ExactReal(Rational(global)) * m1 * m2 * m3;
                terms.push_back({c, x1, x2, x3});
            }
        }
    }
    return terms;
}

// Evaluate a Weyl expansion against the engine (same rho on every term).
inline ExactReal weyl_reconstruct(const CouplingQuery& q, Perm p, const StateLabel& bra1,
                                  const StateLabel& bra2, const StateLabel& target) {
    HwVector hw = solve_hw(q);
    ExactReal sum;
    for (const auto& t : weyl_relate(q, p, bra1, bra2, target))
        sum += t.coeff * full_cg_from_hw(hw, t.bra1, t.bra2, t.target).value;
    return sum;
}

// Whether a state's weight lies in the dominant sector (nu1 >= nu2 >= nu3).
inline bool dominant(const StateLabel& s) {
    return s.nu[0] >= s.nu[1] && s.nu[1] >= s.nu[2];
}

// The permutation carrying nu to the dominant sector.
inline Perm dominant_perm(const std::array<int, 3>& nu) {
    for (Perm p : {Perm::identity, Perm::p12, Perm::p23, Perm::p13, Perm::p123, Perm::p132}) {
        std::array<int, 3> t = permute_occ(p, nu);
        if (t[0] >= t[1] && t[1] >= t[2]) return p;
    }
    return Perm::identity;  // unreachable
}

// Interchange of (p1,q1) and (lambda,0): entrywise re-phase of a reduced
// table, phase (-1)^{p + J' + In' + I - k + q1}.  Accepts a table for either
// order; the output carries the swapped key components.
inline ReducedCGTable interchange_order(const ReducedCGTable& in) {
    const CouplingQuery& q = in.query;
    bool left_special = q.left.mu == 0;
    bool right_special = q.right.mu == 0;
    if (!left_special && !right_special)
        throw NotApplicable("interchange_order needs a (lambda,0) factor");
    const int q1 = left_special ? q.right.mu : q.left.mu;
    ReducedCGTable out{{q.right, q.left, q.target, q.rho}, in.grade_k, {}};
    for (const auto& [key, v] : in.entries) {
        int p = q.target.lambda + q.target.mu - key.nbar1;
        long expo = p + static_cast<long>(key.Jp.tw + key.Inp.tw + key.Ibar.tw) / 2 -
                    in.grade_k + q1;
        ReducedKey swapped{key.n1p, key.Inp, key.nu1p, key.Jp, key.nbar1, key.Ibar};
        out.entries.emplace(swapped, ExactReal(Rational(parity(expo))) * v);
    }
    return out;
}

// The hw-seed phase of the interchange: epsilon = (-1)^{q2 - q1 + k}.
inline int interchange_epsilon(const CouplingQuery& q) {
    int q1 = q.left.mu == 0 ? q.right.mu : q.left.mu;
    return parity(static_cast<long>(q.target.mu - q1 + grade(q.left, q.right, q.target)));
}

// Conjugate relation: one full CG of (p1,q1) x (lambda,0) -> (p2,q2) mapped
// to the corresponding coefficient of (p2,q2) x (0,lambda) -> (p1,q1).
struct ConjugatedCG {
    CouplingQuery query;
    StateLabel bra1, bra2, target;
    ExactReal value;
};

inline ConjugatedCG conjugate_relation(const CouplingQuery& q, const StateLabel& bra1,
                                       const StateLabel& bra2, const StateLabel& target,
                                       const ExactReal& value) {
    if (q.right.mu != 0) throw NotApplicable("conjugate_relation needs right = (lambda,0)");
    const int lambda = q.right.lambda;
    const int k = grade(q.left, q.right, q.target);
    StateLabel tilde{{0, lambda},
                     {lambda - bra2.nu[0], lambda - bra2.nu[1], lambda - bra2.nu[2]},
                     bra2.I};
    long expo = bra2.nu[1] + q.target.mu - q.left.mu + k;
    ExactReal scale = ExactReal::sqrt_rational(Rational(dimension(q.left)) /
                                               Rational(dimension(q.target)));
    CouplingQuery out{q.target, {0, lambda}, q.left, q.rho};
    return {out, target, tilde, bra1,
            ExactReal(Rational(parity(expo))) * scale * value};
}

}  // namespace su3cg
