#pragma once

#include "su3cg/su2_wigner.hpp"
#include "su3cg/su3_rep.hpp"

namespace su3cg {

// Reduced matrix elements of the lowering tensors T^L built from powers of
// C31 and C21, and of the adjoint tensor raising back up.  Layer p counts
// steps below the highest weight: nu1 = lambda + mu - p.

// <(l,m) l+m-p; J || T^{p/2} || (l,m) l+m; m/2>, from the closed form with
// phase (-1)^{(p-2J+mu)/2}.  Exists exactly when the (nu1, J) multiplet does.
inline bool hw_multiplet_exists(IrrepLabel r, int p, HalfInt J) {
    return p >= 0 && multiplet_exists(r, r.lambda + r.mu - p, J);
}

inline ExactReal rme_from_hw_uncached(IrrepLabel r, int p, HalfInt J) {
    if (!hw_multiplet_exists(r, p, J))
        throw OutOfRange("rme_from_hw " + r.to_string() + " p=" + std::to_string(p) +
                         " J=" + J.to_string());
    detail::SqrtRatioBuilder b;
    b.mul_twice_plus_one(J);
    b.mul_factorial(r.lambda + r.mu + 1);
    b.mul_factorial(r.lambda);
    b.mul_factorial(p);
    b.div_factorial(r.lambda + (r.mu - p - J.tw) / 2);      // lambda - J + (mu-p)/2
    b.div_factorial(r.lambda + (r.mu - p + J.tw) / 2 + 1);  // lambda + J + (mu-p)/2 + 1
    int phase = parity(static_cast<long>(p + r.mu - J.tw) / 2);
    return ExactReal(Rational(phase)) * b.take_sqrt();
}

inline ExactReal rme_from_hw(IrrepLabel r, int p, HalfInt J) {
    using Key = std::array<int, 4>;
    static detail::MemoCache<Key, ExactReal> cache;
    Key key{r.lambda, r.mu, p, J.tw};
    return cache.get_or_compute(key, [&] { return rme_from_hw_uncached(r, p, J); });
}

// <(l,m) l+m-p-2k; J' || T^k || (l,m) l+m-p; J> via the 6j ratio form.
// OutOfRange when the target multiplet does not exist, ZeroDenominator when
// the source multiplet does not (the ratio's denominator would vanish).
inline ExactReal rme_general(IrrepLabel r, int p, HalfInt k, HalfInt J, HalfInt Jp) {
    if (k.tw < 0) throw OutOfRange("negative tensor rank");
    const int two_k = k.tw;
    if (!hw_multiplet_exists(r, p, J))
        throw ZeroDenominator("rme_general source " + r.to_string() + " p=" +
                              std::to_string(p) + " J=" + J.to_string());
    if (!hw_multiplet_exists(r, p + two_k, Jp))
        throw OutOfRange("rme_general target " + r.to_string() + " p=" +
                         std::to_string(p + two_k) + " J'=" + Jp.to_string());
    if (!triangle(J, k, Jp)) return ExactReal();
    if (two_k == 0) return ExactReal::sqrt_rational(Rational(J.tw + 1));  // identity tensor
    ExactReal sixj = wigner_6j(k, HalfInt::from_twice(p), HalfInt::from_twice(p + two_k),
                               HalfInt::from_twice(r.mu), Jp, J);
    int phase = parity(static_cast<long>(r.mu + p + two_k + Jp.tw) / 2);
    ExactReal pre = ExactReal(Rational(phase) * Rational(J.tw + 1)) *
                    ExactReal::sqrt_rational(Rational(two_k + p + 1));
    return pre * sixj * rme_from_hw(r, p + two_k, Jp) / rme_from_hw(r, p, J);
}

// Zero-returning variant for sums: nonexistent target means no transition.
inline ExactReal try_rme_general(IrrepLabel r, int p, HalfInt k, HalfInt J, HalfInt Jp) {
    if (!hw_multiplet_exists(r, p, J) || !hw_multiplet_exists(r, p + k.tw, Jp))
        return ExactReal();
    return rme_general(r, p, k, J, Jp);
}

enum class TensorDirection { lowering, raising_adjoint };

// Generator reduced matrix elements.  Lowering:
//   <l+m-(p+1); J || T^{1/2} || l+m-p; I>,
// raising (adjoint tensor) via the (-1)^{I+1/2-J} relation.
inline ExactReal rme_generator(IrrepLabel r, int p, HalfInt I, HalfInt J,
                               TensorDirection dir = TensorDirection::lowering) {
    if (abs(I - J) != HalfInt::from_twice(1))
        throw OutOfRange("generator needs |I-J| = 1/2");
    if (dir == TensorDirection::lowering)
        return rme_general(r, p, HalfInt::from_twice(1), I, J);
    // <l+m-(p-1); J || Tbar^{1/2} || l+m-p; I> = (-1)^{I+1/2-J} <l+m-p; I || T^{1/2} || l+m-(p-1); J>
    int phase = parity(HalfInt::from_twice(I.tw + 1 - J.tw));
    return ExactReal(Rational(phase)) * rme_general(r, p - 1, HalfInt::from_twice(1), J, I);
}

inline ExactReal try_rme_generator(IrrepLabel r, int p, HalfInt I, HalfInt J,
                                   TensorDirection dir = TensorDirection::lowering) {
    if (abs(I - J) != HalfInt::from_twice(1)) return ExactReal();
    int src = p, dst = (dir == TensorDirection::lowering) ? p + 1 : p - 1;
    if (!hw_multiplet_exists(r, src, I) || !hw_multiplet_exists(r, dst, J)) return ExactReal();
    return rme_generator(r, p, I, J, dir);
}

// Wigner-Eckart application of a single tensor component on an explicit
// basis state: T^L_M |nu; I> as a combination of states one or more layers
// down.  Used for generator matrix elements and annihilation checks.
inline std::vector<std::pair<StateLabel, ExactReal>> apply_tensor_component(
    const StateLabel& s, HalfInt L, HalfInt M) {
    std::vector<std::pair<StateLabel, ExactReal>> out;
    const IrrepLabel r = s.irrep;
    const int p_src = r.lambda + r.mu - s.nu[0];
    HalfInt mI = s.m23();
    for (HalfInt J = abs(s.I - L); J <= s.I + L; J += HalfInt(1)) {
        if (!hw_multiplet_exists(r, p_src + L.tw, J)) continue;
        // occupations shift by (-2L, L+M, L-M)
        StateLabel t{r,
                     {s.nu[0] - L.tw, s.nu[1] + (L.tw + M.tw) / 2,
                      s.nu[2] + (L.tw - M.tw) / 2},
                     J};
        if (!t.valid()) continue;
        ExactReal cg = clebsch_gordan(s.I, mI, L, M, J, mI + M);
        if (cg.is_zero()) continue;
        ExactReal rme = rme_general(r, p_src, L, s.I, J);
        ExactReal coeff = cg * rme / ExactReal::sqrt_rational(Rational(J.tw + 1));
        if (!coeff.is_zero()) out.push_back({t, coeff});
    }
    return out;
}

// C_ij |state> in the occupation basis, for all nine u(3) generators.
// i, j are 1-based row indices.
inline std::vector<std::pair<StateLabel, ExactReal>> apply_su3_generator(int i, int j,
                                                                         const StateLabel& s) {
    std::vector<std::pair<StateLabel, ExactReal>> out;
    const IrrepLabel r = s.irrep;
    const HalfInt mI = s.m23();
    auto push = [&out](const StateLabel& t, const ExactReal& c) {
        if (!c.is_zero()) out.push_back({t, c});
    };

    if (i == j) {  // number operators
        push(s, ExactReal(Rational(s.nu[i - 1])));
        return out;
    }
    if (i == 2 && j == 3) {  // su(2)_23 raising: sqrt((I-m)(I+m+1))
        StateLabel t{r, {s.nu[0], s.nu[1] + 1, s.nu[2] - 1}, s.I};
        if (t.nu[2] >= 0 && t.valid())
            push(t, ExactReal::sqrt_rational(Rational((s.I - mI).as_int()) *
                                             Rational((s.I + mI).as_int() + 1)));
        return out;
    }
    if (i == 3 && j == 2) {  // su(2)_23 lowering
        StateLabel t{r, {s.nu[0], s.nu[1] - 1, s.nu[2] + 1}, s.I};
        if (t.nu[1] >= 0 && t.valid())
            push(t, ExactReal::sqrt_rational(Rational((s.I + mI).as_int()) *
                                             Rational((s.I - mI).as_int() + 1)));
        return out;
    }

    const int p_src = r.lambda + r.mu - s.nu[0];
    if (i > j) {
        // C21 = T^{1/2}_{+1/2}, C31 = T^{1/2}_{-1/2}
        HalfInt M = HalfInt::from_twice(i == 2 ? 1 : -1);
        for (HalfInt J : {s.I - HalfInt::from_twice(1), s.I + HalfInt::from_twice(1)}) {
            if (J.is_negative()) continue;
            if (!hw_multiplet_exists(r, p_src + 1, J)) continue;
            StateLabel t{r,
                         {s.nu[0] - 1, s.nu[1] + (1 + M.tw) / 2, s.nu[2] + (1 - M.tw) / 2},
                         J};
            if (!t.valid()) continue;
            ExactReal cg = clebsch_gordan(s.I, mI, HalfInt::from_twice(1), M, J, mI + M);
            if (cg.is_zero()) continue;
            ExactReal rme = rme_generator(r, p_src, s.I, J, TensorDirection::lowering);
            push(t, cg * rme / ExactReal::sqrt_rational(Rational(J.tw + 1)));
        }
        return out;
    }

    // Raising: C13 = Tbar^{1/2}_{+1/2}, C12 = -Tbar^{1/2}_{-1/2}
    HalfInt M = HalfInt::from_twice(j == 3 ? 1 : -1);
    int overall = (j == 2) ? -1 : 1;
    for (HalfInt J : {s.I - HalfInt::from_twice(1), s.I + HalfInt::from_twice(1)}) {
        if (J.is_negative()) continue;
        if (!hw_multiplet_exists(r, p_src - 1, J)) continue;
        StateLabel t{r,
                     {s.nu[0] + 1, s.nu[1] - (1 - M.tw) / 2, s.nu[2] - (1 + M.tw) / 2},
                     J};
        if (t.nu[1] < 0 || t.nu[2] < 0 || !t.valid()) continue;
        ExactReal cg = clebsch_gordan(s.I, mI, HalfInt::from_twice(1), M, J, mI + M);
        if (cg.is_zero()) continue;
        ExactReal rme = rme_generator(r, p_src, s.I, J, TensorDirection::raising_adjoint);
        push(t, ExactReal(Rational(overall)) * cg * rme /
                    ExactReal::sqrt_rational(Rational(J.tw + 1)));
    }
    return out;
}

}  // namespace su3cg
