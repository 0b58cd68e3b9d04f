#pragma once

#include "su3cg/cg_engine.hpp"

namespace su3cg {

// Closed forms for (lambda,0) x (0,lambda) -> (sigma,sigma): the highest
// weight chain, the general reduced CG as a terminating 3F2 sum, and the
// tensor-operator coefficients built from them.

// Reduced CG of the chain state a steps below the seed:
//   <(l,0) l-a; a/2 ; (0,l) s+a; (s+a)/2 || (s,s) 2s; s/2>
// including the seed value itself at a = 0.
inline ExactReal hw_chain_closed_form(int lambda, int sigma, int a) {
    if (sigma < 0 || sigma > lambda || a < 0 || a > lambda - sigma)
        throw OutOfRange("hw_chain_closed_form: a must lie in [0, lambda - sigma]");
    detail::SqrtRatioBuilder b;
    b.mul_factorial(sigma + a + 1);
    b.mul_factorial(lambda - sigma);
    b.mul_factorial(lambda - a);
    b.mul_factorial(2 * sigma + 2);
    b.div_factorial(sigma + 1);
    b.div_factorial(lambda - sigma - a);
    b.div_factorial(a);
    b.div_factorial(sigma);
    b.div_factorial(lambda + sigma + 2);
    return ExactReal(Rational(parity(static_cast<long>(a)))) * b.take_sqrt();
}

namespace detail {

// Terminating 3F2(a1,a2,a3; b1,b2; 1) over integers.  The series must hit a
// zero numerator Pochhammer before any denominator one; anything else is a
// broken termination bound.
inline Rational hyp3f2_terminating(long a1, long a2, long a3, long b1, long b2) {
    Rational sum(1), term(1);
    for (long t = 0;; ++t) {
        long n1 = a1 + t, n2 = a2 + t, n3 = a3 + t;
        if (n1 == 0 || n2 == 0 || n3 == 0) break;
        long d1 = b1 + t, d2 = b2 + t;
        if (d1 == 0 || d2 == 0)
            throw InternalError("3F2 ran into a denominator pole before terminating");
        term *= frac(n1 * n2, d1 * (t + 1));
        term *= frac(n3, d2);
        sum += term;
        if (t > 4096) throw InternalError("3F2 did not terminate");
    }
    return sum;
}

}  // namespace detail

// General reduced CG of the coupling, one target state at a time:
//   <(l,0) nu1'; (l-nu1')/2 ; (0,l) l+s-nu1'-p; ... || (s,s) 2s-p; I>.
// Evaluated as the explicit single sum over nu1 with the terminating 3F2
// factor; bounds come from factorial positivity.
inline ExactReal reduced_cg_3f2(int lambda, int sigma, int nu1p, int p, HalfInt I) {
    const long l = lambda, s = sigma, v = nu1p;
    const long tI = I.tw;
    if (s < 0 || s > l) throw OutOfRange("sigma must lie in [0, lambda]");
    if (!multiplet_exists({sigma, sigma}, 2 * sigma - p, I))
        throw NonexistentTarget("(s,s) state at p=" + std::to_string(p));
    if (v < 0 || v > l || (tI + s - p) % 2 != 0)
        throw NonexistentTarget("source labels out of range");
    // factorial arguments of the prefactor must be nonnegative
    long f1 = s + (s - p - tI) / 2;          // (s - I + (s-p)/2)
    long f2 = s + (s - p + tI) / 2 + 1;      // (s + I + (s-p)/2 + 1)
    long f3 = v + p - s;                     // (nu1' + p - sigma)
    long f4 = (tI + p + s) / 2 + 1;          // (1 + I + (p+s)/2)
    long g1 = l - v + (s - p - tI) / 2;      // (l - nu1' - I + (s-p)/2)
    long g2 = l - v + (s - p + tI) / 2 + 1;  // (1 + I + l - nu1' + (s-p)/2)
    long g3 = (s + p - tI) / 2;              // ((s+p)/2 - I)
    long n1 = l + s - v - p;                 // the (0,lambda) partner label
    if (f1 < 0 || f3 < 0 || g1 < 0 || g2 < 0 || g3 < 0 || n1 < 0 || n1 > l)
        return ExactReal();

    detail::SqrtRatioBuilder b;
    b.mul_factorial(f1);
    b.mul_factorial(f2);
    b.mul_factorial(l - s);
    b.mul_integer(2 * sigma + 2);  // bare factor, not a factorial
    b.mul_factorial(f3);
    b.mul_factorial(f4);
    b.div_factorial(l + s + 2);
    b.div_factorial(v);
    b.div_factorial(g1);
    b.div_factorial(g2);
    b.div_factorial(g3);
    ExactReal pre = ExactReal(Rational(parity(static_cast<long>(l)))) *
                    ExactReal(Rational(factorial(l - v)) / Rational(factorial(s))) *
                    b.take_sqrt();

    const long lo = std::max(s, v);
    const long hi = std::min({l, v + static_cast<long>(p), l + (s + p - tI) / 2});
    Rational sum(0);
    for (long nu1 = lo; nu1 <= hi; ++nu1) {
        Rational weight = Rational(factorial(l - nu1 + (s + p - tI) / 2)) *
                          Rational(factorial(nu1)) /
                          (Rational(factorial(nu1 - v)) * Rational(factorial(p - nu1 + v)) *
                           Rational(factorial(nu1 - s)) * Rational(factorial(l - nu1)));
        Rational hyp = detail::hyp3f2_terminating(nu1 - l, v - l + (tI + p - s) / 2,
                                                  1 + (tI + s - p) / 2, v - l,
                                                  nu1 - l + (tI - p - s) / 2);
        Rational term = weight * hyp;
        sum += (nu1 % 2 == 0) ? term : -term;
    }
    return pre * ExactReal(sum);
}

struct TensorOpCoeff {
    int lambda = 0;
    int sigma = 0;
    StateLabel target;                           // the (sigma,sigma) component label
    std::vector<StateLabel> basis;               // (lambda,0) states in standard order
    std::vector<std::vector<ExactReal>> matrix;  // [bra][ket]
};

// T^lambda_{(s,s) nu I} = sum CG((l,0) nu' I'; (0,l) n I2 | (s,s) nu I)
//   (-1)^{n2} |(l,0) nu' I'><(l,0) n~ I2|  with n~ = (l-n1, l-n2, l-n3).
// Everything is built from the closed forms of this module (and su(2) CGs),
// not from the general 9j engine.
inline TensorOpCoeff tensor_operator_coeffs(int lambda, int sigma, const StateLabel& target) {
    if (sigma > lambda) throw OutOfRange("tensor_operator_coeffs needs sigma <= lambda");
    if (target.irrep != IrrepLabel{sigma, sigma} || !target.valid())
        throw OutOfRange("target must be a (sigma,sigma) state");
    TensorOpCoeff out{lambda, sigma, target, enumerate_states({lambda, 0}), {}};
    const size_t n = out.basis.size();
    out.matrix.assign(n, std::vector<ExactReal>(n));
    std::map<std::array<int, 3>, size_t> index;
    for (size_t i = 0; i < n; ++i) index[out.basis[i].nu] = i;

    const int p = 2 * sigma - target.nu[0];
    const int k = lambda - sigma;  // grade of (l,0) x (0,l) -> (s,s)
    for (size_t i = 0; i < n; ++i) {
        const StateLabel& w1 = out.basis[i];  // (lambda,0) nu' I'
        // occupation balance fixes the (0,lambda) labels
        std::array<int, 3> n2state;
        bool ok = true;
        for (int c = 0; c < 3; ++c) {
            n2state[c] = target.nu[c] + k - w1.nu[c];
            if (n2state[c] < 0) ok = false;
        }
        if (!ok) continue;
        // (0,lambda) states have I2 fixed by n1: I2 = (2*lambda - ... use validity scan
        for (HalfInt I2 : multiplet_spins({0, lambda}, n2state[0])) {
            StateLabel w2{{0, lambda}, n2state, I2};
            if (!w2.valid()) continue;
            // reduced x su(2) CG, reduced from the 3F2 closed form
            ExactReal red = reduced_cg_3f2(lambda, sigma, w1.nu[0], p, target.I);
            ExactReal cg = clebsch_gordan(w1.I, w1.m23(), w2.I, w2.m23(), target.I,
                                          target.m23());
            if (cg.is_zero() || red.is_zero()) continue;
            std::array<int, 3> tilde{lambda - w2.nu[0], lambda - w2.nu[1], lambda - w2.nu[2]};
            auto it = index.find(tilde);
            if (it == index.end()) continue;
            StateLabel bra_ket = out.basis[it->second];
            if (bra_ket.I != w2.I) {
                // the (lambda,0) state at tilde occupations has a unique I;
                // it must match the (0,lambda) partner's
                continue;
            }
            int phase = parity(static_cast<long>(w2.nu[1]));
            out.matrix[i][it->second] += ExactReal(Rational(phase)) * red * cg;
        }
    }
    return out;
}

}  // namespace su3cg
