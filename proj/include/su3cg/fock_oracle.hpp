#pragma once

#include <map>
#include <tuple>

#include "su3cg/su2_wigner.hpp"
#include "su3cg/su3_rep.hpp"

namespace su3cg {

// Brute-force verification layer: states realized as exact polynomials in
// oscillator creation operators (Bargmann monomial basis, so generators act
// with integer coefficients).  Coupled target states are found from first
// principles: the highest weight as the nullspace of the raising operators
// on the weight-matched product basis, every other state by applying the
// explicit lowering-monomial combination that produces it in the
// single-system model.  No reduced matrix element or 6j/9j enters here.

// Mode index: system*9 + row*3 + column (all 0-based).  Single-system vectors
// only populate modes 0..8.
using FockMonomial = std::array<int, 18>;

inline int fock_mode(int system, int row, int col) { return system * 9 + row * 3 + col; }

class FockVector {
  public:
    std::map<FockMonomial, ExactReal> terms;

    bool is_zero() const { return terms.empty(); }

    void add(const FockMonomial& m, const ExactReal& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms.erase(it);
        }
    }

    FockVector operator+(const FockVector& o) const {
        FockVector out = *this;
        for (const auto& [m, c] : o.terms) out.add(m, c);
        return out;
    }

    FockVector operator*(const ExactReal& s) const {
        FockVector out;
        if (s.is_zero()) return out;
        for (const auto& [m, c] : terms) out.terms.emplace(m, c * s);
        return out;
    }

    // Polynomial product (monomial exponents add).
    FockVector operator*(const FockVector& o) const {
        FockVector out;
        for (const auto& [m1, c1] : terms) {
            for (const auto& [m2, c2] : o.terms) {
                FockMonomial m = m1;
                for (size_t i = 0; i < m.size(); ++i) m[i] += m2[i];
                out.add(m, c1 * c2);
            }
        }
        return out;
    }

    // <u|v> with monomial weights prod(e!).
    friend ExactReal inner(const FockVector& u, const FockVector& v) {
        ExactReal sum;
        auto iu = u.terms.begin();
        auto iv = v.terms.begin();
        while (iu != u.terms.end() && iv != v.terms.end()) {
            if (iu->first < iv->first) {
                ++iu;
            } else if (iv->first < iu->first) {
                ++iv;
            } else {
                Rational w(1);
                for (int e : iu->first) w *= Rational(factorial(e));
                sum += iu->second * iv->second * ExactReal(w);
                ++iu;
                ++iv;
            }
        }
        return sum;
    }

    ExactReal norm2() const { return inner(*this, *this); }
};

// C_ij = sum_a adag_{i a} a_{j a} acting within one system (or both for the
// coupled algebra).  In the monomial basis a_{j a} differentiates.
inline FockVector apply_generator(const FockVector& v, int i, int j,
                                  int system = -1 /* -1: both */) {
    FockVector out;
    for (const auto& [m, c] : v.terms) {
        for (int s = 0; s < 2; ++s) {
            if (system >= 0 && s != system) continue;
            for (int col = 0; col < 3; ++col) {
                int src = fock_mode(s, j - 1, col);
                int dst = fock_mode(s, i - 1, col);
                if (m[src] == 0) continue;
                FockMonomial t = m;
                t[src] -= 1;
                t[dst] += 1;
                out.add(t, c * ExactReal(Rational(m[src])));
            }
        }
    }
    return out;
}

namespace detail {

// |j m> of row i as a two-mode monomial with 1/sqrt((j+m)!(j-m)!).
inline FockVector schwinger_state(int system, int row, HalfInt j, HalfInt m) {
    int a = (j + m).as_int();
    int b = (j - m).as_int();
    SqrtRatioBuilder norm;
    norm.div_factorial(a);
    norm.div_factorial(b);
    FockMonomial mono{};
    mono[fock_mode(system, row, 0)] = a;
    mono[fock_mode(system, row, 1)] = b;
    FockVector v;
    v.add(mono, norm.take_sqrt());
    return v;
}

}  // namespace detail

// The double-CG construction of a basis state as a polynomial in one
// system's nine modes (column 3 unused for single-irrep states).
inline FockVector realize_state(const StateLabel& s, int system = 0) {
    if (!s.valid()) throw OutOfRange("realize_state: invalid label " + s.to_string());
    const HalfInt j1 = HalfInt::from_twice(s.nu[0]);
    const HalfInt j2 = HalfInt::from_twice(s.nu[1]);
    const HalfInt j3 = HalfInt::from_twice(s.nu[2]);
    const HalfInt half_lambda = HalfInt::from_twice(s.irrep.lambda);
    FockVector out;
    for (int tm3 = -j3.tw; tm3 <= j3.tw; tm3 += 2) {
        for (int tm2 = -j2.tw; tm2 <= j2.tw; tm2 += 2) {
            HalfInt m3 = HalfInt::from_twice(tm3), m2 = HalfInt::from_twice(tm2);
            HalfInt N = m3 + m2;
            if (abs(N) > s.I) continue;
            HalfInt m1 = half_lambda - N;
            if (abs(m1) > j1) continue;
            ExactReal c = clebsch_gordan(j3, m3, j2, m2, s.I, N) *
                          clebsch_gordan(s.I, N, j1, m1, half_lambda, half_lambda);
            if (c.is_zero()) continue;
            FockVector mono = detail::schwinger_state(system, 0, j1, m1) *
                              detail::schwinger_state(system, 1, j2, m2) *
                              detail::schwinger_state(system, 2, j3, m3);
            out = out + mono * c;
        }
    }
    return out;
}

namespace detail {

// det of the 3x3 creation-operator matrix of one system's modes (the
// grade factor).
inline FockVector determinant_operator() {
    FockVector det;
    const int perm[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
    for (int p = 0; p < 6; ++p) {
        FockMonomial m{};
        for (int row = 0; row < 3; ++row) m[fock_mode(0, row, perm[p][row])] += 1;
        det.add(m, ExactReal(Rational(p < 3 ? 1 : -1)));
    }
    return det;
}

// Coproduct: substitute each single-system mode x_m by y_m + z_m (the same
// mode in systems 0 and 1) and expand binomially.
inline FockVector coproduct(const FockVector& v) {
    FockVector out;
    for (const auto& [m, c] : v.terms) {
        std::vector<std::pair<FockMonomial, Int>> expansion{{FockMonomial{}, Int(1)}};
        for (int mode = 0; mode < 9; ++mode) {
            int e = m[mode];
            if (e == 0) continue;
            std::vector<std::pair<FockMonomial, Int>> next;
            next.reserve(expansion.size() * (e + 1));
            for (const auto& [mono, w] : expansion) {
                for (int ja = 0; ja <= e; ++ja) {
                    FockMonomial t = mono;
                    t[mode] = ja;
                    t[9 + mode] = e - ja;
                    next.emplace_back(t, w * binomial(e, ja));
                }
            }
            expansion = std::move(next);
        }
        for (const auto& [mono, w] : expansion) out.add(mono, c * ExactReal(Rational(w)));
    }
    return out;
}

// Exact nullspace of the rows (indexed by arbitrary keys) over ExactReal.
template <typename RowKey>
inline std::vector<std::vector<ExactReal>> nullspace(
    std::map<RowKey, std::vector<ExactReal>>& rows, size_t ncols) {
    std::vector<std::pair<size_t, std::vector<ExactReal>>> pivots;
    for (auto& [key, row] : rows) {
        for (const auto& [pc, prow] : pivots)
            if (!row[pc].is_zero()) {
                ExactReal f = row[pc];
                for (size_t i = 0; i < ncols; ++i) row[i] -= f * prow[i];
            }
        size_t col = 0;
        while (col < ncols && row[col].is_zero()) ++col;
        if (col == ncols) continue;
        ExactReal inv = ExactReal(1) / row[col];
        for (auto& x : row) x *= inv;
        for (auto& [pc, prow] : pivots)
            if (!prow[col].is_zero()) {
                ExactReal f = prow[col];
                for (size_t i = 0; i < ncols; ++i) prow[i] -= f * row[i];
            }
        pivots.emplace_back(col, row);
    }
    std::vector<bool> is_pivot(ncols, false);
    for (const auto& [pc, prow] : pivots) is_pivot[pc] = true;
    std::vector<std::vector<ExactReal>> basis;
    for (size_t free = 0; free < ncols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<ExactReal> v(ncols);
        v[free] = ExactReal(1);
        for (const auto& [pc, prow] : pivots) v[pc] = -prow[free];
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace detail

// Coupled target realization by coproduct of the det^k-multiplied
// double-CG polynomial.  Its projection onto the product of factor irreps is an
// intertwiner image, but the proportionality constant can vanish; the
// projection-based oracle below is used for actual comparisons.
inline FockVector realize_coupled_target(const StateLabel& target, int grade_k) {
    FockVector v = realize_state(target, 0);
    if (grade_k > 0) {
        FockVector det = detail::determinant_operator();
        for (int i = 0; i < grade_k; ++i) v = v * det;
    }
    return detail::coproduct(v);
}

// Full-CG column of one coupled target state over all weight-matching
// product pairs.
struct OracleColumn {
    StateLabel target;
    std::vector<std::tuple<StateLabel, StateLabel, ExactReal>> entries;
};

class FockOracle {
  public:
    FockOracle(IrrepLabel left, IrrepLabel right, long dim_cap = 100)
        : left_(left), right_(right) {
        if (dimension(left) * dimension(right) > dim_cap)
            throw TooLarge(left.to_string() + " x " + right.to_string() + " product dim " +
                           std::to_string(dimension(left) * dimension(right)));
    }

    // Orthonormal-pair basis at fixed total occupations.
    std::vector<std::pair<StateLabel, StateLabel>> pair_basis(std::array<int, 3> occ) const {
        std::vector<std::pair<StateLabel, StateLabel>> out;
        for (const auto& w1 : enumerate_states(left_)) {
            std::array<int, 3> need;
            bool ok = true;
            for (int i = 0; i < 3; ++i) {
                need[i] = occ[i] - w1.nu[i];
                if (need[i] < 0) ok = false;
            }
            if (!ok) continue;
            for (const auto& w2 : enumerate_states(right_))
                if (w2.nu == need) out.push_back({w1, w2});
        }
        return out;
    }

    // Coupled highest-weight space of one target irrep at grade k: vectors of
    // coefficients over the hw pair basis, annihilated by C12 and C23.
    // The basis is deterministic (reduced echelon, free columns in pair-basis
    // order); dimension equals the outer multiplicity.
    std::vector<std::vector<ExactReal>> hw_space(IrrepLabel target, int grade_k) const {
        StateLabel hw = highest_weight(target);
        std::array<int, 3> occ{hw.nu[0] + grade_k, hw.nu[1] + grade_k, hw.nu[2] + grade_k};
        auto pairs = pair_basis(occ);
        std::map<std::pair<int, FockMonomial>, std::vector<ExactReal>> rows;
        for (size_t idx = 0; idx < pairs.size(); ++idx) {
            FockVector pv = pair_vector(pairs[idx]);
            int which = 0;
            for (auto [gi, gj] : {std::pair{1, 2}, {2, 3}}) {
                FockVector image = apply_generator(pv, gi, gj);
                for (const auto& [mono, c] : image.terms) {
                    auto& row = rows[{which, mono}];
                    row.resize(pairs.size());
                    row[idx] += c;
                }
                ++which;
            }
        }
        for (auto& [key, row] : rows) row.resize(pairs.size());
        return detail::nullspace(rows, pairs.size());
    }

    // The lowering-monomial combination mapping the single-system hw of
    // `target.irrep` to `target`, applied to an 18-mode vector.
    FockVector lower_to(const StateLabel& target, const FockVector& coupled_hw) const {
        IrrepLabel r = target.irrep;
        StateLabel hw = highest_weight(r);
        int dx_pool = hw.nu[0] - target.nu[0];  // x + y (C21 and C31 count)
        int d3 = target.nu[2] - hw.nu[2];       // y + z
        if (dx_pool < 0 || d3 < 0) throw OutOfRange("lower_to: not below hw");
        // monomials C32^z C31^y C21^x with x = dx_pool - y, z = d3 - y
        std::vector<std::array<int, 3>> monos;
        for (int y = 0; y <= std::min(dx_pool, d3); ++y) {
            int x = dx_pool - y, z = d3 - y;
            if (x < 0 || z < 0) continue;
            monos.push_back({x, y, z});
        }
        // single-system images of the hw under each monomial
        FockVector hw_single = realize_state(hw, 0);
        std::vector<FockVector> images;
        for (const auto& m : monos) images.push_back(apply_monomial(hw_single, m, 0));
        // solve sum c_m image_m = realize(target) on the weight-space basis
        std::vector<StateLabel> wbasis;
        for (HalfInt I : weight_spins(r, target.nu)) wbasis.push_back({r, target.nu, I});
        std::map<int, std::vector<ExactReal>> rows;  // one row per basis state
        std::vector<ExactReal> rhs(wbasis.size());
        for (size_t s = 0; s < wbasis.size(); ++s) {
            FockVector sv = realize_state(wbasis[s], 0);
            auto& row = rows[static_cast<int>(s)];
            row.resize(monos.size() + 1);
            for (size_t m = 0; m < monos.size(); ++m) row[m] = inner(sv, images[m]);
            row[monos.size()] = (wbasis[s] == target) ? ExactReal(1) : ExactReal();
        }
        // solve by elimination on the augmented matrix
        auto null = detail::nullspace(rows, monos.size() + 1);
        // pick a nullspace vector with nonzero last coordinate: c = -v/v_last
        for (const auto& v : null) {
            if (v.back().is_zero()) continue;
            ExactReal inv = ExactReal(-1) / v.back();
            FockVector out;
            for (size_t m = 0; m < monos.size(); ++m) {
                ExactReal c = v[m] * inv;
                if (c.is_zero()) continue;
                out = out + apply_monomial(coupled_hw, monos[m], -1) * c;
            }
            return out;
        }
        throw InternalError("lowering system is inconsistent for " + target.to_string());
    }

    FockVector pair_vector(const std::pair<StateLabel, StateLabel>& p) const {
        return realized(p.first, 0) * realized(p.second, 1);
    }

    const FockVector& realized(const StateLabel& s, int system) const {
        auto& cache = system == 0 ? cache0_ : cache1_;
        auto it = cache.find(s);
        if (it == cache.end()) it = cache.emplace(s, realize_state(s, system)).first;
        return it->second;
    }

    IrrepLabel left() const { return left_; }
    IrrepLabel right() const { return right_; }

  private:
    static std::vector<HalfInt> weight_spins(IrrepLabel r, std::array<int, 3> nu) {
        std::vector<HalfInt> out;
        int lo = std::max(std::abs(nu[1] - nu[2]), std::abs(r.lambda - nu[0]));
        int hi = std::min(nu[1] + nu[2], r.lambda + nu[0]);
        for (int tw = hi; tw >= lo; tw -= 2) out.push_back(HalfInt::from_twice(tw));
        return out;
    }

    // C32^z C31^y C21^x applied right-to-left.
    static FockVector apply_monomial(const FockVector& v, std::array<int, 3> xyz, int system) {
        FockVector out = v;
        for (int i = 0; i < xyz[0]; ++i) out = apply_generator(out, 2, 1, system);
        for (int i = 0; i < xyz[1]; ++i) out = apply_generator(out, 3, 1, system);
        for (int i = 0; i < xyz[2]; ++i) out = apply_generator(out, 3, 2, system);
        return out;
    }

    IrrepLabel left_, right_;
    mutable std::map<StateLabel, FockVector> cache0_, cache1_;
};

}  // namespace su3cg
