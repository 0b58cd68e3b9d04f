#pragma once

#include <memory>
#include <optional>

#include "su3cg/matrix_elements.hpp"

namespace su3cg {

// One CG problem instance: an ordered pair of factors, a target irrep, and a
// 1-based multiplicity index rho.
struct CouplingQuery {
    IrrepLabel left, right, target;
    int rho = 1;

    friend constexpr auto operator<=>(const CouplingQuery&, const CouplingQuery&) = default;
    std::string to_string() const {
        return left.to_string() + " x " + right.to_string() + " -> " + target.to_string() +
               " [rho=" + std::to_string(rho) + "]";
    }
};

// Reduced CG key for the target highest-weight expansion.
struct HwKey {
    int nu1 = 0;
    HalfInt J;
    int n1 = 0;
    HalfInt In;

    friend constexpr auto operator<=>(const HwKey&, const HwKey&) = default;
    std::string to_string() const {
        return "(" + std::to_string(nu1) + "," + std::to_string(J.tw) + "," +
               std::to_string(n1) + "," + std::to_string(In.tw) + ")";
    }
};

// Sweep order: decreasing nu1, then decreasing J, then decreasing In.
struct HwKeyLess {
    bool operator()(const HwKey& a, const HwKey& b) const {
        if (a.nu1 != b.nu1) return a.nu1 > b.nu1;
        if (a.J.tw != b.J.tw) return a.J.tw > b.J.tw;
        return a.In.tw > b.In.tw;
    }
};

enum class HwConvention {
    unique,         // multiplicity-free
    tabulated,      // the hard-coded (1,1) x (sigma,sigma) rho convention
    lexicographic,  // deterministic Gram-Schmidt basis, no distinguished convention
};

using HwEntries = std::map<HwKey, ExactReal, HwKeyLess>;

struct HwVector {
    CouplingQuery query;
    int grade_k = 0;
    HwConvention convention = HwConvention::unique;
    HwEntries entries;

    ExactReal at(const HwKey& k) const {
        auto it = entries.find(k);
        return it == entries.end() ? ExactReal() : it->second;
    }
};

enum class RecursionForm { eq_down, eq_up };  // the two two-term recursions

namespace detail {

struct HwContext {
    IrrepLabel left, right, target;
    int grade_k = 0;
    int total_u1 = 0;  // nu1 + n1 for every key
    HalfInt q2half;

    static HwContext make(const CouplingQuery& q) {
        HwContext c;
        c.left = q.left;
        c.right = q.right;
        c.target = q.target;
        c.grade_k = grade(q.left, q.right, q.target);
        c.total_u1 = q.target.lambda + q.target.mu + c.grade_k;
        c.q2half = HalfInt::from_twice(q.target.mu);
        return c;
    }

    bool key_valid(const HwKey& k) const {
        if (k.nu1 + k.n1 != total_u1) return false;
        return multiplet_exists(left, k.nu1, k.J) && multiplet_exists(right, k.n1, k.In) &&
               triangle(k.J, k.In, q2half);
    }

    std::vector<HwKey> enumerate_keys() const {
        std::vector<HwKey> keys;
        int hi = std::min(left.lambda + left.mu, total_u1);
        int lo = std::max(0, total_u1 - (right.lambda + right.mu));
        for (int nu1 = hi; nu1 >= lo; --nu1) {
            int n1 = total_u1 - nu1;
            for (HalfInt J : multiplet_spins(left, nu1))
                for (HalfInt In : multiplet_spins(right, n1))
                    if (triangle(J, In, q2half)) keys.push_back({nu1, J, n1, In});
        }
        return keys;
    }
};

struct StepTerm {
    HwKey source;
    ExactReal coeff;
};

// Eq-down step (direct recursion): computes key (v, Jt, n, Ip) from the two
// keys (v+1, Jp, n-1, Ip +- 1/2), for a chosen Jp in {Jt +- 1/2} whose left
// multiplet exists one layer up.  Generator rmes between existing multiplets
// never vanish, so the denominator is safe whenever Jp is admissible.
inline std::optional<std::vector<StepTerm>> step_down(const HwContext& c, const HwKey& t,
                                                      HalfInt Jp) {
    const int v = t.nu1;
    if (!multiplet_exists(c.left, v + 1, Jp)) return std::nullopt;
    const int p_left = c.left.lambda + c.left.mu - (v + 1);
    ExactReal den = rme_generator(c.left, p_left, Jp, t.J);
    const int p_right = c.right.lambda + c.right.mu - t.n1;
    std::vector<StepTerm> terms;
    for (int dIn : {+1, -1}) {
        HalfInt In = HalfInt::from_twice(t.In.tw + dIn);
        if (In.is_negative()) continue;
        HwKey s{v + 1, Jp, t.n1 - 1, In};
        if (!c.key_valid(s)) continue;
        ExactReal num = rme_generator(c.right, p_right, t.In, In);
        ExactReal sixj = wigner_6j(HalfInt::from_twice(1), Jp, t.J, c.q2half, t.In, In);
        if (sixj.is_zero() || num.is_zero()) continue;
        int phase = -parity(static_cast<long>(In.tw + Jp.tw + c.q2half.tw) / 2);
        ExactReal coeff = ExactReal(Rational((t.J.tw + 1) * phase)) * num * sixj / den;
        if (!coeff.is_zero()) terms.push_back({s, coeff});
    }
    return terms;
}

// Eq-up step (the slightly different recursion): computes key (v, Jp, n, It)
// from the two keys (v-1, Jp +- 1/2, n+1, Ipn), for a chosen Ipn in
// {It +- 1/2} whose right multiplet exists.
inline std::optional<std::vector<StepTerm>> step_up(const HwContext& c, const HwKey& t,
                                                    HalfInt Ipn) {
    if (!multiplet_exists(c.right, t.n1 + 1, Ipn)) return std::nullopt;
    const int p_right = c.right.lambda + c.right.mu - (t.n1 + 1);
    ExactReal den = rme_generator(c.right, p_right, Ipn, t.In);
    const int p_left = c.left.lambda + c.left.mu - t.nu1;
    std::vector<StepTerm> terms;
    for (int dJ : {+1, -1}) {
        HalfInt J = HalfInt::from_twice(t.J.tw + dJ);
        if (J.is_negative()) continue;
        HwKey s{t.nu1 - 1, J, t.n1 + 1, Ipn};
        if (!c.key_valid(s)) continue;
        ExactReal num = rme_generator(c.left, p_left, t.J, J);
        ExactReal sixj = wigner_6j(HalfInt::from_twice(1), t.J, J, c.q2half, Ipn, t.In);
        if (sixj.is_zero() || num.is_zero()) continue;
        int phase = parity(static_cast<long>(t.J.tw - t.In.tw + c.q2half.tw) / 2 + Ipn.tw);
        ExactReal coeff = ExactReal(Rational((t.In.tw + 1) * phase)) * num * sixj / den;
        if (!coeff.is_zero()) terms.push_back({s, coeff});
    }
    return terms;
}

// Linear expression over solver parameters.
struct LinExpr {
    std::vector<ExactReal> c;

    explicit LinExpr(size_t n = 0) : c(n) {}
    static LinExpr unit(size_t n, size_t i) {
        LinExpr e(n);
        e.c[i] = ExactReal(1);
        return e;
    }
    void add_scaled(const LinExpr& o, const ExactReal& s) {
        for (size_t i = 0; i < c.size(); ++i) c[i] += o.c[i] * s;
    }
    bool is_zero() const {
        for (const auto& x : c)
            if (!x.is_zero()) return false;
        return true;
    }
    ExactReal eval(const std::vector<ExactReal>& params) const {
        ExactReal v;
        for (size_t i = 0; i < c.size(); ++i)
            if (!c[i].is_zero()) v += c[i] * params[i];
        return v;
    }
};

}  // namespace detail

// sqrt of an ExactReal that must be a nonnegative rational (norms of
// recursion solutions are).  Raises otherwise.
inline ExactReal exact_sqrt(const ExactReal& x) {
    if (x.is_zero()) return ExactReal();
    if (!x.is_rational())
        throw InternalError("sqrt of non-rational ExactReal: " + x.to_string());
    return ExactReal::sqrt_rational(x.as_rational());
}

// One application of either two-term recursion at target_key, reading the
// sources from `known`.  MissingSource when a structurally valid source is
// not present; ZeroDenominator when no admissible choice of the free label
// exists for the requested form.
inline ExactReal recursion_step(const CouplingQuery& q, const HwEntries& known,
                                const HwKey& target_key,
                                RecursionForm form = RecursionForm::eq_down) {
    auto c = detail::HwContext::make(q);
    if (!c.key_valid(target_key)) throw OutOfRange("invalid key " + target_key.to_string());
    for (int d : {+1, -1}) {
        auto terms = (form == RecursionForm::eq_down)
                         ? detail::step_down(c, target_key,
                                             HalfInt::from_twice(target_key.J.tw + d))
                         : detail::step_up(c, target_key,
                                           HalfInt::from_twice(target_key.In.tw + d));
        if (!terms) continue;
        ExactReal sum;
        for (const auto& t : *terms) {
            auto it = known.find(t.source);
            if (it == known.end())
                throw MissingSource(t.source.to_string() + " for " + target_key.to_string());
            sum += t.coeff * it->second;
        }
        return sum;
    }
    throw ZeroDenominator("no admissible recursion denominator at " + target_key.to_string());
}

namespace detail {

// General solver: seed the extreme layer with one parameter per key, sweep
// the chosen recursion across layers, then cut the parameter space down with
// every remaining recursion instance.  The surviving dimension is the outer
// multiplicity.
class GeneralHwSolver {
  public:
    GeneralHwSolver(const HwContext& ctx, RecursionForm form) : c_(ctx), form_(form) {
        keys_ = c_.enumerate_keys();
        if (form == RecursionForm::eq_up) std::reverse(keys_.begin(), keys_.end());
    }

    // Returns per-key linear expressions over free parameters, reduced so the
    // parameters span exactly the solution space.
    std::map<HwKey, LinExpr, HwKeyLess> solve() {
        std::map<HwKey, LinExpr, HwKeyLess> values;
        if (keys_.empty()) return values;
        // Seed layer = extreme nu1 of the sweep direction.
        int seed_layer = keys_.front().nu1;
        std::vector<HwKey> seeds;
        for (const auto& k : keys_)
            if (k.nu1 == seed_layer) seeds.push_back(k);
        size_t nparams = seeds.size();
        for (size_t i = 0; i < nparams; ++i) values.emplace(seeds[i], LinExpr::unit(nparams, i));

        for (const auto& key : keys_) {
            if (values.count(key)) continue;
            LinExpr expr(nparams);
            bool done = false;
            for (int d : {+1, -1}) {
                auto terms = apply_form(key, d);
                if (!terms) continue;
                for (const auto& t : *terms) {
                    auto it = values.find(t.source);
                    if (it == values.end())
                        throw InternalError("sweep source not ready: " + t.source.to_string());
                    expr.add_scaled(it->second, t.coeff);
                }
                done = true;
                break;
            }
            if (!done) throw InternalError("no recursion step reaches " + key.to_string());
            values.emplace(key, std::move(expr));
        }

        reduce(values, nparams);
        return values;
    }

  private:
    std::optional<std::vector<StepTerm>> apply_form(const HwKey& key, int d) {
        return form_ == RecursionForm::eq_down
                   ? step_down(c_, key, HalfInt::from_twice(key.J.tw + d))
                   : step_up(c_, key, HalfInt::from_twice(key.In.tw + d));
    }

    // Residuals of every recursion instance (both forms, both free-label
    // choices) give homogeneous constraints on the parameters.
    void reduce(std::map<HwKey, LinExpr, HwKeyLess>& values, size_t nparams) {
        std::vector<LinExpr> rows;
        auto expr_of = [&](const HwKey& k) -> const LinExpr* {
            auto it = values.find(k);
            return it == values.end() ? nullptr : &it->second;
        };
        for (const auto& [key, expr] : values) {
            for (int form = 0; form < 2; ++form) {
                for (int d : {+1, -1}) {
                    auto terms = form == 0
                                     ? step_down(c_, key, HalfInt::from_twice(key.J.tw + d))
                                     : step_up(c_, key, HalfInt::from_twice(key.In.tw + d));
                    if (!terms) continue;
                    LinExpr residual = expr;
                    for (const auto& t : *terms) {
                        if (const LinExpr* src = expr_of(t.source))
                            residual.add_scaled(*src, -t.coeff);
                        else
                            throw InternalError("residual source missing");
                    }
                    if (!residual.is_zero()) rows.push_back(std::move(residual));
                }
            }
        }
        if (rows.empty()) return;

        // Exact Gaussian elimination; substitute pivots back into values.
        std::vector<std::pair<size_t, LinExpr>> pivots;  // pivot column -> row
        for (auto& row : rows) {
            for (const auto& [col, prow] : pivots)
                if (!row.c[col].is_zero()) row.add_scaled(prow, -row.c[col]);
            // Pivot on the last nonzero column so the free parameters sit at
            // the lexicographically largest seed keys.
            size_t col = nparams;
            while (col > 0 && row.c[col - 1].is_zero()) --col;
            if (col == 0) continue;
            --col;
            ExactReal inv = ExactReal(1) / row.c[col];
            for (auto& x : row.c) x *= inv;
            for (auto& [pcol, prow] : pivots)
                if (!prow.c[col].is_zero()) prow.add_scaled(row, -prow.c[col]);
            pivots.emplace_back(col, row);
        }
        // Pivot params become combinations of the free ones: t_col = -sum_rest.
        std::vector<LinExpr> subst;
        std::vector<bool> is_pivot(nparams, false);
        for (const auto& [col, prow] : pivots) is_pivot[col] = true;
        size_t nfree = 0;
        std::vector<size_t> free_index(nparams, SIZE_MAX);
        for (size_t i = 0; i < nparams; ++i)
            if (!is_pivot[i]) free_index[i] = nfree++;
        subst.assign(nparams, LinExpr(nfree));
        for (size_t i = 0; i < nparams; ++i)
            if (!is_pivot[i]) subst[i] = LinExpr::unit(nfree, free_index[i]);
        for (const auto& [col, prow] : pivots) {
            LinExpr e(nfree);
            for (size_t i = 0; i < nparams; ++i) {
                if (i == col || prow.c[i].is_zero()) continue;
                e.add_scaled(subst[i], -prow.c[i]);
            }
            subst[col] = std::move(e);
        }
        for (auto& [key, expr] : values) {
            LinExpr e(nfree);
            for (size_t i = 0; i < nparams; ++i)
                if (!expr.c[i].is_zero()) e.add_scaled(subst[i], expr.c[i]);
            expr = std::move(e);
        }
    }

    HwContext c_;
    RecursionForm form_;
    std::vector<HwKey> keys_;
};

// Normalize to unit norm with the seed-sign convention: the first key in
// sweep order with a nonzero coefficient (left-factor hw, largest In, per the
// phase convention) gets a positive value.
inline void normalize_and_sign(HwVector& hw) {
    ExactReal norm2;
    for (const auto& [k, v] : hw.entries) norm2 += v * v;
    if (norm2.is_zero()) throw InternalError("hw vector has zero norm");
    ExactReal inv = ExactReal(1) / exact_sqrt(norm2);
    int sign = 0;
    for (auto& [k, v] : hw.entries) {
        v *= inv;
        if (sign == 0 && !v.is_zero()) sign = v.sign();
    }
    if (sign < 0)
        for (auto& [k, v] : hw.entries) v = -v;
}

inline void orthonormalize(std::vector<HwVector>& basis) {
    for (size_t i = 0; i < basis.size(); ++i) {
        for (size_t j = 0; j < i; ++j) {
            ExactReal overlap;
            for (const auto& [k, v] : basis[i].entries) overlap += v * basis[j].at(k);
            if (overlap.is_zero()) continue;
            for (auto& [k, v] : basis[i].entries) v -= overlap * basis[j].at(k);
        }
        normalize_and_sign(basis[i]);
    }
}

}  // namespace detail

// k = 0 closed form: the highest weight is a single su(2)_12 multiplet, so
// every reduced CG is one su(2) CG (phase already adjusted to the seed
// convention).  Only keys on the nu3 = n3 = 0 diagonal are nonzero.
inline HwVector hw_k0_closed_form(const CouplingQuery& q) {
    auto c = detail::HwContext::make(q);
    if (c.grade_k != 0) throw GradeNotZero(q.to_string());
    HwVector hw{q, 0, HwConvention::unique, {}};
    const int t1 = q.left.quanta(), t2 = q.right.quanta();
    for (const auto& key : c.enumerate_keys()) {
        ExactReal v;
        if (key.J.tw == t1 - key.nu1 && key.In.tw == t2 - key.n1) {
            v = clebsch_gordan(HalfInt::from_twice(q.left.lambda),
                               HalfInt::from_twice(2 * key.nu1 - 2 * q.left.mu - q.left.lambda),
                               HalfInt::from_twice(q.right.lambda),
                               HalfInt::from_twice(2 * key.n1 - 2 * q.right.mu - q.right.lambda),
                               HalfInt::from_twice(q.target.lambda),
                               HalfInt::from_twice(q.target.lambda));
        }
        hw.entries.emplace(key, v);
    }
    detail::normalize_and_sign(hw);  // closed form is already normalized; re-asserts sign
    return hw;
}

namespace detail {

// Specialized (lambda,0) right-factor steps: the sum in the direct recursion
// collapses (In is a function of n1), leaving one explicit coefficient per
// step.  J-raising connects chain neighbours, J-lowering crosses chains.
inline ExactReal lambda0_step_coeff(const HwContext& c, int nu1_src, HalfInt Jsrc, int n1_tgt,
                                    bool j_plus) {
    const long long p1 = c.left.lambda, q1 = c.left.mu;
    const long long lam = c.right.lambda, q2 = c.target.mu;
    const long long tJ = Jsrc.tw;  // 2J'
    const long long nu1 = nu1_src, n1p = n1_tgt;
    long long num, den;
    int sign;
    if (j_plus) {
        // target J = J' + 1/2; doubled factors carry a net factor 2
        num = 2 * n1p * (tJ + 2) * (q2 + lam - n1p + 1 - tJ) * (q2 - lam + n1p + 1 + tJ);
        den = (tJ + 1) * (p1 + nu1 - tJ) * (p1 - nu1 + tJ + 2) * (p1 + 2 * q1 - nu1 + tJ + 4);
        sign = -1;
    } else {
        // target J = J' - 1/2
        num = 2 * n1p * tJ * (1 - q2 + lam - n1p + tJ) * (3 + q2 + lam - n1p + tJ);
        den = (tJ + 1) * (p1 + nu1 + tJ + 2) * (p1 + 2 * q1 - nu1 - tJ + 2) * (nu1 - p1 + tJ);
        sign = 1;
    }
    if (num == 0) return ExactReal();
    if (den <= 0 || num < 0)
        throw InternalError("negative radicand in (lambda,0) chain step");
    return ExactReal(Rational(sign)) * ExactReal::sqrt_rational(frac(num, den));
}

}  // namespace detail

// Chain solver for right factor (lambda,0): seed at the left-factor highest
// weight, then fill layer by layer with the specialized one-term steps.
inline HwVector hw_lambda0_chains(const CouplingQuery& q) {
    if (q.right.mu != 0) throw NotApplicable("right factor must be (lambda,0)");
    auto c = detail::HwContext::make(q);
    auto keys = c.enumerate_keys();
    if (keys.empty()) throw NotInProduct(q.to_string());
    HwVector hw{q, c.grade_k, HwConvention::unique, {}};
    const int top = keys.front().nu1;
    for (const auto& key : keys) {
        if (key.nu1 == top) {
            hw.entries.emplace(key, ExactReal(1));  // single seed (In fixed by n1)
            continue;
        }
        ExactReal value;
        bool stepped = false;
        for (int d : {-1, +1}) {  // prefer the J-raising step (source J = J - 1/2)
            HalfInt Jsrc = HalfInt::from_twice(key.J.tw + d);
            if (Jsrc.is_negative() || !multiplet_exists(c.left, key.nu1 + 1, Jsrc)) continue;
            HwKey src{key.nu1 + 1, Jsrc, key.n1 - 1, HalfInt::from_twice(q.right.lambda - key.n1 + 1)};
            auto it = hw.entries.find(src);
            ExactReal sval = (it == hw.entries.end()) ? ExactReal() : it->second;
            value = sval.is_zero() ? ExactReal()
                                   : detail::lambda0_step_coeff(c, key.nu1 + 1, Jsrc, key.n1,
                                                                /*j_plus=*/d == -1) *
                                         sval;
            stepped = true;
            break;
        }
        if (!stepped) throw InternalError("no chain step reaches " + key.to_string());
        hw.entries.emplace(key, value);
    }
    detail::normalize_and_sign(hw);
    return hw;
}

namespace detail {

// Closed-form columns for the two copies of (s,s) in (1,1) x (s,s), the
// convention that keeps generator matrix elements on the first copy.
inline std::vector<HwVector> tabulated_11_vectors(const CouplingQuery& q) {
    const long s = q.right.lambda;
    HwVector r1{q, 1, HwConvention::tabulated, {}};
    HwVector r2 = r1;
    r2.query.rho = 2;
    auto key = [&](int nu1, int twJ, int twIn) {
        return HwKey{nu1, HalfInt::from_twice(twJ), 2 * static_cast<int>(s) + 1 - nu1,
                     HalfInt::from_twice(twIn)};
    };
    auto rt = [](const Rational& r) { return ExactReal::sqrt_rational(r); };
    // <(1,1)1;1 ...|
    r1.entries[key(1, 2, s)] = ExactReal(frac(1, 2));
    r2.entries[key(1, 2, s)] = ExactReal(frac(-1, 2)) * rt(frac(3 * (2 * s + 1), 2 * s + 3));
    // <(1,1)1;0 ...|
    r1.entries[key(1, 0, s)] = ExactReal(frac(1, 2)) * rt(frac(3 * s, s + 2));
    r2.entries[key(1, 0, s)] =
        ExactReal(frac(1, 2)) * rt(frac(s * (2 * s + 1), (s + 2) * (2 * s + 3)));
    // <(1,1)2;1/2 ; (s,s)2s-1,(s+1)/2|
    r1.entries[key(2, 1, s + 1)] = rt(frac(s + 2, 2 * (s + 1) * (s + 2)));
    r2.entries[key(2, 1, s + 1)] = rt(frac(3 * (2 * s + 1), 2 * (s + 1) * (2 * s + 3)));
    // <(1,1)2;1/2 ; (s,s)2s-1,(s-1)/2|
    r1.entries[key(2, 1, s - 1)] = -rt(frac(2 * s + 1, 2 * (s + 1) * (s + 2)));
    r2.entries[key(2, 1, s - 1)] = rt(frac(3, 2 * (s + 1) * (s + 2) * (2 * s + 3)));
    // Fill the remaining valid keys with exact zeros.
    auto c = HwContext::make(q);
    for (const auto& k : c.enumerate_keys()) {
        r1.entries.try_emplace(k, ExactReal());
        r2.entries.try_emplace(k, ExactReal());
    }
    return {std::move(r1), std::move(r2)};
}

using HwBasisPtr = std::shared_ptr<const std::vector<HwVector>>;

inline HwBasisPtr solve_hw_basis_uncached(IrrepLabel left, IrrepLabel right, IrrepLabel target);

inline HwBasisPtr solve_hw_basis(IrrepLabel left, IrrepLabel right, IrrepLabel target) {
    using Key = std::array<int, 6>;
    static MemoCache<Key, HwBasisPtr> cache;
    Key key{left.lambda, left.mu, right.lambda, right.mu, target.lambda, target.mu};
    return cache.get_or_compute(key,
                                [&] { return solve_hw_basis_uncached(left, right, target); });
}

inline HwBasisPtr solve_hw_basis_uncached(IrrepLabel left, IrrepLabel right,
                                          IrrepLabel target) {
    CouplingQuery q{left, right, target, 1};
    const int mult = product_multiplicity(left, right, target);
    if (mult == 0) throw NotInProduct(q.to_string());
    auto c = HwContext::make(q);

    auto finish = [&](std::vector<HwVector> basis) {
        return std::make_shared<const std::vector<HwVector>>(std::move(basis));
    };

    if (mult == 1) {
        if (c.grade_k == 0) return finish({hw_k0_closed_form(q)});
        if (right.mu == 0) return finish({hw_lambda0_chains(q)});
    }
    if (mult == 2 && left == IrrepLabel{1, 1} && right == target &&
        right.lambda == right.mu && right.lambda >= 1) {
        return finish(tabulated_11_vectors(q));
    }

    GeneralHwSolver solver(c, RecursionForm::eq_down);
    auto exprs = solver.solve();
    size_t dim = exprs.empty() ? 0 : exprs.begin()->second.c.size();
    if (static_cast<int>(dim) != mult)
        throw InternalError("solution space dim " + std::to_string(dim) +
                            " != multiplicity " + std::to_string(mult) + " for " +
                            q.to_string());
    std::vector<HwVector> basis;
    for (size_t i = 0; i < dim; ++i) {
        HwVector hw{q, c.grade_k,
                    mult == 1 ? HwConvention::unique : HwConvention::lexicographic, {}};
        hw.query.rho = static_cast<int>(i) + 1;
        for (const auto& [key, expr] : exprs) hw.entries.emplace(key, expr.c[i]);
        basis.push_back(std::move(hw));
    }
    detail::orthonormalize(basis);
    return finish(basis);
}

}  // namespace detail

// Solve for the reduced CGs of the target highest weight.  Returns the full
// orthonormal basis of the solution space (one vector per multiplicity copy),
// normalized and signed per the seed convention.
inline std::vector<HwVector> solve_hw_all(const CouplingQuery& q) {
    return *detail::solve_hw_basis(q.left, q.right, q.target);
}

inline HwVector solve_hw(const CouplingQuery& q) {
    auto basis = detail::solve_hw_basis(q.left, q.right, q.target);
    if (q.rho < 1 || static_cast<size_t>(q.rho) > basis->size())
        throw NotInProduct("rho=" + std::to_string(q.rho) + " exceeds multiplicity " +
                           std::to_string(basis->size()) + " of " + q.to_string());
    return (*basis)[q.rho - 1];
}

// Independent solve with the other sweep direction, for cross-validation.
inline HwVector solve_hw_sweep(const CouplingQuery& q, RecursionForm form) {
    auto c = detail::HwContext::make(q);
    detail::GeneralHwSolver solver(c, form);
    auto exprs = solver.solve();
    size_t dim = exprs.empty() ? 0 : exprs.begin()->second.c.size();
    if (dim != 1)
        throw InternalError("solve_hw_sweep expects a multiplicity-free query, dim = " +
                            std::to_string(dim));
    HwVector hw{q, c.grade_k, HwConvention::unique, {}};
    for (const auto& [key, expr] : exprs) hw.entries.emplace(key, expr.c[0]);
    detail::normalize_and_sign(hw);
    return hw;
}

}  // namespace su3cg
