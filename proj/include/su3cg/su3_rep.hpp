#pragma once

#include <array>
#include <string>
#include <vector>

#include "su3cg/exact.hpp"

namespace su3cg {

struct IrrepLabel {
    int lambda = 0;
    int mu = 0;

    friend constexpr auto operator<=>(const IrrepLabel&, const IrrepLabel&) = default;
    IrrepLabel conjugate() const { return {mu, lambda}; }
    // Total oscillator quanta of any basis state.
    int quanta() const { return lambda + 2 * mu; }
    std::string to_string() const {
        return "(" + std::to_string(lambda) + "," + std::to_string(mu) + ")";
    }
};

inline long dimension(IrrepLabel r) {
    return static_cast<long>(r.lambda + 1) * (r.mu + 1) * (r.lambda + r.mu + 2) / 2;
}

// Basis state |(lambda,mu) nu1 nu2 nu3; I> in occupation labels.
// Weight is (nu1-nu2, nu2-nu3); the u(1) label is fixed by nu1 alone.
struct StateLabel {
    IrrepLabel irrep;
    std::array<int, 3> nu{0, 0, 0};
    HalfInt I;

    friend constexpr auto operator<=>(const StateLabel&, const StateLabel&) = default;

    std::array<int, 2> weight() const { return {nu[0] - nu[1], nu[1] - nu[2]}; }
    // su(2)_23 projection carried by the occupations.
    HalfInt m23() const { return HalfInt::from_twice(nu[1] - nu[2]); }

    bool valid() const {
        if (nu[0] < 0 || nu[1] < 0 || nu[2] < 0) return false;
        if (nu[0] + nu[1] + nu[2] != irrep.quanta()) return false;
        return triangle(HalfInt::from_twice(nu[1]), HalfInt::from_twice(nu[2]), I) &&
               triangle(I, HalfInt::from_twice(nu[0]), HalfInt::from_twice(irrep.lambda));
    }

    std::string to_string() const {
        return irrep.to_string() + std::to_string(nu[0]) + std::to_string(nu[1]) +
               std::to_string(nu[2]) + ";" + I.to_string();
    }
};

// The su(2)+u(1) multiplet (nu1, I) exists in (lambda,mu) iff some occupation
// split realizes it; bounds below come from the two triangle rules.
inline bool multiplet_exists(IrrepLabel r, int nu1, HalfInt I) {
    if (nu1 < 0 || nu1 > r.lambda + r.mu) return false;
    int rest = r.quanta() - nu1;  // nu2 + nu3
    if (rest < 0) return false;
    int lo = std::abs(r.lambda - nu1);
    int hi = std::min(rest, r.lambda + nu1);
    return I.tw >= lo && I.tw <= hi && (I.tw - lo) % 2 == 0;
}

// All I values of multiplets at fixed nu1, decreasing.
inline std::vector<HalfInt> multiplet_spins(IrrepLabel r, int nu1) {
    std::vector<HalfInt> out;
    if (nu1 < 0 || nu1 > r.lambda + r.mu) return out;
    int rest = r.quanta() - nu1;
    int lo = std::abs(r.lambda - nu1);
    int hi = std::min(rest, r.lambda + nu1);
    for (int tw = hi; tw >= lo; tw -= 2) out.push_back(HalfInt::from_twice(tw));
    return out;
}

// Number of I values available at a fixed occupation triple (the weight
// multiplicity at that point of the diagram).
inline int weight_multiplicity(IrrepLabel r, int nu1, int nu2, int nu3) {
    if (nu1 < 0 || nu2 < 0 || nu3 < 0 || nu1 + nu2 + nu3 != r.quanta()) return 0;
    int lo = std::max(std::abs(nu2 - nu3), std::abs(r.lambda - nu1));
    int hi = std::min(nu2 + nu3, r.lambda + nu1);
    if (hi < lo) return 0;
    return (hi - lo) / 2 + 1;
}

inline StateLabel highest_weight(IrrepLabel r) {
    return {r, {r.lambda + r.mu, r.mu, 0}, HalfInt::from_twice(r.mu)};
}

// All states, ordered by (nu1 desc, nu2 desc, I desc).
inline std::vector<StateLabel> enumerate_states(IrrepLabel r) {
    std::vector<StateLabel> out;
    const int total = r.quanta();
    for (int nu1 = r.lambda + r.mu; nu1 >= 0; --nu1) {
        for (int nu2 = total - nu1; nu2 >= 0; --nu2) {
            int nu3 = total - nu1 - nu2;
            if (nu3 < 0) continue;
            int lo = std::max(std::abs(nu2 - nu3), std::abs(r.lambda - nu1));
            int hi = std::min(nu2 + nu3, r.lambda + nu1);
            for (int tw = hi; tw >= lo; tw -= 2)
                out.push_back({r, {nu1, nu2, nu3}, HalfInt::from_twice(tw)});
        }
    }
    return out;
}

struct DecompEntry {
    IrrepLabel irrep;
    int multiplicity = 0;
    int grade_k = 0;
};

// Grade k of (a (x) b -> target): excitation balance divided by 3.
// NotInProduct when the balance is not a nonnegative multiple of 3 (this does
// not check full decomposition membership).
inline int grade(IrrepLabel a, IrrepLabel b, IrrepLabel target) {
    long num = a.lambda + b.lambda - target.lambda +
               2L * (a.mu + b.mu - target.mu);
    if (num % 3 != 0 || num < 0)
        throw NotInProduct(a.to_string() + " x " + b.to_string() + " -> " + target.to_string());
    return static_cast<int>(num / 3);
}

namespace detail {

// Dense weight-multiplicity grid over (w1, w2) = (nu1-nu2, nu2-nu3).
class WeightGrid {
  public:
    explicit WeightGrid(int radius) : radius_(radius), size_(2 * radius + 1) {
        data_.assign(static_cast<size_t>(size_) * size_, 0);
    }
    long long& at(int w1, int w2) {
        return data_[static_cast<size_t>(w1 + radius_) * size_ + (w2 + radius_)];
    }
    int radius() const { return radius_; }

  private:
    int radius_, size_;
    std::vector<long long> data_;
};

template <typename Fn>
void for_each_weight(IrrepLabel r, Fn&& fn) {
    const int total = r.quanta();
    for (int nu1 = 0; nu1 <= r.lambda + r.mu; ++nu1) {
        for (int nu2 = 0; nu2 <= total - nu1; ++nu2) {
            int nu3 = total - nu1 - nu2;
            int m = weight_multiplicity(r, nu1, nu2, nu3);
            if (m > 0) fn(nu1 - nu2, nu2 - nu3, m);
        }
    }
}

}  // namespace detail

// Tensor-product decomposition by weight-character convolution followed by
// peeling of dominant-weight characters in decreasing height order.
// Entries come out sorted by (k ascending, p2 descending).
inline std::vector<DecompEntry> decompose_product(IrrepLabel a, IrrepLabel b) {
    const int radius = a.quanta() + b.quanta() + 1;
    detail::WeightGrid grid(radius);
    std::vector<std::array<int, 3>> weights_a;  // (w1, w2, mult)
    detail::for_each_weight(a, [&](int w1, int w2, int m) {
        weights_a.push_back({w1, w2, m});
    });
    detail::for_each_weight(b, [&](int w1, int w2, int m) {
        for (const auto& wa : weights_a)
            grid.at(wa[0] + w1, wa[1] + w2) += static_cast<long long>(wa[2]) * m;
    });

    // Dominant weights, highest (w1+w2) first; equal heights are
    // dominance-incomparable so their order does not matter.
    std::vector<DecompEntry> out;
    for (int height = 2 * radius; height >= 0; --height) {
        for (int w1 = std::min(height, radius); w1 >= 0; --w1) {
            int w2 = height - w1;
            if (w2 < 0 || w2 > radius) continue;
            long long mult = grid.at(w1, w2);
            if (mult == 0) continue;
            if (mult < 0)
                throw InternalError("negative multiplicity in character peeling");
            IrrepLabel t{w1, w2};
            out.push_back({t, static_cast<int>(mult), grade(a, b, t)});
            detail::for_each_weight(t, [&](int x1, int x2, int m) {
                grid.at(x1, x2) -= mult * m;
            });
        }
    }
    std::sort(out.begin(), out.end(), [](const DecompEntry& x, const DecompEntry& y) {
        if (x.grade_k != y.grade_k) return x.grade_k < y.grade_k;
        return x.irrep.lambda > y.irrep.lambda;
    });
    return out;
}

// Multiplicity of target in a (x) b; 0 when absent.
inline int product_multiplicity(IrrepLabel a, IrrepLabel b, IrrepLabel target) {
    for (const auto& e : decompose_product(a, b))
        if (e.irrep == target) return e.multiplicity;
    return 0;
}

}  // namespace su3cg
