#pragma once

#include <array>
#include <map>
#include <shared_mutex>

#include "su3cg/exact.hpp"

namespace su3cg {

struct SixJArgs {
    // {j1 j2 j3; j4 j5 j6}
    HalfInt j1, j2, j3, j4, j5, j6;
};

struct NineJArgs {
    // {a b c; d e f; g h i} row-major
    std::array<HalfInt, 9> j;
};

namespace detail {

// Global cache size limiter, crude byte estimate against SU3CG_CACHE_MB.
class CacheBudget {
  public:
    static bool admit(size_t approx_bytes) {
        auto& self = instance();
        std::lock_guard lock(self.mutex_);
        if (self.limit_bytes_ > 0 && self.used_ + approx_bytes > self.limit_bytes_) return false;
        self.used_ += approx_bytes;
        return true;
    }
    static void set_limit_mb(long mb) {
        auto& self = instance();
        std::lock_guard lock(self.mutex_);
        self.limit_bytes_ = mb <= 0 ? 0 : static_cast<size_t>(mb) * 1024 * 1024;
    }

  private:
    CacheBudget() {
        if (const char* env = std::getenv("SU3CG_CACHE_MB")) {
            long mb = std::strtol(env, nullptr, 10);
            if (mb > 0) limit_bytes_ = static_cast<size_t>(mb) * 1024 * 1024;
        }
    }
    static CacheBudget& instance() {
        static CacheBudget b;
        return b;
    }
    std::mutex mutex_;
    size_t used_ = 0;
    size_t limit_bytes_ = 0;  // 0 = unlimited
};

// Memo map with the shared-cache contract: concurrent reads, serialized
// inserts.  Values are immutable once stored.
template <typename Key, typename Value>
class MemoCache {
  public:
    template <typename Fn>
    Value get_or_compute(const Key& key, Fn&& fn) {
        {
            std::shared_lock lock(mutex_);
            auto it = map_.find(key);
            if (it != map_.end()) return it->second;
        }
        Value v = fn();
        if (CacheBudget::admit(sizeof(Key) + sizeof(Value) + 64)) {
            std::unique_lock lock(mutex_);
            map_.emplace(key, v);
        }
        return v;
    }

  private:
    std::shared_mutex mutex_;
    std::map<Key, Value> map_;
};

inline bool triad_fails(HalfInt a, HalfInt b, HalfInt c) { return !triangle(a, b, c); }

}  // namespace detail

// Racah's single-sum formula, Condon-Shortley phases.  Zero when M != m1+m2
// or the triangle rule fails; MalformedHalfInt when some j+m is not integral.
inline ExactReal clebsch_gordan_uncached(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2,
                                         HalfInt J, HalfInt M) {
    if (j1.is_negative() || j2.is_negative() || J.is_negative())
        throw MalformedHalfInt("negative j in CG");
    if (!(j1 + m1).is_integer() || !(j2 + m2).is_integer() || !(J + M).is_integer())
        throw MalformedHalfInt("j+m not integral in CG");
    if (abs(m1) > j1 || abs(m2) > j2 || abs(M) > J) return ExactReal();
    if ((m1 + m2) != M) return ExactReal();
    if (!triangle(j1, j2, J)) return ExactReal();

    detail::SqrtRatioBuilder pre;
    pre.mul_twice_plus_one(J);
    pre.mul_factorial((j1 + j2 - J).as_int());
    pre.mul_factorial((j1 - j2 + J).as_int());
    pre.mul_factorial((-j1 + j2 + J).as_int());
    pre.div_factorial((j1 + j2 + J).as_int() + 1);
    pre.mul_factorial((J + M).as_int());
    pre.mul_factorial((J - M).as_int());
    pre.mul_factorial((j1 + m1).as_int());
    pre.mul_factorial((j1 - m1).as_int());
    pre.mul_factorial((j2 + m2).as_int());
    pre.mul_factorial((j2 - m2).as_int());

    long a1 = (j1 + j2 - J).as_int();
    long a2 = (j1 - m1).as_int();
    long a3 = (j2 + m2).as_int();
    long b1 = (J - j2 + m1).as_int();
    long b2 = (J - j1 - m2).as_int();
    long lo = std::max({0L, -b1, -b2});
    long hi = std::min({a1, a2, a3});
    Rational sum(0);
    for (long t = lo; t <= hi; ++t) {
        Rational term =
            Rational(1) / Rational(factorial(t) * factorial(a1 - t) * factorial(a2 - t) *
                                   factorial(a3 - t) * factorial(b1 + t) * factorial(b2 + t));
        sum += (t % 2 == 0) ? term : -term;
    }
    return ExactReal(sum) * pre.take_sqrt();
}

inline ExactReal clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J,
                                HalfInt M) {
    using Key = std::array<int, 6>;
    static detail::MemoCache<Key, ExactReal> cache;
    Key key{j1.tw, m1.tw, j2.tw, m2.tw, J.tw, M.tw};
    return cache.get_or_compute(
        key, [&] { return clebsch_gordan_uncached(j1, m1, j2, m2, J, M); });
}

// Racah sum for the 6j symbol.  Stretched triads collapse the sum to a single
// term (lo == hi), which is taken without entering the loop.
inline ExactReal wigner_6j_uncached(const SixJArgs& a) {
    const HalfInt j1 = a.j1, j2 = a.j2, j3 = a.j3, j4 = a.j4, j5 = a.j5, j6 = a.j6;
    if (detail::triad_fails(j1, j2, j3) || detail::triad_fails(j1, j5, j6) ||
        detail::triad_fails(j4, j2, j6) || detail::triad_fails(j4, j5, j3))
        return ExactReal();

    detail::SqrtRatioBuilder pre;
    auto delta = [&pre](HalfInt x, HalfInt y, HalfInt z) {
        pre.mul_factorial((x + y - z).as_int());
        pre.mul_factorial((x - y + z).as_int());
        pre.mul_factorial((-x + y + z).as_int());
        pre.div_factorial((x + y + z).as_int() + 1);
    };
    delta(j1, j2, j3);
    delta(j1, j5, j6);
    delta(j4, j2, j6);
    delta(j4, j5, j3);

    long s1 = (j1 + j2 + j3).as_int();
    long s2 = (j1 + j5 + j6).as_int();
    long s3 = (j4 + j2 + j6).as_int();
    long s4 = (j4 + j5 + j3).as_int();
    long p1 = (j1 + j2 + j4 + j5).as_int();
    long p2 = (j2 + j3 + j5 + j6).as_int();
    long p3 = (j3 + j1 + j6 + j4).as_int();
    long lo = std::max({s1, s2, s3, s4});
    long hi = std::min({p1, p2, p3});

    auto term_at = [&](long t) {
        Rational term = Rational(factorial(t + 1)) /
                        Rational(factorial(t - s1) * factorial(t - s2) * factorial(t - s3) *
                                 factorial(t - s4) * factorial(p1 - t) * factorial(p2 - t) *
                                 factorial(p3 - t));
        return (t % 2 == 0) ? term : -term;
    };

    Rational sum(0);
    if (lo == hi) {
        sum = term_at(lo);  // stretched case, no sum
    } else {
        for (long t = lo; t <= hi; ++t) sum += term_at(t);
    }
    return ExactReal(sum) * pre.take_sqrt();
}

inline ExactReal wigner_6j(const SixJArgs& a) {
    // Cache key after the cheap column-sort symmetry (columns of a 6j may be
    // permuted freely).
    using Key = std::array<int, 6>;
    static detail::MemoCache<Key, ExactReal> cache;
    std::array<std::pair<int, int>, 3> cols{
        std::pair{a.j1.tw, a.j4.tw}, {a.j2.tw, a.j5.tw}, {a.j3.tw, a.j6.tw}};
    std::sort(cols.begin(), cols.end());
    Key key{cols[0].first, cols[1].first, cols[2].first,
            cols[0].second, cols[1].second, cols[2].second};
    return cache.get_or_compute(key, [&] { return wigner_6j_uncached(a); });
}

inline ExactReal wigner_6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5,
                           HalfInt j6) {
    return wigner_6j(SixJArgs{j1, j2, j3, j4, j5, j6});
}

// 9j as a single sum over products of three 6j symbols.
inline ExactReal wigner_9j_uncached(const NineJArgs& n) {
    const HalfInt a = n.j[0], b = n.j[1], c = n.j[2];
    const HalfInt d = n.j[3], e = n.j[4], f = n.j[5];
    const HalfInt g = n.j[6], h = n.j[7], i = n.j[8];
    if (detail::triad_fails(a, b, c) || detail::triad_fails(d, e, f) ||
        detail::triad_fails(g, h, i) || detail::triad_fails(a, d, g) ||
        detail::triad_fails(b, e, h) || detail::triad_fails(c, f, i))
        return ExactReal();

    HalfInt lo = std::max({abs(a - i), abs(b - f), abs(d - h)});
    HalfInt hi = std::min({a + i, b + f, d + h});
    ExactReal sum;
    for (HalfInt x = lo; x <= hi; x += HalfInt(1)) {
        ExactReal prod = wigner_6j(a, b, c, f, i, x) * wigner_6j(d, e, f, b, x, h) *
                         wigner_6j(g, h, i, x, a, d);
        Rational weight(x.tw + 1);
        if (x.tw % 2 != 0) weight = -weight;  // (-1)^{2x}
        sum += ExactReal(weight) * prod;
    }
    return sum;
}

inline ExactReal wigner_9j(const NineJArgs& n) {
    using Key = std::array<int, 9>;
    static detail::MemoCache<Key, ExactReal> cache;
    Key key;
    for (int i = 0; i < 9; ++i) key[i] = n.j[i].tw;
    return cache.get_or_compute(key, [&] { return wigner_9j_uncached(n); });
}

inline ExactReal wigner_9j(HalfInt a, HalfInt b, HalfInt c, HalfInt d, HalfInt e, HalfInt f,
                           HalfInt g, HalfInt h, HalfInt i) {
    return wigner_9j(NineJArgs{{a, b, c, d, e, f, g, h, i}});
}

inline void set_cache_limit_mb(long mb) { detail::CacheBudget::set_limit_mb(mb); }

}  // namespace su3cg
