#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "su3cg/errors.hpp"
#include "su3cg/half_int.hpp"

namespace su3cg {

using Int = mpz_class;
// mpq_class keeps the canonical-form invariants by construction: gcd(|num|,den) = 1,
// den >= 1, zero stored as 0/1.
using Rational = mpq_class;

namespace detail {

// Process-wide factorial cache.  Concurrent reads, serialized appends.
// Storage is a deque so references stay valid across growth (gmpxx lazy
// expressions hold references to their operands).
class FactorialCache {
  public:
    static const Int& get(long n) {
        if (n < 0) throw OutOfRange("factorial of negative " + std::to_string(n));
        auto& self = instance();
        {
            std::shared_lock lock(self.mutex_);
            if (static_cast<size_t>(n) < self.size_) return self.table_[n];
        }
        std::unique_lock lock(self.mutex_);
        while (self.table_.size() <= static_cast<size_t>(n)) {
            Int next = self.table_.back() * static_cast<long>(self.table_.size());
            self.table_.push_back(next);
        }
        self.size_ = self.table_.size();
        return self.table_[n];
    }

  private:
    FactorialCache() : table_{Int(1), Int(1)}, size_(2) {}
    static FactorialCache& instance() {
        static FactorialCache cache;
        return cache;
    }
    std::shared_mutex mutex_;
    std::deque<Int> table_;
    size_t size_;
};

// Primes up to a growing bound, shared process-wide.  Iteration happens
// under a shared lock; growth appends with a segmented sieve.
class PrimeTable {
  public:
    // Visit primes <= n in increasing order; fn returning false stops early.
    template <typename Fn>
    static void for_each_upto(long n, Fn&& fn) {
        auto& self = instance();
        self.ensure(n);
        std::shared_lock lock(self.mutex_);
        for (size_t i = 0; i < self.primes_.size(); ++i) {
            long p = self.primes_[i];
            if (p > n) break;
            if (!fn(p)) break;
        }
    }

  private:
    PrimeTable() { extend_locked(1 << 11); }
    static PrimeTable& instance() {
        static PrimeTable table;
        return table;
    }
    void ensure(long n) {
        {
            std::shared_lock lock(mutex_);
            if (limit_ >= n) return;
        }
        std::unique_lock lock(mutex_);
        while (limit_ < n)
            extend_locked(std::min(std::max(n, 2 * limit_), limit_ * limit_));
    }
    void extend_locked(long n) {
        if (primes_.empty()) {
            std::vector<bool> comp(n + 1, false);
            for (long p = 2; p <= n; ++p) {
                if (comp[p]) continue;
                primes_.push_back(p);
                for (long q = p * p; q <= n; q += p) comp[q] = true;
            }
            limit_ = n;
            return;
        }
        // segmented sieve of (limit_, n]; base primes up to sqrt(n) are
        // present because ensure() caps each step at limit_^2
        const long lo = limit_ + 1;
        std::vector<bool> composite(n - lo + 1, false);
        for (long p : primes_) {
            if (p * p > n) break;
            long start = std::max(p * p, ((lo + p - 1) / p) * p);
            for (long q = start; q <= n; q += p) composite[q - lo] = true;
        }
        for (long v = lo; v <= n; ++v)
            if (!composite[v - lo]) primes_.push_back(v);
        limit_ = n;
    }
    std::shared_mutex mutex_;
    std::deque<long> primes_;
    long limit_ = 0;
};

inline long isqrt_long(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r.fits_slong_p() ? r.get_si() : -1;
}

}  // namespace detail

inline const Int& factorial(long n) { return detail::FactorialCache::get(n); }
inline const Int& factorial(HalfInt n) { return factorial(n.as_int()); }

// Exact product(n_i!) / product(d_i!).
inline Rational factorial_ratio(std::initializer_list<long> nums,
                                std::initializer_list<long> dens) {
    Rational r(1);
    for (long n : nums) r *= Rational(factorial(n));
    for (long d : dens) r /= Rational(factorial(d));
    return r;
}

inline Int binomial(long n, long k) {
    if (k < 0 || k > n) return 0;
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

class ExactReal;

namespace detail {

// Accumulates a positive rational in factored form (prime -> signed exponent),
// with factorials expanded by Legendre's formula.  take_sqrt() then splits the
// even part into the rational coefficient and leaves a squarefree radicand,
// so no large integer ever needs factoring.
class SqrtRatioBuilder {
  public:
    void mul_factorial(long n, long power = 1) {
        if (n < 0) throw OutOfRange("factorial of negative " + std::to_string(n));
        if (n < 2 || power == 0) return;
        PrimeTable::for_each_upto(n, [&](long p) {
            long v = 0;
            for (long q = p; q <= n; q *= p) {
                v += n / q;
                if (q > n / p) break;
            }
            exp_[p] += v * power;
            return true;
        });
    }
    void div_factorial(long n) { mul_factorial(n, -1); }

    void mul_integer(long n, long power = 1) {
        if (n == 0) {
            zero_ = true;
            return;
        }
        if (n < 0) throw InternalError("SqrtRatioBuilder wants positive factors");
        PrimeTable::for_each_upto(n, [&](long p) {
            if (p * p > n) return false;
            while (n % p == 0) {
                exp_[p] += power;
                n /= p;
            }
            return true;
        });
        if (n > 1) exp_[n] += power;
    }
    void div_integer(long n) { mul_integer(n, -1); }
    void mul_twice_plus_one(HalfInt j) { mul_integer(j.twice() + 1); }

    bool is_zero() const { return zero_; }

    // sqrt of the accumulated value, as coefficient * sqrt(squarefree).
    ExactReal take_sqrt() const;

  private:
    std::map<long, long> exp_;
    bool zero_ = false;
};

}  // namespace detail

// Canonical exact value: a finite sum of terms coeff * sqrt(radicand) with
// pairwise distinct squarefree radicands >= 1, sorted by radicand, nonzero
// coefficients.  The empty sum is 0.  Canonical form is unique per value, so
// operator== is structural.
class ExactReal {
  public:
    struct Term {
        Rational coeff;
        Int rad;  // squarefree, >= 1
    };

    ExactReal() = default;
    ExactReal(const Rational& r) {
        if (r != 0) terms_.push_back({r, Int(1)});
    }
    ExactReal(long n) : ExactReal(Rational(n)) {}
    ExactReal(int n) : ExactReal(Rational(n)) {}

    // Trusted constructor: radicand must already be squarefree.
    static ExactReal term(const Rational& coeff, const Int& squarefree_rad) {
        ExactReal x;
        if (coeff != 0) x.terms_.push_back({coeff, squarefree_rad});
        return x;
    }

    // sqrt(r) for r >= 0, extracting the square part of numerator and
    // denominator by trial division.  sqrt(p/q) is stored as (1/q) sqrt(pq).
    static ExactReal sqrt_rational(const Rational& r) {
        if (r < 0) throw OutOfRange("sqrt of negative rational");
        if (r == 0) return ExactReal();
        Int pq = r.get_num() * r.get_den();
        auto [outside, rad] = extract_square(pq);
        return term(Rational(outside) / r.get_den(), rad);
    }

    // canonicalize(raw term list): each raw term is coeff * sqrt(radicand)
    // with a nonnegative rational radicand.  Total function.
    static ExactReal canonicalize(const std::vector<std::pair<Rational, Rational>>& raw) {
        ExactReal sum;
        for (const auto& [coeff, rad] : raw) sum = sum + ExactReal(coeff) * sqrt_rational(rad);
        return sum;
    }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_rational() const {
        return terms_.empty() || (terms_.size() == 1 && terms_[0].rad == 1);
    }
    Rational as_rational() const {
        if (terms_.empty()) return Rational(0);
        if (terms_.size() == 1 && terms_[0].rad == 1) return terms_[0].coeff;
        throw InternalError("ExactReal is not rational: " + to_string());
    }

    friend bool operator==(const ExactReal& a, const ExactReal& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        for (size_t i = 0; i < a.terms_.size(); ++i)
            if (a.terms_[i].rad != b.terms_[i].rad || a.terms_[i].coeff != b.terms_[i].coeff)
                return false;
        return true;
    }
    friend bool operator!=(const ExactReal& a, const ExactReal& b) { return !(a == b); }

    ExactReal operator-() const {
        ExactReal x = *this;
        for (auto& t : x.terms_) t.coeff = -t.coeff;
        return x;
    }

    friend ExactReal operator+(const ExactReal& a, const ExactReal& b) {
        ExactReal out;
        auto ia = a.terms_.begin(), ib = b.terms_.begin();
        while (ia != a.terms_.end() || ib != b.terms_.end()) {
            if (ib == b.terms_.end() || (ia != a.terms_.end() && ia->rad < ib->rad)) {
                out.terms_.push_back(*ia++);
            } else if (ia == a.terms_.end() || ib->rad < ia->rad) {
                out.terms_.push_back(*ib++);
            } else {
                Rational c = ia->coeff + ib->coeff;
                if (c != 0) out.terms_.push_back({c, ia->rad});
                ++ia;
                ++ib;
            }
        }
        return out;
    }
    friend ExactReal operator-(const ExactReal& a, const ExactReal& b) { return a + (-b); }

    friend ExactReal operator*(const ExactReal& a, const ExactReal& b) {
        // Product of squarefree radicands r1*r2 = g^2 * (r1/g)(r2/g) with
        // g = gcd(r1,r2); the cofactor product is squarefree again.
        std::map<Int, Rational> acc;
        for (const auto& ta : a.terms_) {
            for (const auto& tb : b.terms_) {
                Int g;
                mpz_gcd(g.get_mpz_t(), ta.rad.get_mpz_t(), tb.rad.get_mpz_t());
                Int rad = (ta.rad / g) * (tb.rad / g);
                Rational c = ta.coeff * tb.coeff * Rational(g);
                auto [it, fresh] = acc.emplace(rad, c);
                if (!fresh) it->second += c;
            }
        }
        ExactReal out;
        for (auto& [rad, c] : acc)
            if (c != 0) out.terms_.push_back({c, rad});
        return out;
    }

    friend ExactReal operator/(const ExactReal& a, const ExactReal& b) {
        if (b.is_zero()) throw DivisionByZero();
        ExactReal num = a, den = b;
        // Rationalize by iterated sign-flip conjugation: each pass removes one
        // prime from the union of the divisor's radicands.
        int guard = 0;
        while (!(den.terms_.size() == 1 && den.terms_[0].rad == 1)) {
            if (den.terms_.size() == 1) {
                // c*sqrt(r): multiply both sides by sqrt(r).
                ExactReal root = term(Rational(1), den.terms_[0].rad);
                num = num * root;
                den = den * root;
                continue;
            }
            long p = smallest_prime_factor(den.largest_rad());
            ExactReal conj = den.flip_terms_divisible_by(p);
            num = num * conj;
            den = den * conj;
            if (++guard > 128) throw DivisorNotRationalizable("conjugation did not terminate");
        }
        Rational d = den.terms_[0].coeff;
        ExactReal out = num;
        for (auto& t : out.terms_) t.coeff /= d;
        return out;
    }

    ExactReal& operator+=(const ExactReal& o) { return *this = *this + o; }
    ExactReal& operator-=(const ExactReal& o) { return *this = *this - o; }
    ExactReal& operator*=(const ExactReal& o) { return *this = *this * o; }
    ExactReal& operator/=(const ExactReal& o) { return *this = *this / o; }

    // Sign of the represented real.  Exact for 0 and single terms; multi-term
    // values are resolved with 512-bit floating evaluation and a wide margin.
    int sign() const {
        if (terms_.empty()) return 0;
        if (terms_.size() == 1) return sgn(terms_[0].coeff);
        mpf_class v = to_mpf(512);
        mpf_class scale(0, 512);
        for (const auto& t : terms_) {
            mpf_class a(abs(t.coeff), 512);
            scale += a;
        }
        mpf_class margin = scale >> 300;
        if (v > margin) return 1;
        if (v < -margin) return -1;
        throw InternalError("sign() could not separate value from zero: " + to_string());
    }

    mpf_class to_mpf(mp_bitcnt_t prec = 256) const {
        mpf_class sum(0, prec);
        for (const auto& t : terms_) {
            mpf_class r(t.rad, prec);
            mpf_class root(0, prec);
            mpf_sqrt(root.get_mpf_t(), r.get_mpf_t());
            sum += mpf_class(t.coeff, prec) * root;
        }
        return sum;
    }
    double to_double() const { return to_mpf().get_d(); }

    // Decimal rendering, display only (default 15 significant digits).
    std::string to_decimal(int digits = 15) const {
        if (terms_.empty()) return "0";
        mp_exp_t exp;
        mpf_class v = to_mpf(512);
        std::string mant = v.get_str(exp, 10, digits);
        bool neg = !mant.empty() && mant[0] == '-';
        if (neg) mant = mant.substr(1);
        if (mant.empty()) return "0";
        std::string s;
        if (exp <= 0) {
            s = "0." + std::string(-exp, '0') + mant;
        } else if (static_cast<size_t>(exp) >= mant.size()) {
            s = mant + std::string(exp - mant.size(), '0');
        } else {
            s = mant.substr(0, exp) + "." + mant.substr(exp);
        }
        return neg ? "-" + s : s;
    }

    // Canonical text: "0", rationals as p/q, single radical terms as
    // (p/q)*sqrt(r), multi-term joined by " + " / " - ".
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (size_t i = 0; i < terms_.size(); ++i) {
            const Term& t = terms_[i];
            bool neg = t.coeff < 0;
            Rational c = neg ? Rational(-t.coeff) : t.coeff;
            if (i == 0) {
                if (neg) out += "-";
            } else {
                out += neg ? " - " : " + ";
            }
            out += term_string(c, t.rad);
        }
        return out;
    }

    // {"terms":[{"num":...,"den":...,"rad":...}]}; arbitrary-precision values
    // are emitted as bare JSON integer literals.
    std::string to_json() const {
        std::string out = "{\"terms\":[";
        for (size_t i = 0; i < terms_.size(); ++i) {
            if (i) out += ",";
            out += "{\"num\":" + terms_[i].coeff.get_num().get_str() +
                   ",\"den\":" + terms_[i].coeff.get_den().get_str() +
                   ",\"rad\":" + terms_[i].rad.get_str() + "}";
        }
        return out + "]}";
    }

    std::string to_latex() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (size_t i = 0; i < terms_.size(); ++i) {
            const Term& t = terms_[i];
            bool neg = t.coeff < 0;
            Rational c = neg ? Rational(-t.coeff) : t.coeff;
            if (i == 0) {
                if (neg) out += "-";
            } else {
                out += neg ? " - " : " + ";
            }
            std::string body;
            if (c.get_den() == 1) {
                if (c != 1 || t.rad == 1) body = c.get_num().get_str();
            } else {
                body = "\\frac{" + c.get_num().get_str() + "}{" + c.get_den().get_str() + "}";
            }
            if (t.rad != 1) body += "\\sqrt{" + t.rad.get_str() + "}";
            out += body;
        }
        return out;
    }

    static std::optional<ExactReal> parse(const std::string& text);

  private:
    std::vector<Term> terms_;

    static int sgn(const Rational& r) { return mpq_sgn(r.get_mpq_t()); }

    static std::string term_string(const Rational& c, const Int& rad) {
        std::string cs = c.get_str();
        if (rad == 1) return cs;
        std::string root = "sqrt(" + rad.get_str() + ")";
        if (c == 1) return root;
        if (c.get_den() == 1) return cs + "*" + root;
        return "(" + cs + ")*" + root;
    }

    const Int& largest_rad() const { return terms_.back().rad; }

    // Smallest prime factor of a squarefree radicand > 1.  Radicands produced
    // by the formula paths factor over small primes; a residual below 1e12 is
    // itself prime (squarefree, no factor <= 1e6).
    static long smallest_prime_factor(const Int& rad) {
        long found = 0;
        detail::PrimeTable::for_each_upto(1000000, [&](long p) {
            if (mpz_divisible_ui_p(rad.get_mpz_t(), p)) {
                found = p;
                return false;
            }
            return Int(p) * p <= rad;
        });
        if (found) return found;
        if (rad < Int("1000000000000") && rad.fits_slong_p()) return rad.get_si();
        throw DivisorNotRationalizable("cannot find prime factor of " + rad.get_str());
    }

    ExactReal flip_terms_divisible_by(long p) const {
        ExactReal x = *this;
        for (auto& t : x.terms_)
            if (mpz_divisible_ui_p(t.rad.get_mpz_t(), p)) t.coeff = -t.coeff;
        return x;
    }

    // n = outside^2 * rad with rad squarefree; trial division up to 1e6, then
    // perfect-square check.  Rigorous for residuals < 1e18.
    static std::pair<Int, Int> extract_square(Int n) {
        Int outside = 1, rad = 1;
        detail::PrimeTable::for_each_upto(1000000, [&](long p) {
            if (Int(p) * p > n) return false;
            int e = 0;
            while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
                n /= p;
                ++e;
            }
            for (int i = 0; i < e / 2; ++i) outside *= p;
            if (e % 2) rad *= p;
            return true;
        });
        if (n > 1) {
            if (mpz_perfect_square_p(n.get_mpz_t())) {
                Int r;
                mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
                outside *= r;
            } else if (n < Int("1000000000000000000")) {
                rad *= n;  // squarefree: any repeated prime would exceed the bound
            } else {
                throw DivisorNotRationalizable("radicand too large to reduce: " + n.get_str());
            }
        }
        return {outside, rad};
    }
};

namespace detail {

inline ExactReal SqrtRatioBuilder::take_sqrt() const {
    if (zero_) return ExactReal();
    Rational coeff(1);
    Int rad(1);
    for (const auto& [p, e] : exp_) {
        if (e == 0) continue;
        // p^e = p^(2a+b) with b in {0,1}: sqrt is p^a * sqrt(p^b).
        long a = (e >= 0 ? e : e - 1) / 2;  // floor(e/2)
        Int pw;
        mpz_ui_pow_ui(pw.get_mpz_t(), p, static_cast<unsigned long>(std::abs(a)));
        if (a >= 0)
            coeff *= Rational(pw);
        else
            coeff /= Rational(pw);
        if (e - 2 * a == 1) rad *= p;
    }
    return ExactReal::term(coeff, rad);
}

}  // namespace detail

inline std::optional<ExactReal> ExactReal::parse(const std::string& text) {
    // Grammar: "0" | term (" + " | " - ") term ...;
    // term = ["-"] ( "(" p "/" q ")*sqrt(" r ")" | c "*sqrt(" r ")" | "sqrt(" r ")" | c )
    if (text == "0") return ExactReal();
    ExactReal sum;
    size_t pos = 0;
    int sign = 1;
    if (!text.empty() && text[0] == '-') {
        sign = -1;
        pos = 1;
    }
    while (pos < text.size()) {
        size_t next = text.find(" + ", pos);
        size_t nextm = text.find(" - ", pos);
        size_t end = std::min(next == std::string::npos ? text.size() : next,
                              nextm == std::string::npos ? text.size() : nextm);
        std::string piece = text.substr(pos, end - pos);

        Rational coeff;
        Int rad(1);
        try {
            size_t sq = piece.find("sqrt(");
            if (sq != std::string::npos) {
                size_t close = piece.find(')', sq);
                if (close == std::string::npos) return std::nullopt;
                rad = Int(piece.substr(sq + 5, close - sq - 5));
                std::string cpart = piece.substr(0, sq);
                if (!cpart.empty() && cpart.back() == '*') cpart.pop_back();
                if (!cpart.empty() && cpart.front() == '(' && cpart.back() == ')')
                    cpart = cpart.substr(1, cpart.size() - 2);
                coeff = cpart.empty() ? Rational(1) : Rational(cpart);
            } else {
                coeff = Rational(piece);
            }
        } catch (const std::invalid_argument&) {
            return std::nullopt;
        }
        coeff.canonicalize();
        sum += ExactReal(Rational(sign) * coeff) * sqrt_rational(Rational(rad));
        if (end == text.size()) break;
        sign = (end == next) ? 1 : -1;
        pos = end + 3;
    }
    return sum;
}

// (-1)^n for plain integers that may be negative.
inline int parity(long n) { return (n % 2 == 0) ? 1 : -1; }

// Canonicalized fraction from raw integers (mpq_class(a,b) alone does not
// reduce, which GMP arithmetic requires).
inline Rational frac(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

}  // namespace su3cg
