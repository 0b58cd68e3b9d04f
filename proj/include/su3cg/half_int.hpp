#pragma once

#include <compare>
#include <cstdlib>
#include <string>

#include "su3cg/errors.hpp"

namespace su3cg {

// Half-integer angular momentum label, stored as twice its value so that all
// arithmetic and comparisons stay exact.  Holds j in {0, 1/2, 1, ...} as well
// as signed projections m.
struct HalfInt {
    int tw = 0;  // 2j

    constexpr HalfInt() = default;
    constexpr HalfInt(int whole) : tw(2 * whole) {}

    static constexpr HalfInt from_twice(int twice) {
        HalfInt h;
        h.tw = twice;
        return h;
    }

    constexpr int twice() const { return tw; }
    constexpr bool is_integer() const { return tw % 2 == 0; }
    constexpr bool is_negative() const { return tw < 0; }

    // Value of an integer-valued HalfInt; raises on genuine halves.
    int as_int() const {
        if (tw % 2 != 0) throw MalformedHalfInt("expected integer, got " + to_string());
        return tw / 2;
    }

    constexpr HalfInt operator-() const { return from_twice(-tw); }
    constexpr HalfInt operator+(HalfInt o) const { return from_twice(tw + o.tw); }
    constexpr HalfInt operator-(HalfInt o) const { return from_twice(tw - o.tw); }
    friend constexpr auto operator<=>(HalfInt a, HalfInt b) = default;

    HalfInt& operator+=(HalfInt o) {
        tw += o.tw;
        return *this;
    }
    HalfInt& operator-=(HalfInt o) {
        tw -= o.tw;
        return *this;
    }

    std::string to_string() const {
        if (tw % 2 == 0) return std::to_string(tw / 2);
        return std::to_string(tw) + "/2";
    }
};

inline constexpr HalfInt half(int twice) { return HalfInt::from_twice(twice); }

inline HalfInt abs(HalfInt h) { return HalfInt::from_twice(std::abs(h.tw)); }

// j1, j2, j3 couple: |j1-j2| <= j3 <= j1+j2 with integral perimeter.
inline bool triangle(HalfInt j1, HalfInt j2, HalfInt j3) {
    if ((j1 + j2 + j3).tw % 2 != 0) return false;
    return abs(j1 - j2) <= j3 && j3 <= j1 + j2;
}

// m is a valid projection of j: |m| <= j and j+m integral.
inline bool jm_consistent(HalfInt j, HalfInt m) {
    return (j + m).is_integer() && abs(m) <= j;
}

// (-1)^e for an integer-valued HalfInt exponent.
inline int parity(HalfInt e) {
    int n = e.as_int();
    return (n % 2 == 0) ? 1 : -1;
}

}  // namespace su3cg
