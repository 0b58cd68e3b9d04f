#pragma once

// Closed-form reference data shared by the unit and acceptance suites:
// reduced CGs for the highest weight of every (p2,q2) in (p1,q1) x (2,0)
// as functions of (p1,q1).

#include <map>
#include <vector>

#include "su3cg/hw_solver.hpp"

namespace su3cg::testdata {

struct Hw20Reference {
    IrrepLabel target;
    int k;
    std::map<HwKey, ExactReal, HwKeyLess> rows;  // only the listed entries
};

inline std::vector<Hw20Reference> hw_20_references(int p1, int q1) {
    auto rt = [](long num, long den) {
        return ExactReal::sqrt_rational(frac(num, den));
    };
    auto key = [&](int nu1, int twJ, int n1) {
        return HwKey{nu1, HalfInt::from_twice(twJ), n1, HalfInt::from_twice(2 - n1)};
    };
    const long p = p1, q = q1;
    std::vector<Hw20Reference> out;

    {   // (p1+2, q1), k=0
        Hw20Reference t{{p1 + 2, q1}, 0, {}};
        t.rows[key(p1 + q1, q1, 2)] = ExactReal(1);
        out.push_back(std::move(t));
    }
    {   // (p1, q1+1), k=0
        Hw20Reference t{{p1, q1 + 1}, 0, {}};
        t.rows[key(p1 + q1, q1, 1)] = rt(p, p + 2);
        t.rows[key(p1 + q1 - 1, q1 + 1, 2)] = -rt(2, p + 2);
        out.push_back(std::move(t));
    }
    if (p1 >= 2) {  // (p1-2, q1+2), k=0
        Hw20Reference t{{p1 - 2, q1 + 2}, 0, {}};
        t.rows[key(p1 + q1, q1, 0)] = rt(p - 1, p + 1);
        t.rows[key(p1 + q1 - 1, q1 + 1, 1)] = -rt(2 * (p - 1), p * (p + 1));
        t.rows[key(p1 + q1 - 2, q1 + 2, 2)] = rt(2, p * (p + 1));
        out.push_back(std::move(t));
    }
    if (q1 >= 1) {  // (p1+1, q1-1), k=1
        Hw20Reference t{{p1 + 1, q1 - 1}, 1, {}};
        t.rows[key(p1 + q1, q1, 1)] = rt(q + p + 1, q + p + 3);
        t.rows[key(p1 + q1 - 1, q1 - 1, 2)] = rt(2, q + p + 3);
        out.push_back(std::move(t));
    }
    if (p1 >= 1) {  // (p1-1, q1), k=1
        Hw20Reference t{{p1 - 1, q1}, 1, {}};
        t.rows[key(p1 + q1, q1, 0)] = rt(p * (q + p + 1), (p + 1) * (q + p + 2));
        t.rows[key(p1 + q1 - 1, q1 + 1, 1)] =
            -rt(q * (q + p + 1), (1 + q) * (1 + p) * (q + p + 2));
        t.rows[key(p1 + q1 - 1, q1 - 1, 1)] =
            rt(p * (q + 2), (1 + q) * (1 + p) * (q + p + 2));
        t.rows[key(p1 + q1 - 2, q1, 2)] = -rt(2, (1 + p) * (q + p + 2));
        out.push_back(std::move(t));
    }
    if (q1 >= 2) {  // (p1, q1-2), k=2; the last row's unprinted I1 is forced
                    // to (q1-2)/2 by the triangle with I2 = 0
        Hw20Reference t{{p1, q1 - 2}, 2, {}};
        t.rows[key(p1 + q1, q1, 0)] = rt(q + p, q + p + 2);
        t.rows[key(p1 + q1 - 1, q1 - 1, 1)] = rt(2 * (q + p), (q + p + 1) * (q + p + 2));
        t.rows[key(p1 + q1 - 2, q1 - 2, 2)] = rt(2, (q + p + 1) * (q + p + 2));
        out.push_back(std::move(t));
    }
    return out;
}

// Check one solved vector against the listed reference rows: listed entries
// match exactly, every other stored key is exactly zero.
inline bool matches_reference(const HwVector& hw, const Hw20Reference& t) {
    for (const auto& [key, expect] : t.rows) {
        ExactReal got = hw.at(key);
        // zero-valued listed rows may collide with absent keys at degenerate
        // (p1,q1); both mean a vanishing coefficient
        if (!(got == expect)) return false;
    }
    for (const auto& [key, v] : hw.entries)
        if (!t.rows.count(key) && !v.is_zero()) return false;
    return true;
}

}  // namespace su3cg::testdata
