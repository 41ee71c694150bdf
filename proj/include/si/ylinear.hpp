#pragma once

#include "si/curve.hpp"
#include "si/int_poly.hpp"

namespace si {

// p(x) + y q(x) on the curve; y^2 is always rewritten through the cubic.
struct YLinearPoly {
    IntPoly p;
    IntPoly q;

    friend bool operator==(const YLinearPoly&, const YLinearPoly&) = default;
    friend YLinearPoly operator+(const YLinearPoly& a, const YLinearPoly& b) { return {a.p + b.p, a.q + b.q}; }
    friend YLinearPoly operator-(const YLinearPoly& a, const YLinearPoly& b) { return {a.p - b.p, a.q - b.q}; }
};

// y^2 = x^3 + A xy + B x^2 + C y + D x + E, split as y^2 = u(x) + y v(x).
inline YLinearPoly ylinear_mul(const YLinearPoly& a, const YLinearPoly& b, const Cubic& k)
{
    IntPoly u(std::vector<Int>{k.E, k.D, k.B, Int(1)});
    IntPoly v(std::vector<Int>{k.C, k.A});
    IntPoly qq = a.q * b.q;
    return {a.p * b.p + qq * u, a.p * b.q + a.q * b.p + qq * v};
}

inline YLinearPoly ylinear_mul(const YLinearPoly& a, const YLinearPoly& b, const CurveRecord& c) { return ylinear_mul(a, b, c.cubic); }

}  // namespace si
