#pragma once

#include "si/curve.hpp"
#include "si/factor.hpp"
#include "si/int_poly.hpp"
#include "si/mpnum.hpp"

#include <sstream>
#include <stdexcept>
#include <string>

namespace si {

// P^2 - Q^2 x^3 + A PQ x - B Q^2 x^2 + C PQ - D Q^2 x - E Q^2
inline IntPoly generating_polynomial(const IntPoly& P, const IntPoly& Q, const Cubic& k)
{
    const IntPoly x = IntPoly::x();
    IntPoly pq = P * Q, qq = Q * Q;
    IntPoly r = P * P - qq * x * x * x + pq * x * k.A - qq * x * x * k.B + pq * k.C - qq * x * k.D - qq * k.E;
    if (r.is_zero() || r.lead() != 1) throw std::runtime_error("generating polynomial is not monic");
    return r;
}

inline IntPoly generating_polynomial(const IntPoly& P, const IntPoly& Q, const CurveRecord& c) { return generating_polynomial(P, Q, c.cubic); }

class AmbiguousRoot : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// sum |g_i| max(1, |z|)^i
inline Real coefficient_scale(const IntPoly& g, const Complex& z)
{
    Real m = std::max(Real(1), z.abs()), pw = 1, s = 0;
    for (int i = 0; i <= g.degree(); ++i) {
        s += boost::multiprecision::abs(to_real(g.coeff(i))) * pw;
        pw *= m;
    }
    return s;
}

// The unique factor vanishing at value, relative to its coefficient scale.
inline IntPoly select_factor_by_root(const FactoredPoly& fp, const Complex& value, const Real& tol)
{
    const IntPoly* hit = nullptr;
    std::ostringstream diag;
    for (const auto& [g, mult] : fp.factors) {
        Real r = eval_poly(g, value).abs() / coefficient_scale(g, value);
        diag << "  " << g.to_string() << ": " << r.str(3, std::ios_base::scientific) << "\n";
        if (r < tol) {
            if (hit && !(*hit == g)) throw AmbiguousRoot("more than one factor vanishes at the value:\n" + diag.str());
            hit = &g;
        }
    }
    if (!hit) throw AmbiguousRoot("no factor vanishes at the value:\n" + diag.str());
    return *hit;
}

}  // namespace si
