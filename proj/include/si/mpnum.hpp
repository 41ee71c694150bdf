#pragma once

#include "si/int_poly.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <string>

namespace si {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>, boost::multiprecision::et_off>;

// Sets the working precision (decimal digits) of new Reals for the scope's lifetime.
// The default is process-wide, so Real arithmetic must stay on one thread.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned digits10) : saved_(Real::default_precision()) { Real::default_precision(digits10); }
    ~PrecisionScope() { Real::default_precision(saved_); }
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_;
};

inline Real to_real(const Int& v)
{
    Real r;
    mpfr_set_z(r.backend().data(), v.get_mpz_t(), MPFR_RNDN);
    return r;
}

inline Real to_real(const Rat& v)
{
    Real r;
    mpfr_set_q(r.backend().data(), v.get_mpq_t(), MPFR_RNDN);
    return r;
}

// Nearest integer.
inline Int round_to_int(const Real& v)
{
    Real r = boost::multiprecision::round(v);
    Int out;
    mpfr_get_z(out.get_mpz_t(), r.backend().data(), MPFR_RNDN);
    return out;
}

inline Real pi_real()
{
    Real r;
    mpfr_const_pi(r.backend().data(), MPFR_RNDN);
    return r;
}

struct Complex {
    Real re, im;

    Complex() : re(0), im(0) {}
    Complex(Real r, Real i = Real(0)) : re(std::move(r)), im(std::move(i)) {}  // NOLINT

    friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
    friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
    friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
    friend Complex operator*(const Complex& a, const Complex& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
    friend Complex operator*(const Complex& a, const Real& k) { return {a.re * k, a.im * k}; }
    friend Complex operator/(const Complex& a, const Complex& b)
    {
        Real den = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
    }
    Complex& operator+=(const Complex& o) { return *this = *this + o; }
    Complex& operator*=(const Complex& o) { return *this = *this * o; }

    Real abs() const { return boost::multiprecision::sqrt(re * re + im * im); }
    Complex conj() const { return {re, -im}; }
};

// exp(i theta) * r
inline Complex polar(const Real& r, const Real& theta) { return {r * boost::multiprecision::cos(theta), r * boost::multiprecision::sin(theta)}; }

inline Complex eval_poly(const IntPoly& f, const Complex& z)
{
    Complex acc;
    for (int i = f.degree(); i >= 0; --i) acc = acc * z + Complex(to_real(f.coeff(i)));
    return acc;
}

inline Real eval_poly(const IntPoly& f, const Real& z)
{
    Real acc = 0;
    for (int i = f.degree(); i >= 0; --i) acc = acc * z + to_real(f.coeff(i));
    return acc;
}

// Fixed-point text with the given number of decimals.
inline std::string to_decimal(const Real& v, int decimals)
{
    return v.str(decimals, std::ios_base::fixed);
}

inline Real parse_real(const std::string& s) { return Real(s); }

}  // namespace si
