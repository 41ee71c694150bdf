#pragma once

#include "si/curve.hpp"
#include "si/int_poly.hpp"
#include "si/mpnum.hpp"
#include "si/quadforms.hpp"
#include "si/registry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace si {

struct PrecisionPolicy {
    int digits = 30;
    int guard = 15;
    long max_terms = 0;  // 0: as many as the record holds

    unsigned working_digits() const { return static_cast<unsigned>(digits + guard); }
    // Binary precision matching the working decimal digits.
    long working_bits() const { return static_cast<long>(std::ceil(3.33 * (digits + guard))); }
};

struct EvalResult {
    Complex value;
    Real err;
    long terms_used = 0;
    CMPoint point;  // the equivalent point actually summed at
    Real abs_q;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, bool ran_out) : std::runtime_error(what), ran_out_(ran_out) {}
    // True when the series data ended before the stopping rule fired.
    bool ran_out_of_terms() const { return ran_out_; }

private:
    bool ran_out_;
};

inline Complex q_at(const CMPoint& t)
{
    Real pi = pi_real();
    Real r = boost::multiprecision::exp(-pi * boost::multiprecision::sqrt(to_real(Int(-t.D))) / to_real(t.a));
    Real theta = -pi * to_real(t.b) / to_real(t.a);
    return polar(r, theta);
}

inline Complex tau_value(const CMPoint& t)
{
    Real den = to_real(Int(2 * t.a));
    return {-to_real(t.b) / den, boost::multiprecision::sqrt(to_real(Int(-t.D))) / den};
}

// sum_{n >= lo} coeffs[n - lo] q^n at q = exp(2 pi i tau), with the geometric-tail stopping rule.
// digits counts significant digits of max(1, |value|).
inline EvalResult eval_series(const std::vector<Int>& coeffs, long lo, const CMPoint& tau, const PrecisionPolicy& policy)
{
    if (policy.digits < 10) throw std::invalid_argument("precision policy needs at least 10 digits");
    if (tau.a <= 0 || tau.D >= 0) throw std::invalid_argument("point is not in the upper half plane");
    PrecisionScope scope(policy.working_digits());
    Complex q = q_at(tau);
    Real absq = q.abs();
    Complex qn = Complex(Real(1));
    Complex qinv = Complex(Real(1)) / q;
    for (long i = 0; i < -lo; ++i) qn = qn * qinv;

    const Real thresh = boost::multiprecision::pow(Real(10), -static_cast<int>(policy.working_digits()));
    long limit = static_cast<long>(coeffs.size());
    if (policy.max_terms > 0) limit = std::min(limit, policy.max_terms);
    Complex sum;
    int run = 0;
    Real window_max = 0;
    for (long i = 0; i < limit; ++i) {
        long n = lo + i;
        Real mag = 0;
        if (coeffs[i] != 0) {
            Complex term = qn * to_real(coeffs[i]);
            sum += term;
            mag = term.abs();
        }
        Real scale = std::max(Real(1), sum.abs());
        if (mag < thresh * scale) {
            if (run == 0) window_max = 0;
            ++run;
            window_max = std::max(window_max, mag);
        } else {
            run = 0;
        }
        if (n >= 10 && run >= 12) {
            EvalResult r;
            r.err = window_max * absq / (1 - absq) * 1000;
            r.err = std::max(r.err, thresh * scale);
            r.value = sum;
            r.terms_used = i + 1;
            r.point = tau;
            r.abs_q = absq;
            if (r.err >= boost::multiprecision::pow(Real(10), -policy.digits) * scale)
                throw ConvergenceError("tail estimate above target", false);
            return r;
        }
        qn = qn * q;
    }
    throw ConvergenceError("series did not converge within " + std::to_string(limit) + " terms (|q| = " + absq.str(6) + ")", true);
}

inline EvalResult eval_x(const CurveRecord& c, const CMPoint& tau, const PrecisionPolicy& policy = {})
{
    return eval_series(c.x, -2, reduce_for_level(tau, c.N), policy);
}

inline EvalResult eval_y(const CurveRecord& c, const CMPoint& tau, const PrecisionPolicy& policy = {})
{
    return eval_series(c.y, -3, reduce_for_level(tau, c.N), policy);
}

// Evaluates through the registry, lengthening the record when the terms run out.
template <class Eval>
EvalResult eval_with_growth(LevelRegistry& reg, int N, const CMPoint& tau, const PrecisionPolicy& policy, Eval eval, long max_order = 40000)
{
    long order = kDefaultOrder;
    for (;;) {
        auto rec = reg.record(N, order);
        try {
            return eval(*rec, tau, policy);
        } catch (const ConvergenceError& e) {
            if (!e.ran_out_of_terms() || rec->order >= max_order) throw;
            order = std::min(max_order, rec->order * 2);
        }
    }
}

inline EvalResult eval_x(LevelRegistry& reg, int N, const CMPoint& tau, const PrecisionPolicy& policy = {})
{
    return eval_with_growth(reg, N, tau, policy, [](const CurveRecord& c, const CMPoint& t, const PrecisionPolicy& p) { return eval_x(c, t, p); });
}

inline EvalResult eval_y(LevelRegistry& reg, int N, const CMPoint& tau, const PrecisionPolicy& policy = {})
{
    return eval_with_growth(reg, N, tau, policy, [](const CurveRecord& c, const CMPoint& t, const PrecisionPolicy& p) { return eval_y(c, t, p); });
}

// The point i sqrt(m/N), root of N z^2 + m.
inline CMPoint sqrt_point(long m, long N) { return cm_root({Int(N), Int(0), Int(m)}); }

// y = -P(x)/Q(x) with first-order error propagation.
inline EvalResult y_from_pq(const IntPoly& P, const IntPoly& Q, const EvalResult& x)
{
    Complex p = eval_poly(P, x.value), q = eval_poly(Q, x.value);
    Complex dp = eval_poly(P.derivative(), x.value), dq = eval_poly(Q.derivative(), x.value);
    Real qa = q.abs();
    if (qa <= (dq.abs() + 1) * x.err * 10) throw std::domain_error("Q(x) is within error of zero");
    EvalResult r = x;
    r.value = -(p / q);
    Complex deriv = (dp * q - p * dq) / (q * q);
    r.err = deriv.abs() * x.err + x.err;
    return r;
}

struct CubicResidual {
    Real residual;
    bool disc_nonneg_real;  // (Ax + C)^2 + 4(x^3 + Bx^2 + Dx + E) is a non-negative real
};

inline CubicResidual cubic_residual(const Complex& x, const Complex& y, const Cubic& k)
{
    Complex A(to_real(k.A)), B(to_real(k.B)), C(to_real(k.C)), D(to_real(k.D)), E(to_real(k.E));
    Complex x2 = x * x, x3 = x2 * x;
    Complex rel = y * y - x3 - A * x * y - B * x2 - C * y - D * x - E;
    Complex lin = A * x + C;
    Complex disc = lin * lin + Complex(Real(4)) * (x3 + B * x2 + D * x + E);
    Real tol = boost::multiprecision::pow(Real(10), -static_cast<int>(Real::default_precision() / 2)) * std::max(Real(1), disc.abs());
    return {rel.abs(), boost::multiprecision::abs(disc.im) <= tol && disc.re >= -tol};
}

inline CubicResidual cubic_residual(const EvalResult& x, const EvalResult& y, const Cubic& k) { return cubic_residual(x.value, y.value, k); }

}  // namespace si
