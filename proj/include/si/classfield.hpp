#pragma once

#include "si/cmeval.hpp"
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

class PreconditionError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct MinPolyJob {
    int N;
    long dK;
    PrecisionPolicy policy{};  // digits <= 0 selects the precision automatically
    bool force = false;        // allow composite levels
};

struct ClassRoot {
    QuadForm form;       // reduced form of discriminant N^2 dK
    QuadForm image;      // its image under phi_map
    CMPoint point;
    EvalResult x;
};

struct MinPolyResult {
    IntPoly poly;
    std::vector<ClassRoot> roots;
    Real slack;
    Real error_bound;  // propagated from the root error estimates
    int digits = 0;
    int escalations = 0;
};

inline void check_job(const MinPolyJob& job)
{
    if (!is_genus_one_level(job.N)) throw UnknownLevel(job.N);
    if (!job.force && !is_prime(job.N)) throw PreconditionError("level " + std::to_string(job.N) + " is not prime");
    check_discriminant(Int(job.dK));
}

// Digits needed to resolve the integer coefficients of prod (X - x_j), from |x_j| ~ |q_j|^-2.
inline int auto_digits(const std::vector<CMPoint>& pts, long N)
{
    double log10_size = 0;
    for (const auto& p : pts) {
        double y = reduce_for_level(p, N).imag_approx();
        log10_size += std::log10(1.0 + std::exp(4 * M_PI * y));
    }
    log10_size += pts.size() * std::log10(2.0);
    return std::max(30, 15 + static_cast<int>(std::ceil(log10_size)));
}

inline std::vector<ClassRoot> class_points(int N, long dK)
{
    Int D = Int(N) * N * dK;
    std::vector<ClassRoot> out;
    for (const auto& f : reduced_forms(D)) {
        QuadForm img = phi_map(f, N, Int(dK));
        out.push_back({f, img, cm_root(img), {}});
    }
    return out;
}

inline MinPolyResult minpoly(LevelRegistry& reg, const MinPolyJob& job)
{
    check_job(job);
    std::vector<ClassRoot> roots = class_points(job.N, job.dK);
    std::vector<CMPoint> pts;
    for (const auto& r : roots) pts.push_back(r.point);
    PrecisionPolicy pol = job.policy;
    if (pol.digits <= 0) pol.digits = auto_digits(pts, job.N);

    MinPolyResult res;
    for (int esc = 0; esc <= 4; ++esc) {
        PrecisionScope scope(pol.working_digits());
        for (auto& r : roots) r.x = eval_x(reg, job.N, r.point, pol);
        // expand prod (X - x_j), carrying an error bound per coefficient
        std::vector<Complex> coef{Complex(Real(1))};
        std::vector<Real> err{Real(0)};
        for (const auto& r : roots) {
            std::vector<Complex> next(coef.size() + 1);
            std::vector<Real> next_err(coef.size() + 1, Real(0));
            Real xa = r.x.value.abs(), xe = r.x.err;
            for (std::size_t i = 0; i < coef.size(); ++i) {
                next[i + 1] += coef[i];
                next_err[i + 1] += err[i];
                next[i] = next[i] - coef[i] * r.x.value;
                next_err[i] += err[i] * (xa + xe) + coef[i].abs() * xe;
            }
            coef = std::move(next);
            err = std::move(next_err);
        }
        std::vector<Int> ints;
        Real slack = 0, bound = 0;
        for (std::size_t i = 0; i < coef.size(); ++i) {
            const Complex& c = coef[i];
            Int v = round_to_int(c.re);
            slack = std::max(slack, boost::multiprecision::abs(c.re - to_real(v)));
            slack = std::max(slack, boost::multiprecision::abs(c.im));
            bound = std::max(bound, err[i]);
            ints.push_back(v);
        }
        res.poly = IntPoly(std::move(ints));
        res.roots = roots;
        res.slack = slack;
        res.error_bound = bound;
        res.digits = pol.digits;
        res.escalations = esc;
        if (slack < Real(0.25) && bound < Real(0.25)) return res;
        pol.digits *= 2;
    }
    throw std::runtime_error("minpoly: rounding slack " + res.slack.str(3) + " after 4 escalations");
}

struct HeegnerPoint {
    ClassRoot root;
    EvalResult y;
    Real residual;
};

inline std::vector<HeegnerPoint> heegner_points(LevelRegistry& reg, const MinPolyJob& job)
{
    check_job(job);
    PrecisionPolicy pol = job.policy;
    if (pol.digits <= 0) pol.digits = 40;
    PrecisionScope scope(pol.working_digits());
    const Cubic k = reg.curve_coeffs(job.N);
    std::vector<HeegnerPoint> out;
    for (auto& r : class_points(job.N, job.dK)) {
        r.x = eval_x(reg, job.N, r.point, pol);
        EvalResult y = eval_y(reg, job.N, r.point, pol);
        Real res = cubic_residual(r.x, y, k).residual;
        Real scale = std::max(Real(1), r.x.value.abs());
        Real tol = boost::multiprecision::pow(Real(10), -(pol.digits - 5)) * scale * scale * scale;
        if (res > tol) throw std::runtime_error("Heegner point off the curve for form " + r.form.to_string() + ": residual " + res.str(3));
        out.push_back({r, y, res});
    }
    Real sep = boost::multiprecision::pow(Real(10), -(pol.digits / 2));
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t j = i + 1; j < out.size(); ++j)
            if ((out[i].root.x.value - out[j].root.x.value).abs() < sep)
                throw std::runtime_error("Heegner points " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
    return out;
}

}  // namespace si
