#pragma once

#include "si/int_poly.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace si {

// a x^2 + b xy + c y^2
struct QuadForm {
    Int a, b, c;

    Int disc() const { return b * b - 4 * a * c; }
    Int eval(const Int& x, const Int& y) const { return a * x * x + b * x * y + c * y * y; }
    bool is_primitive() const
    {
        Int g;
        mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        return g == 1;
    }
    bool is_reduced() const
    {
        if (abs(b) > a || a > c) return false;
        if ((abs(b) == a || a == c) && b < 0) return false;
        return true;
    }
    std::string to_string() const { return "[" + a.get_str() + "," + b.get_str() + "," + c.get_str() + "]"; }
    friend bool operator==(const QuadForm&, const QuadForm&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const QuadForm& q) { return os << q.to_string(); }

// 2x2 matrix (p q; r s) acting by z -> (pz + q)/(rz + s).
struct Matrix2 {
    Rat p, q, r, s;

    Rat det() const { return p * s - q * r; }
    friend Matrix2 operator*(const Matrix2& x, const Matrix2& y)
    {
        return {x.p * y.p + x.q * y.r, x.p * y.q + x.q * y.s, x.r * y.p + x.s * y.r, x.r * y.q + x.s * y.s};
    }
    friend bool operator==(const Matrix2&, const Matrix2&) = default;
    static Matrix2 identity() { return {1, 0, 0, 1}; }
};

// Acts on the upper half plane like the Fricke involution z -> -1/(Nz).
inline Matrix2 fricke(long N) { return {0, -1, N, 0}; }

// tau = (-b + i sqrt|D|) / (2a)
struct CMPoint {
    Int a, b, D;

    double imag_approx() const { return std::sqrt(-D.get_d()) / (2.0 * a.get_d()); }
    double real_approx() const { return -b.get_d() / (2.0 * a.get_d()); }
    QuadForm form() const
    {
        Int num = b * b - D;
        Int den = 4 * a;
        if (!mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t())) throw std::invalid_argument("CM point has no integral form");
        return {a, b, num / den};
    }
    friend bool operator==(const CMPoint&, const CMPoint&) = default;
};

// Gauss reduction; the returned form is properly equivalent to the input.
inline QuadForm reduce(QuadForm f)
{
    if (f.a <= 0 || f.disc() >= 0) throw std::invalid_argument("reduce needs a positive definite form");
    for (;;) {
        // Normalize b into (-a, a].
        Int twoa = 2 * f.a;
        if (f.b > f.a || f.b <= -f.a) {
            Int k;
            Int shifted = f.a - f.b;
            mpz_fdiv_q(k.get_mpz_t(), shifted.get_mpz_t(), twoa.get_mpz_t());
            // b -> b + 2ak, c -> a k^2 + b k + c
            f.c = f.a * k * k + f.b * k + f.c;
            f.b = f.b + twoa * k;
        }
        if (f.a > f.c) {
            std::swap(f.a, f.c);
            f.b = -f.b;
            continue;
        }
        if (f.a == f.c && f.b < 0) f.b = -f.b;
        return f;
    }
}

inline void check_discriminant(const Int& D)
{
    Int r = D % 4;
    if (r < 0) r += 4;
    if (D >= 0 || (r != 0 && r != 1)) throw std::invalid_argument("invalid negative discriminant " + D.get_str());
}

// Primitive reduced forms of discriminant D, ordered by a then b.
inline std::vector<QuadForm> reduced_forms(const Int& D)
{
    check_discriminant(D);
    std::vector<QuadForm> out;
    Int absD = -D;
    for (Int a = 1; 3 * a * a <= absD; ++a) {
        for (Int b = -a + 1; b <= a; ++b) {
            Int num = b * b - D;
            Int den = 4 * a;
            if (!mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t())) continue;
            Int c = num / den;
            QuadForm f{a, b, c};
            if (c < a || !f.is_reduced() || !f.is_primitive()) continue;
            out.push_back(f);
        }
    }
    return out;
}

inline long class_number(const Int& D) { return static_cast<long>(reduced_forms(D).size()); }

// Q'(x, y) = Q(alpha x + beta y, gamma x + delta y) for g = (alpha beta; gamma delta).
inline QuadForm transform(const QuadForm& f, const Int& alpha, const Int& beta, const Int& gamma, const Int& delta)
{
    return {f.eval(alpha, gamma), 2 * f.a * alpha * beta + f.b * (alpha * delta + beta * gamma) + 2 * f.c * gamma * delta, f.eval(beta, delta)};
}

inline Int ext_gcd(const Int& x, const Int& y, Int& s, Int& t)
{
    Int g;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    return g;
}

struct CoprimeRep {
    QuadForm form;
    Matrix2 transform;  // unimodular, integer entries
};

// Equivalent form whose first coefficient is prime to M, searching (x, y) outward from (1, 0).
inline CoprimeRep coprime_rep(const QuadForm& f, const Int& M)
{
    if (!f.is_primitive()) throw std::invalid_argument("coprime_rep needs a primitive form");
    const Int bound = 10 * M;
    for (Int r = 1; r <= bound; ++r) {
        // Pairs with max(|x|, |y|) = r, one from each +/- pair, in a fixed order.
        std::vector<std::pair<Int, Int>> ring;
        ring.emplace_back(r, 0);
        for (Int y = 1; y <= r; ++y) {
            if (y < r) {
                ring.emplace_back(r, y);
                ring.emplace_back(-r, y);
            } else {
                for (Int x = -r; x <= r; ++x) ring.emplace_back(x, y);
            }
        }
        for (const auto& [x, y] : ring) {
            Int s, t;
            if (ext_gcd(x, y, s, t) != 1) continue;
            Int v = f.eval(x, y), g;
            mpz_gcd(g.get_mpz_t(), v.get_mpz_t(), M.get_mpz_t());
            if (g != 1) continue;
            // x*s + y*t = 1: gamma = (x, -t; y, s)
            Int beta = -t, delta = s;
            QuadForm out = transform(f, x, beta, y, delta);
            return {out, Matrix2{Rat(x), Rat(beta), Rat(y), Rat(delta)}};
        }
    }
    throw std::runtime_error("coprime_rep search bound exceeded for " + f.to_string());
}

inline Int mod_floor(const Int& a, const Int& m)
{
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

// x = r_i mod m_i for pairwise coprime moduli; smallest non-negative solution.
inline Int crt(const std::vector<std::pair<Int, Int>>& congruences)
{
    Int x = 0, mod = 1;
    for (const auto& [r, m] : congruences) {
        Int s, t;
        if (ext_gcd(mod, m, s, t) != 1) throw std::invalid_argument("CRT moduli are not coprime");
        // x + mod*k = r (mod m) -> k = (r - x) * s (mod m)
        Int k = mod_floor((r - x) * s, m);
        x += mod * k;
        mod *= m;
        x = mod_floor(x, mod);
    }
    return x;
}

inline Int inverse_mod(const Int& a, const Int& m)
{
    Int r;
    if (m == 1) return 0;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) throw std::invalid_argument("no inverse of " + a.get_str() + " mod " + m.get_str());
    return r;
}

// Sends a form of discriminant N^2 dK to a form of discriminant dK.
inline QuadForm phi_map(const QuadForm& f, long N, const Int& dK)
{
    if (f.disc() != Int(N) * N * dK) throw std::invalid_argument("phi_map: discriminant of " + f.to_string() + " is not N^2 dK");
    CoprimeRep cr = coprime_rep(f, Int(2 * N));
    const Int& a1 = cr.form.a;
    const Int& b1 = cr.form.b;
    const Int& c1 = cr.form.c;
    long l = (N % 2 == 0) ? 1 : 0;
    Int Nodd = N >> l;
    Int two_pow = Int(1) << (l + 2);
    bool even_disc = mod_floor(Int(N) * N * dK, 4) == 0;
    Int target2 = even_disc ? Int(0) : Int(N);

    // b1 + 2 a1 k = 0 (mod N')
    Int k_odd = mod_floor(-b1 * inverse_mod(2 * a1, Nodd), Nodd);
    // b1 + 2 a1 k = target2 (mod 2^(l+2)); 2 a1 k is even, so divide through by 2.
    Int rhs = target2 - b1;
    if (mod_floor(rhs, 2) != 0) throw std::runtime_error("phi_map: parity obstruction for " + f.to_string());
    Int half_mod = two_pow / 2;
    Int k_two = mod_floor((rhs / 2) * inverse_mod(a1, half_mod), half_mod);
    Int k = crt({{k_odd, Nodd}, {k_two, half_mod}});

    QuadForm q1{a1, b1 + 2 * a1 * k, a1 * k * k + b1 * k + c1};
    Int NN = Int(N) * N;
    if (!mpz_divisible_ui_p(q1.b.get_mpz_t(), static_cast<unsigned long>(N)) || !mpz_divisible_p(q1.c.get_mpz_t(), NN.get_mpz_t()))
        throw std::runtime_error("phi_map: divisibility check failed for " + q1.to_string());
    QuadForm out{q1.a, q1.b / N, q1.c / NN};
    if (out.disc() != dK) throw std::logic_error("phi_map: discriminant not preserved");
    return out;
}

inline CMPoint cm_root(const QuadForm& f)
{
    if (f.a <= 0 || f.disc() >= 0) throw std::invalid_argument("cm_root needs a positive definite form");
    return {f.a, f.b, f.disc()};
}

// Root in the upper half plane of r z^2 + (s - p) z - q = 0.
inline CMPoint fixed_point(const Matrix2& m)
{
    if (m.r == 0) throw std::invalid_argument("fixed_point needs a nonzero lower-left entry");
    Rat A = m.r, B = m.s - m.p, C = -m.q;
    if (B * B - 4 * A * C >= 0) throw std::invalid_argument("matrix is not elliptic");
    Int l;
    mpz_lcm(l.get_mpz_t(), A.get_den_mpz_t(), B.get_den_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), C.get_den_mpz_t());
    Rat As = A * l, Bs = B * l, Cs = C * l;
    Int a = As.get_num(), b = Bs.get_num(), c = Cs.get_num();
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    a /= g, b /= g, c /= g;
    if (a < 0) a = -a, b = -b, c = -c;
    return cm_root({a, b, c});
}

inline CMPoint tau0_for(const Int& dK)
{
    check_discriminant(dK);
    if (mod_floor(dK, 4) == 1) return {1, 1, dK};  // z^2 + z + (1 - dK)/4
    return {1, 0, dK};                             // z^2 - dK/4
}

// Moves tau to a Gamma0(N)+ equivalent point with the largest imaginary part found.
// Each step applies an Atkin-Lehner matrix (e x, y; N z, e w) of determinant e.
inline CMPoint reduce_for_level(CMPoint pt, long N)
{
    std::vector<long> exact_divs;
    for (long e = 1; e <= N; ++e)
        if (N % e == 0 && std::gcd(e, N / e) == 1) exact_divs.push_back(e);
    for (int iter = 0; iter < 1000; ++iter) {
        QuadForm f = pt.form();
        // Translate so that |Re tau| <= 1/2.
        {
            Int k;
            Int num = f.a - f.b;
            Int den = 2 * f.a;
            mpz_fdiv_q(k.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
            f = transform(f, 1, k, 0, 1);  // tau - k
            pt = {f.a, f.b, f.disc()};
        }
        const double x = pt.real_approx(), y = pt.imag_approx();
        double best = 1.0 - 1e-12;  // |N z tau + e w|^2 / e must drop below this
        long be = 0, bz = 0, bw = 0;
        for (long e : exact_divs) {
            long ne = N / e;
            double se = std::sqrt(static_cast<double>(e));
            long zmax = static_cast<long>(se / (N * y)) + 1;
            for (long z = 1; z <= zmax; ++z) {
                double cx = static_cast<double>(N) * z * x, cy = static_cast<double>(N) * z * y;
                if (cy * cy >= best * e) break;
                double span = std::sqrt(best * e - cy * cy);
                long wlo = static_cast<long>(std::floor((-cx - span) / e)), whi = static_cast<long>(std::ceil((-cx + span) / e));
                for (long w = wlo; w <= whi; ++w) {
                    if (std::gcd(e * w, ne * z) != 1) continue;
                    double re = cx + static_cast<double>(e) * w;
                    double v = (re * re + cy * cy) / e;
                    if (v < best) best = v, be = e, bz = z, bw = w;
                }
            }
        }
        if (be == 0) return pt;
        // Solve e w x' - (N/e) z y' = 1.
        Int s, t;
        Int ew = Int(be) * bw, nz = Int(N / be) * bz;
        ext_gcd(ew, nz, s, t);  // ew s + nz t = 1
        Int alpha = Int(be) * s, beta = -t, gamma = Int(N) * bz, delta = Int(be) * bw;
        // tau' = (alpha tau + beta)/(gamma tau + delta); its form is Q(delta X - beta Y, -gamma X + alpha Y).
        QuadForm g = transform(f, delta, -beta, -gamma, alpha);
        Int c;
        mpz_gcd(c.get_mpz_t(), g.a.get_mpz_t(), g.b.get_mpz_t());
        mpz_gcd(c.get_mpz_t(), c.get_mpz_t(), g.c.get_mpz_t());
        g = {g.a / c, g.b / c, g.c / c};
        pt = cm_root(g);
    }
    return pt;
}

}  // namespace si
