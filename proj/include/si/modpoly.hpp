#pragma once

#include "si/curve.hpp"
#include "si/cyclotomic.hpp"
#include "si/qseries.hpp"
#include "si/ylinear.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace si {

class PipelineError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class InsufficientData : public std::runtime_error {
public:
    InsufficientData(long have, long need)
        : std::runtime_error("curve record order " + std::to_string(have) + " is too short; need at least " + std::to_string(need)),
          need_(need)
    {
    }
    long required_order() const { return need_; }

private:
    long need_;
};

inline constexpr long kGuardTerms = 16;

// Upper triangular (a b; 0 d) with ad = m, 0 <= b < d, gcd(a, b, d) = 1.
struct OmegaMatrix {
    long a, b, d;
    friend bool operator==(const OmegaMatrix&, const OmegaMatrix&) = default;
};

inline std::vector<OmegaMatrix> omega_set(long m)
{
    if (m < 1) throw std::invalid_argument("omega_set needs m >= 1");
    std::vector<OmegaMatrix> out;
    for (long d = 1; d <= m; ++d) {
        if (m % d) continue;
        long a = m / d;
        for (long b = 0; b < d; ++b)
            if (std::gcd(std::gcd(a, b), d) == 1) out.push_back({a, b, d});
    }
    return out;
}

inline long psi(long m) { return static_cast<long>(omega_set(m).size()); }

inline long sigma1_plus(long m)
{
    if (m < 1) throw std::invalid_argument("sigma1_plus needs m >= 1");
    long s = 0;
    for (long d = 1; d <= m; ++d)
        if (m % d == 0) s += std::max(d, m / d);
    return s;
}

inline bool is_perfect_square(long m)
{
    long r = static_cast<long>(std::llround(std::sqrt(static_cast<double>(m))));
    for (long c = std::max(0L, r - 1); c <= r + 1; ++c)
        if (c * c == m) return true;
    return false;
}

// Record order needed so that every coefficient of Phi_m is known through q^guard.
inline long required_order(long m, long guard = kGuardTerms)
{
    Rat sum = 0, worst = 0;
    for (const auto& w : omega_set(m)) {
        sum += Rat(w.a, w.d);
        worst = std::max(worst, Rat(w.d, w.a));
    }
    Rat need = worst * (guard + 1 + 2 * sum);
    Int k = need.get_num() / need.get_den();
    if (k * need.get_den() != need.get_num()) k += 1;
    return k.get_si() - 1;
}

// x_N at (az + b)/d as a series in q^(1/d) over Z[zeta_d].
inline CycSeries omega_pullback(const CurveRecord& c, const OmegaMatrix& w)
{
    const long a = w.a, d = w.d;
    const long phi = euler_phi(d);
    std::vector<CycInt> coeffs(static_cast<std::size_t>(a * (c.order + 2) + 1), CycInt::from_int(d, 0));
    // Powers of zeta_d as ready-reduced component vectors.
    std::vector<std::vector<Int>> zeta(static_cast<std::size_t>(d));
    for (long k = 0; k < d; ++k) zeta[k] = CycInt::zeta_power(d, k).comps();
    for (long n = -2; n <= c.order; ++n) {
        const Int& cn = c.x_coeff(n);
        if (cn == 0) continue;
        long k = ((w.b * n) % d + d) % d;
        std::vector<Int> comps(static_cast<std::size_t>(phi));
        for (long i = 0; i < phi; ++i) comps[i] = cn * zeta[k][i];
        coeffs[static_cast<std::size_t>(a * (n + 2))] = CycInt(d, std::move(comps));
    }
    return CycSeries(d, -2 * a, a * (c.order + 1), std::move(coeffs));
}

struct ModularPolynomial {
    int N;
    long m;
    std::vector<IntSeries> series;      // coefficient of X^j as a q-series
    std::vector<YLinearPoly> coeffs;    // the same coefficient as p(x) + y q(x)
    long degree() const { return static_cast<long>(coeffs.size()) - 1; }
};

namespace detail {

template <class R>
std::vector<QSeries<R>> times_linear(const std::vector<QSeries<R>>& poly, const QSeries<R>& root)
{
    // poly * (X - root)
    std::vector<QSeries<R>> out(poly.size() + 1);
    for (std::size_t k = 0; k <= poly.size(); ++k) {
        if (k == 0) {
            out[0] = -(poly[0] * root);
        } else if (k == poly.size()) {
            out[k] = poly[k - 1];
        } else {
            out[k] = poly[k - 1] - poly[k] * root;
        }
    }
    return out;
}

inline std::vector<IntSeries> poly_mul(const std::vector<IntSeries>& a, const std::vector<IntSeries>& b)
{
    std::vector<IntSeries> out(a.size() + b.size() - 1);
    std::vector<bool> set(out.size(), false);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            IntSeries t = a[i] * b[j];
            out[i + j] = set[i + j] ? out[i + j] + t : t;
            set[i + j] = true;
        }
    return out;
}

}  // namespace detail

// Power series x^a and y x^a, cached per curve for the pole reduction.
class MonomialTable {
public:
    explicit MonomialTable(const CurveRecord& c) : x_(c.x_series()), y_(c.y_series()), cubic_(c.cubic) {}

    const IntSeries& xpow(long a)
    {
        while (static_cast<long>(xp_.size()) <= a) xp_.push_back(xp_.empty() ? IntSeries::constant(1) : xp_.back() * x_);
        return xp_[static_cast<std::size_t>(a)];
    }
    const IntSeries& yxpow(long a)
    {
        while (static_cast<long>(yp_.size()) <= a) yp_.push_back(yp_.empty() ? y_ : yp_.back() * x_);
        return yp_[static_cast<std::size_t>(a)];
    }
    const Cubic& cubic() const { return cubic_; }

private:
    IntSeries x_, y_;
    Cubic cubic_;
    std::vector<IntSeries> xp_, yp_;
};

// Writes f as p(x) + y q(x) by cancelling poles from the top; the remainder must vanish on f's window.
inline YLinearPoly reduce_to_xy(const IntSeries& f0, MonomialTable& tab, long guard = kGuardTerms)
{
    IntSeries f = f0.reindexed(1);
    if (f.trunc() < guard) throw InsufficientData(f.trunc(), guard);
    std::vector<Int> p, q;
    for (;;) {
        std::int64_t v = f.valuation();
        if (v >= 0 || v >= f.trunc()) break;
        long k = -v;
        Int c = f.coeff(v);
        if (k == 1) throw PipelineError("pole of order one cannot be cancelled: not a function on the quotient");
        if (k % 2 == 0) {
            long a = k / 2;
            if (static_cast<long>(p.size()) <= a) p.resize(a + 1, 0);
            p[a] += c;
            f = f - tab.xpow(a) * c;
        } else {
            long a = (k - 3) / 2;
            if (static_cast<long>(q.size()) <= a) q.resize(a + 1, 0);
            q[a] += c;
            f = f - tab.yxpow(a) * c;
        }
    }
    if (f.trunc() > 0) {
        Int c0 = f.coeff(0);
        if (p.empty()) p.resize(1, 0);
        p[0] += c0;
        f = f - IntSeries::constant(c0);
    }
    for (std::int64_t n = f.lo(); n < f.trunc() && n < f.stored_end(); ++n)
        if (f.coeff(n) != 0) throw PipelineError("nonzero remainder at q^" + std::to_string(n) + " after pole reduction");
    return {IntPoly(std::move(p)), IntPoly(std::move(q))};
}

inline YLinearPoly reduce_to_xy(const IntSeries& f, const CurveRecord& c, long guard = kGuardTerms)
{
    MonomialTable tab(c);
    return reduce_to_xy(f, tab, guard);
}

// Re-expands p(x) + y q(x) as a q-series on the curve.
inline IntSeries expand_ylinear(const YLinearPoly& g, MonomialTable& tab)
{
    IntSeries out = IntSeries::constant(0);
    for (int i = 0; i <= g.p.degree(); ++i)
        if (g.p.coeff(i) != 0) out = out + tab.xpow(i) * g.p.coeff(i);
    for (int i = 0; i <= g.q.degree(); ++i)
        if (g.q.coeff(i) != 0) out = out + tab.yxpow(i) * g.q.coeff(i);
    return out;
}

// Expands prod over Omega(m) of (X - x_N o w), one (a, d) block at a time.
inline std::vector<IntSeries> phi_series(const CurveRecord& c, long m)
{
    long need = required_order(m);
    if (c.order < need) throw InsufficientData(c.order, need);
    std::map<std::pair<long, long>, std::vector<OmegaMatrix>> blocks;
    for (const auto& w : omega_set(m)) blocks[{w.d, w.a}].push_back(w);

    std::vector<IntSeries> total{IntSeries::constant(1)};
    for (const auto& [key, ws] : blocks) {
        const long d = key.first;
        std::vector<CycSeries> poly{CycSeries::constant(CycInt::from_int(d, 1))};
        for (const auto& w : ws) poly = detail::times_linear(poly, omega_pullback(c, w));
        std::vector<IntSeries> block;
        block.reserve(poly.size());
        for (const auto& s : poly) {
            IntSeries r;
            try {
                r = to_integer(s);
            } catch (const NonRationalError& e) {
                throw PipelineError(std::string("block product is not rational: ") + e.what());
            }
            try {
                block.push_back(r.reindexed(1));
            } catch (const std::invalid_argument& e) {
                throw PipelineError(std::string("fractional exponent survived the block product: ") + e.what());
            }
        }
        total = detail::poly_mul(total, block);
    }
    return total;
}

inline ModularPolynomial phi_polynomial(const CurveRecord& c, long m)
{
    if (m < 2) throw std::invalid_argument("phi_polynomial needs m > 1");
    if (std::gcd(m, static_cast<long>(c.N)) != 1) throw std::invalid_argument("m must be coprime to the level");
    ModularPolynomial out{c.N, m, phi_series(c, m), {}};
    MonomialTable tab(c);
    for (const auto& s : out.series) out.coeffs.push_back(reduce_to_xy(s, tab));
    if (!(out.coeffs.back() == YLinearPoly{IntPoly{1}, IntPoly{}})) throw PipelineError("modular polynomial is not monic in X");
    return out;
}

struct PQPair {
    IntPoly P, Q;
};

// Phi evaluated at X = x, as P(x) + y Q(x).
inline PQPair pq_from_phi(const ModularPolynomial& phi, const Cubic& k)
{
    YLinearPoly acc{IntPoly{}, IntPoly{}};
    YLinearPoly xpow{IntPoly{1}, IntPoly{}};
    const YLinearPoly xlin{IntPoly::x(), IntPoly{}};
    for (const auto& f : phi.coeffs) {
        acc = acc + ylinear_mul(f, xpow, k);
        xpow = ylinear_mul(xpow, xlin, k);
    }
    return {acc.p, acc.q};
}

inline PQPair pq_extract(const CurveRecord& c, long m)
{
    if (is_perfect_square(m)) throw std::invalid_argument("P/Q decomposition needs m that is not a perfect square");
    ModularPolynomial phi = phi_polynomial(c, m);
    PQPair r = pq_from_phi(phi, c.cubic);
    long s = sigma1_plus(m);
    if (r.P.degree() != s) throw PipelineError("deg P = " + std::to_string(r.P.degree()) + ", expected " + std::to_string(s));
    if (abs(r.P.lead()) != 1) throw PipelineError("P is not monic up to sign");
    if (r.Q.degree() > s - 2) throw PipelineError("deg Q = " + std::to_string(r.Q.degree()) + " exceeds " + std::to_string(s - 2));
    return r;
}

}  // namespace si
