#pragma once

#include "si/int_poly.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace si {

// Dense polynomials over F_p, ascending coefficients in [0, p).
class ZpPoly {
public:
    using Coeffs = std::vector<std::int64_t>;

    ZpPoly(std::int64_t p, Coeffs c = {}) : p_(p), c_(std::move(c))
    {
        for (auto& v : c_) v = ((v % p_) + p_) % p_;
        trim();
    }
    static ZpPoly from_int(const IntPoly& f, std::int64_t p)
    {
        Coeffs c;
        for (const auto& v : f.coeffs()) {
            Int r = v % p;
            c.push_back(r.get_si());
        }
        return ZpPoly(p, std::move(c));
    }

    std::int64_t p() const { return p_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const Coeffs& coeffs() const { return c_; }
    std::int64_t coeff(int i) const { return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : 0; }
    std::int64_t lead() const { return c_.back(); }

    std::int64_t inv(std::int64_t a) const { return pow_mod(a, p_ - 2); }
    std::int64_t pow_mod(std::int64_t a, std::int64_t e) const
    {
        std::int64_t r = 1;
        a %= p_;
        while (e > 0) {
            if (e & 1) r = r * a % p_;
            a = a * a % p_;
            e >>= 1;
        }
        return r;
    }

    ZpPoly monic() const
    {
        if (is_zero()) return *this;
        std::int64_t li = inv(lead());
        Coeffs c = c_;
        for (auto& v : c) v = v * li % p_;
        return ZpPoly(p_, std::move(c));
    }

    friend ZpPoly operator+(const ZpPoly& a, const ZpPoly& b)
    {
        Coeffs c(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = (a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i))) % a.p_;
        return ZpPoly(a.p_, std::move(c));
    }
    friend ZpPoly operator-(const ZpPoly& a, const ZpPoly& b)
    {
        Coeffs c(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = (a.coeff(static_cast<int>(i)) - b.coeff(static_cast<int>(i)) + a.p_) % a.p_;
        return ZpPoly(a.p_, std::move(c));
    }
    friend ZpPoly operator*(const ZpPoly& a, const ZpPoly& b)
    {
        if (a.is_zero() || b.is_zero()) return ZpPoly(a.p_);
        Coeffs c(a.c_.size() + b.c_.size() - 1, 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] = (c[i + j] + a.c_[i] * b.c_[j]) % a.p_;
        return ZpPoly(a.p_, std::move(c));
    }

    // Quotient and remainder by a nonzero divisor.
    static std::pair<ZpPoly, ZpPoly> divrem(const ZpPoly& a, const ZpPoly& b)
    {
        if (b.is_zero()) throw std::domain_error("division by zero polynomial mod p");
        const std::int64_t p = a.p_;
        Coeffs r = a.c_;
        int db = b.degree();
        if (a.degree() < db) return {ZpPoly(p), a};
        Coeffs q(a.degree() - db + 1, 0);
        std::int64_t li = b.inv(b.lead());
        for (int i = a.degree() - db; i >= 0; --i) {
            std::int64_t t = r[i + db] * li % p;
            q[i] = t;
            if (t == 0) continue;
            for (int j = 0; j <= db; ++j) r[i + j] = ((r[i + j] - t * b.c_[j]) % p + p) % p;
        }
        r.resize(db);
        return {ZpPoly(p, std::move(q)), ZpPoly(p, std::move(r))};
    }
    friend ZpPoly operator%(const ZpPoly& a, const ZpPoly& b) { return divrem(a, b).second; }
    friend ZpPoly operator/(const ZpPoly& a, const ZpPoly& b) { return divrem(a, b).first; }
    friend bool operator==(const ZpPoly& a, const ZpPoly& b) { return a.p_ == b.p_ && a.c_ == b.c_; }

    ZpPoly derivative() const
    {
        Coeffs c;
        for (std::size_t i = 1; i < c_.size(); ++i) c.push_back(c_[i] * static_cast<std::int64_t>(i % p_) % p_);
        return ZpPoly(p_, std::move(c));
    }

    static ZpPoly gcd(ZpPoly a, ZpPoly b)
    {
        while (!b.is_zero()) {
            ZpPoly r = a % b;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    // s a + t b = gcd (monic)
    static void xgcd(const ZpPoly& a, const ZpPoly& b, ZpPoly& g, ZpPoly& s, ZpPoly& t)
    {
        const std::int64_t p = a.p_;
        ZpPoly r0 = a, r1 = b, s0(p, {1}), s1(p), t0(p), t1(p, {1});
        while (!r1.is_zero()) {
            auto [q, r] = divrem(r0, r1);
            r0 = std::move(r1);
            r1 = std::move(r);
            ZpPoly s2 = s0 - q * s1, t2 = t0 - q * t1;
            s0 = std::move(s1);
            s1 = std::move(s2);
            t0 = std::move(t1);
            t1 = std::move(t2);
        }
        std::int64_t li = r0.inv(r0.lead());
        ZpPoly scale(p, {li});
        g = r0 * scale;
        s = s0 * scale;
        t = t0 * scale;
    }

    static ZpPoly powmod(ZpPoly base, Int e, const ZpPoly& mod)
    {
        ZpPoly r(base.p_, {1});
        base = base % mod;
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) r = (r * base) % mod;
            base = (base * base) % mod;
            e >>= 1;
        }
        return r;
    }

private:
    void trim()
    {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::int64_t p_;
    Coeffs c_;
};

namespace detail {

// Monic irreducible factors of a monic squarefree polynomial over F_p (p odd).
inline std::vector<ZpPoly> factor_mod_p(const ZpPoly& f)
{
    const std::int64_t p = f.p();
    std::vector<ZpPoly> out;
    std::mt19937_64 rng(0x5eed);
    const ZpPoly x(p, {0, 1});

    // Distinct-degree split.
    std::vector<std::pair<int, ZpPoly>> dd;
    ZpPoly rest = f;
    ZpPoly h = x;
    for (int d = 1; 2 * d <= rest.degree(); ++d) {
        h = ZpPoly::powmod(h, Int(p), rest);
        ZpPoly g = ZpPoly::gcd(rest, h - x);
        if (g.degree() > 0) {
            dd.emplace_back(d, g);
            rest = rest / g;
            h = h % rest;
        }
    }
    if (rest.degree() > 0) dd.emplace_back(rest.degree(), rest);

    // Equal-degree split (Cantor-Zassenhaus).
    for (auto& [d, g] : dd) {
        std::vector<ZpPoly> work{g};
        while (!work.empty()) {
            ZpPoly u = work.back();
            work.pop_back();
            if (u.degree() == d) {
                out.push_back(u.monic());
                continue;
            }
            Int e;
            mpz_ui_pow_ui(e.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(d));
            e = (e - 1) / 2;
            for (;;) {
                ZpPoly::Coeffs rc(u.degree());
                for (auto& v : rc) v = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p));
                ZpPoly a(p, rc);
                if (a.degree() < 1) continue;
                ZpPoly b = ZpPoly::powmod(a, e, u) - ZpPoly(p, {1});
                ZpPoly g2 = ZpPoly::gcd(u, b);
                if (g2.degree() > 0 && g2.degree() < u.degree()) {
                    work.push_back(g2);
                    work.push_back(u / g2);
                    break;
                }
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const ZpPoly& a, const ZpPoly& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return a.coeffs() < b.coeffs();
    });
    return out;
}

inline IntPoly to_intpoly(const ZpPoly& f)
{
    std::vector<Int> c;
    for (auto v : f.coeffs()) c.emplace_back(static_cast<long>(v));
    return IntPoly(std::move(c));
}

inline IntPoly mod_poly(const IntPoly& f, const Int& m)
{
    std::vector<Int> c = f.coeffs();
    for (auto& v : c) mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
    return IntPoly(std::move(c));
}

inline IntPoly symmetric_mod(const IntPoly& f, const Int& m)
{
    Int half = m / 2;
    std::vector<Int> c = f.coeffs();
    for (auto& v : c) {
        mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
        if (v > half) v -= m;
    }
    return IntPoly(std::move(c));
}

inline ZpPoly reduce_p(const IntPoly& f, std::int64_t p) { return ZpPoly::from_int(f, p); }

// Lifts target = g h (mod p) with monic g, h to modulus p^steps+1.
inline void hensel_pair(const IntPoly& target, IntPoly& g, IntPoly& h, std::int64_t p, int steps)
{
    ZpPoly gp = reduce_p(g, p), hp = reduce_p(h, p), gg(p), s(p), t(p);
    ZpPoly::xgcd(gp, hp, gg, s, t);
    if (gg.degree() != 0) throw std::logic_error("Hensel lifting needs coprime factors");
    Int pk = p;
    for (int k = 0; k < steps; ++k) {
        Int next = pk * p;
        IntPoly diff = mod_poly(target - g * h, next);
        std::vector<Int> ec = diff.coeffs();
        for (auto& v : ec) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), pk.get_mpz_t());
        ZpPoly e = reduce_p(IntPoly(std::move(ec)), p);
        ZpPoly sigma = (t * e) % gp;
        ZpPoly tau = (e - sigma * hp) / gp;
        g = mod_poly(g + to_intpoly(sigma) * pk, next);
        h = mod_poly(h + to_intpoly(tau) * pk, next);
        gp = reduce_p(g, p);
        hp = reduce_p(h, p);
        pk = next;
    }
}

inline std::vector<std::int64_t> small_primes_from(std::int64_t start, int count)
{
    std::vector<std::int64_t> out;
    for (std::int64_t n = start; static_cast<int>(out.size()) < count; ++n) {
        bool prime = n >= 2;
        for (std::int64_t d = 2; d * d <= n && prime; ++d)
            if (n % d == 0) prime = false;
        if (prime) out.push_back(n);
    }
    return out;
}

// Irreducible factors of a primitive squarefree polynomial of positive degree, primitive with positive lead.
inline std::vector<IntPoly> zassenhaus(const IntPoly& f)
{
    if (f.degree() <= 1) return {f.primitive_part()};
    const Int& lc = f.lead();

    std::int64_t p = 0;
    ZpPoly fp(3);
    for (std::int64_t cand : small_primes_from(3, 400)) {
        if (mpz_divisible_ui_p(lc.get_mpz_t(), static_cast<unsigned long>(cand))) continue;
        ZpPoly r = reduce_p(f, cand);
        if (ZpPoly::gcd(r, r.derivative()).degree() != 0) continue;
        p = cand;
        fp = r;
        break;
    }
    if (p == 0) throw std::runtime_error("no suitable prime for factoring");
    std::vector<ZpPoly> modp = factor_mod_p(fp.monic());
    if (modp.size() == 1) return {f.primitive_part()};

    // Coefficient bound for factors of lc * f.
    Int norm2 = 0;
    for (const auto& v : f.coeffs()) norm2 += v * v;
    Int norm;
    mpz_sqrt(norm.get_mpz_t(), norm2.get_mpz_t());
    norm += 1;
    Int bound = abs(lc) * norm;
    mpz_mul_2exp(bound.get_mpz_t(), bound.get_mpz_t(), static_cast<unsigned long>(f.degree()));
    bound *= 2;
    int steps = 0;
    Int modulus = p;
    while (modulus <= bound) modulus *= p, ++steps;
    // modulus = p^(steps + 1)

    // Monic target lc^{-1} f mod p^(steps+1).
    Int lc_inv;
    mpz_invert(lc_inv.get_mpz_t(), lc.get_mpz_t(), modulus.get_mpz_t());
    IntPoly target = mod_poly(f * lc_inv, modulus);

    std::vector<IntPoly> lifted;
    IntPoly cur_target = target;
    for (std::size_t i = 0; i + 1 < modp.size(); ++i) {
        IntPoly g = to_intpoly(modp[i]);
        ZpPoly rest(p, {1});
        for (std::size_t j = i + 1; j < modp.size(); ++j) rest = rest * modp[j];
        IntPoly h = to_intpoly(rest);
        hensel_pair(cur_target, g, h, p, steps);
        lifted.push_back(g);
        cur_target = h;
    }
    lifted.push_back(cur_target);

    // Recombination: subsets by size, then lexicographic.
    std::vector<IntPoly> found;
    IntPoly rem = f;
    std::vector<IntPoly> pool = lifted;
    std::size_t size = 1;
    while (2 * size <= pool.size()) {
        bool progressed = false;
        std::vector<std::size_t> idx(size);
        for (std::size_t i = 0; i < size; ++i) idx[i] = i;
        for (;;) {
            IntPoly prod = IntPoly::constant(rem.lead());
            for (auto i : idx) prod = mod_poly(prod * pool[i], modulus);
            IntPoly cand = symmetric_mod(prod, modulus).primitive_part();
            if (cand.degree() > 0) {
                if (auto q = divide_exact(rem, cand)) {
                    found.push_back(cand);
                    rem = *q;
                    std::vector<IntPoly> keep;
                    for (std::size_t i = 0, k = 0; i < pool.size(); ++i) {
                        if (k < idx.size() && idx[k] == i) {
                            ++k;
                            continue;
                        }
                        keep.push_back(pool[i]);
                    }
                    pool = std::move(keep);
                    progressed = true;
                    break;
                }
            }
            // next combination
            int pos = static_cast<int>(size) - 1;
            while (pos >= 0 && idx[pos] == pool.size() - size + pos) --pos;
            if (pos < 0) break;
            ++idx[pos];
            for (std::size_t i = pos + 1; i < size; ++i) idx[i] = idx[i - 1] + 1;
        }
        if (!progressed) ++size;
    }
    if (rem.degree() > 0) found.push_back(rem.primitive_part());
    return found;
}

}  // namespace detail

struct FactoredPoly {
    Int content;
    std::vector<std::pair<IntPoly, int>> factors;

    IntPoly expand() const
    {
        IntPoly r = IntPoly::constant(content);
        for (const auto& [g, e] : factors)
            for (int i = 0; i < e; ++i) r = r * g;
        return r;
    }
};

inline FactoredPoly factor_over_z(const IntPoly& f)
{
    if (f.is_zero()) throw std::invalid_argument("cannot factor the zero polynomial");
    FactoredPoly out;
    out.content = f.content();
    if (f.lead() < 0) out.content = -out.content;
    IntPoly prim = f.primitive_part();
    if (prim.degree() == 0) return out;

    // Squarefree decomposition over Z; all quotients are exact by Gauss's lemma.
    IntPoly a = gcd(prim, prim.derivative()).primitive_part();
    IntPoly b = *divide_exact(prim, a);
    for (int mult = 1; b.degree() > 0; ++mult) {
        IntPoly c = gcd(a, b).primitive_part();
        IntPoly part = *divide_exact(b, c);
        if (part.degree() > 0)
            for (auto& g : detail::zassenhaus(part.primitive_part())) out.factors.emplace_back(g, mult);
        a = *divide_exact(a, c);
        b = c;
    }
    std::sort(out.factors.begin(), out.factors.end(), [](const auto& x, const auto& y) {
        if (x.first.degree() != y.first.degree()) return x.first.degree() < y.first.degree();
        if (x.first.coeffs() != y.first.coeffs()) return x.first.coeffs() < y.first.coeffs();
        return x.second < y.second;
    });
    return out;
}

}  // namespace si
