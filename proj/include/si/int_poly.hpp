#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace si {

using Int = mpz_class;
using Rat = mpq_class;

class IntPoly {
public:
    IntPoly() = default;
    explicit IntPoly(std::vector<Int> coeffs) : c_(std::move(coeffs)) { trim(); }
    IntPoly(std::initializer_list<long> coeffs)
    {
        for (long v : coeffs) c_.emplace_back(v);
        trim();
    }

    static IntPoly constant(const Int& v) { return IntPoly(std::vector<Int>{v}); }
    static IntPoly monomial(const Int& v, std::size_t deg)
    {
        std::vector<Int> c(deg + 1, 0);
        c[deg] = v;
        return IntPoly(std::move(c));
    }
    static IntPoly x() { return monomial(1, 1); }

    // -1 for the zero polynomial
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Int>& coeffs() const { return c_; }
    Int coeff(int i) const { return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : Int(0); }
    const Int& lead() const
    {
        if (c_.empty()) throw std::domain_error("lead coefficient of zero polynomial");
        return c_.back();
    }

    IntPoly& operator+=(const IntPoly& o)
    {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    IntPoly& operator-=(const IntPoly& o)
    {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    IntPoly& operator*=(const Int& k)
    {
        if (k == 0) c_.clear();
        for (auto& v : c_) v *= k;
        return *this;
    }

    friend IntPoly operator+(IntPoly a, const IntPoly& b) { return a += b; }
    friend IntPoly operator-(IntPoly a, const IntPoly& b) { return a -= b; }
    friend IntPoly operator-(IntPoly a)
    {
        for (auto& v : a.c_) v = -v;
        return a;
    }
    friend IntPoly operator*(IntPoly a, const Int& k) { return a *= k; }
    friend IntPoly operator*(const Int& k, IntPoly a) { return a *= k; }
    friend IntPoly operator*(const IntPoly& a, const IntPoly& b)
    {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Int> r(a.c_.size() + b.c_.size() - 1, 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) mpz_addmul(r[i + j].get_mpz_t(), a.c_[i].get_mpz_t(), b.c_[j].get_mpz_t());
        }
        return IntPoly(std::move(r));
    }
    IntPoly& operator*=(const IntPoly& o) { return *this = *this * o; }

    friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.c_ == b.c_; }

    IntPoly shifted(std::size_t k) const
    {
        if (is_zero()) return {};
        std::vector<Int> r(k, 0);
        r.insert(r.end(), c_.begin(), c_.end());
        return IntPoly(std::move(r));
    }

    Int eval(const Int& at) const
    {
        Int acc = 0;
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * at + c_[i];
        return acc;
    }

    IntPoly derivative() const
    {
        if (c_.size() <= 1) return {};
        std::vector<Int> r(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * static_cast<unsigned long>(i);
        return IntPoly(std::move(r));
    }

    Int content() const
    {
        Int g = 0;
        for (const auto& v : c_) {
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
            if (g == 1) break;
        }
        return g;
    }

    // Primitive, with positive lead coefficient.
    IntPoly primitive_part() const
    {
        if (is_zero()) return {};
        Int g = content();
        if (lead() < 0) g = -g;
        IntPoly r = *this;
        for (auto& v : r.c_) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
        return r;
    }

    std::string to_string(char var = 'x') const;

private:
    void trim()
    {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<Int> c_;
};

// Exact quotient f / g over Z, or nothing if g does not divide f.
inline std::optional<IntPoly> divide_exact(const IntPoly& f, const IntPoly& g)
{
    if (g.is_zero()) throw std::domain_error("division by zero polynomial");
    if (f.is_zero()) return IntPoly{};
    int df = f.degree(), dg = g.degree();
    if (df < dg) return std::nullopt;
    std::vector<Int> rem = f.coeffs();
    std::vector<Int> quo(df - dg + 1, 0);
    const Int& lg = g.lead();
    for (int i = df - dg; i >= 0; --i) {
        Int& top = rem[i + dg];
        if (top == 0) continue;
        if (!mpz_divisible_p(top.get_mpz_t(), lg.get_mpz_t())) return std::nullopt;
        mpz_divexact(quo[i].get_mpz_t(), top.get_mpz_t(), lg.get_mpz_t());
        for (int j = 0; j <= dg; ++j) mpz_submul(rem[i + j].get_mpz_t(), quo[i].get_mpz_t(), g.coeffs()[j].get_mpz_t());
    }
    for (const auto& v : rem)
        if (v != 0) return std::nullopt;
    return IntPoly(std::move(quo));
}

// Pseudo-remainder of f by g: lead(g)^(df-dg+1) * f mod g.
inline IntPoly pseudo_remainder(const IntPoly& f, const IntPoly& g)
{
    if (g.is_zero()) throw std::domain_error("pseudo-remainder by zero polynomial");
    std::vector<Int> r = f.coeffs();
    int dg = g.degree();
    const Int& lg = g.lead();
    int dr = static_cast<int>(r.size()) - 1;
    while (dr >= dg) {
        Int top = r[dr];
        for (auto& v : r) v *= lg;
        for (int j = 0; j <= dg; ++j) mpz_submul(r[dr - dg + j].get_mpz_t(), top.get_mpz_t(), g.coeffs()[j].get_mpz_t());
        while (dr >= 0 && r[dr] == 0) --dr;
        r.resize(dr + 1);
    }
    return IntPoly(std::move(r));
}

// Primitive gcd over Z[x] (primitive PRS), positive lead.
inline IntPoly gcd(const IntPoly& f, const IntPoly& g)
{
    if (f.is_zero()) return g.is_zero() ? IntPoly{} : (g.lead() < 0 ? -g : g);
    if (g.is_zero()) return f.lead() < 0 ? -f : f;
    Int cg;
    mpz_gcd(cg.get_mpz_t(), f.content().get_mpz_t(), g.content().get_mpz_t());
    IntPoly a = f.primitive_part(), b = g.primitive_part();
    if (a.degree() < b.degree()) std::swap(a, b);
    while (!b.is_zero()) {
        IntPoly r = pseudo_remainder(a, b);
        a = std::move(b);
        b = r.is_zero() ? IntPoly{} : r.primitive_part();
    }
    return a * cg;
}

inline std::string IntPoly::to_string(char var) const
{
    if (is_zero()) return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
        const Int& v = c_[i];
        if (v == 0) continue;
        Int mag = abs(v);
        if (out.empty())
            out += (v < 0) ? "-" : "";
        else
            out += (v < 0) ? " - " : " + ";
        if (mag != 1 || i == 0) out += mag.get_str();
        if (i >= 1) out += var;
        if (i >= 2) out += "^" + std::to_string(i);
    }
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const IntPoly& p) { return os << p.to_string(); }

// Reads polynomials such as "-x^{4}-2x^{3}+151x^{2}+1156x+2368", "X^12 - 52764X^11", "3*x^2 + 1".
inline IntPoly parse_int_poly(std::string_view text)
{
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch)) && ch != '{' && ch != '}' && ch != '*') s += ch;
    if (s.empty()) throw std::invalid_argument("empty polynomial text");
    std::vector<Int> coeffs;
    std::size_t i = 0;
    auto fail = [&](const std::string& why) { throw std::invalid_argument("bad polynomial '" + std::string(text) + "': " + why); };
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        } else if (i != 0) {
            fail("expected sign");
        }
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        Int coef = 1;
        bool have_digits = i > start;
        if (have_digits) coef = Int(s.substr(start, i - start));
        std::size_t deg = 0;
        if (i < s.size() && (s[i] == 'x' || s[i] == 'X')) {
            ++i;
            deg = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::size_t ds = i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
                if (i == ds) fail("missing exponent");
                deg = std::stoul(s.substr(ds, i - ds));
            }
        } else if (!have_digits) {
            fail("empty term");
        }
        if (coeffs.size() <= deg) coeffs.resize(deg + 1, 0);
        coeffs[deg] += sign * coef;
    }
    return IntPoly(std::move(coeffs));
}

}  // namespace si
