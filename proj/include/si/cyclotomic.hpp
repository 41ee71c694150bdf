#pragma once

#include "si/int_poly.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace si {

inline long euler_phi(long n)
{
    long r = n;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        r -= r / p;
    }
    if (n > 1) r -= r / n;
    return r;
}

// Phi_d(t), obtained by dividing t^d - 1 by Phi_e for every proper divisor e of d.
inline const IntPoly& cyclotomic_polynomial(long d)
{
    if (d < 1) throw std::invalid_argument("cyclotomic order must be positive");
    static std::mutex mu;
    static std::map<long, IntPoly> cache;
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find(d); it != cache.end()) return it->second;
    }
    IntPoly f = IntPoly::monomial(1, d) - IntPoly::constant(1);
    for (long e = 1; e < d; ++e) {
        if (d % e) continue;
        auto q = divide_exact(f, cyclotomic_polynomial(e));
        if (!q) throw std::logic_error("cyclotomic division failed");
        f = std::move(*q);
    }
    std::lock_guard lock(mu);
    return cache.emplace(d, std::move(f)).first->second;
}

class CycInt;
Int cyc_to_int(const CycInt& c);

// Element of Z[zeta_d], stored as coefficients of 1, t, ..., t^(phi(d)-1) modulo Phi_d(t).
class CycInt {
public:
    CycInt() : d_(1), comps_{Int(0)} {}
    CycInt(const Int& v) : d_(1), comps_{v} {}  // NOLINT: integers embed implicitly
    CycInt(long v) : d_(1), comps_{Int(v)} {}   // NOLINT
    CycInt(long d, std::vector<Int> comps) : d_(d), comps_(std::move(comps))
    {
        if (static_cast<long>(comps_.size()) != euler_phi(d_)) throw std::invalid_argument("CycInt component count must equal phi(d)");
    }

    static CycInt from_int(long d, const Int& v)
    {
        std::vector<Int> c(euler_phi(d), 0);
        c[0] = v;
        return CycInt(d, std::move(c));
    }
    // v * zeta_d^k
    static CycInt zeta_power(long d, long k, const Int& v = 1)
    {
        k %= d;
        if (k < 0) k += d;
        std::vector<Int> raw(k + 1, 0);
        raw[k] = v;
        return CycInt(d, reduce(d, std::move(raw)));
    }

    long order() const { return d_; }
    const std::vector<Int>& comps() const { return comps_; }

    bool is_rational() const
    {
        for (std::size_t i = 1; i < comps_.size(); ++i)
            if (comps_[i] != 0) return false;
        return true;
    }
    bool is_zero() const
    {
        for (const auto& v : comps_)
            if (v != 0) return false;
        return true;
    }

    // Same element seen in Z[zeta_target]; target must be a multiple of the current order.
    CycInt lifted(long target) const
    {
        if (target == d_) return *this;
        if (target % d_) throw std::invalid_argument("cannot lift zeta_" + std::to_string(d_) + " into order " + std::to_string(target));
        long step = target / d_;
        std::vector<Int> raw((comps_.size() - 1) * step + 1, 0);
        for (std::size_t i = 0; i < comps_.size(); ++i) raw[i * step] = comps_[i];
        return CycInt(target, reduce(target, std::move(raw)));
    }

    static long common_order(long a, long b)
    {
        if (b % a == 0) return b;
        if (a % b == 0) return a;
        throw std::invalid_argument("incompatible cyclotomic orders " + std::to_string(a) + " and " + std::to_string(b));
    }

    CycInt& operator+=(const CycInt& o) { return combine(o, 1); }
    CycInt& operator-=(const CycInt& o) { return combine(o, -1); }
    friend CycInt operator+(CycInt a, const CycInt& b) { return a += b; }
    friend CycInt operator-(CycInt a, const CycInt& b) { return a -= b; }
    friend CycInt operator-(CycInt a)
    {
        for (auto& v : a.comps_) v = -v;
        return a;
    }
    friend CycInt operator*(const CycInt& a, const CycInt& b)
    {
        long d = common_order(a.d_, b.d_);
        if (a.d_ != d || b.d_ != d) return a.lifted(d) * b.lifted(d);
        const CycInt& x = a;
        const CycInt& y = b;
        std::vector<Int> raw(x.comps_.size() + y.comps_.size() - 1, 0);
        for (std::size_t i = 0; i < x.comps_.size(); ++i) {
            if (x.comps_[i] == 0) continue;
            for (std::size_t j = 0; j < y.comps_.size(); ++j)
                mpz_addmul(raw[i + j].get_mpz_t(), x.comps_[i].get_mpz_t(), y.comps_[j].get_mpz_t());
        }
        return CycInt(d, reduce(d, std::move(raw)));
    }
    CycInt& operator*=(const CycInt& o) { return *this = *this * o; }

    friend bool operator==(const CycInt& a, const CycInt& b)
    {
        long d = common_order(a.d_, b.d_);
        return a.lifted(d).comps_ == b.lifted(d).comps_;
    }

    // Reduce a raw coefficient vector in t modulo Phi_d (monic), returning phi(d) components.
    static std::vector<Int> reduce(long d, std::vector<Int> raw)
    {
        const IntPoly& cp = cyclotomic_polynomial(d);
        const auto& pc = cp.coeffs();
        std::size_t n = pc.size() - 1;
        for (std::size_t i = raw.size(); i-- > n;) {
            if (raw[i] == 0) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (pc[j] != 0) mpz_submul(raw[i - n + j].get_mpz_t(), raw[i].get_mpz_t(), pc[j].get_mpz_t());
            raw[i] = 0;
        }
        raw.resize(n, 0);
        return raw;
    }

private:
    CycInt& combine(const CycInt& o, int sign)
    {
        long d = common_order(d_, o.d_);
        if (d != d_) *this = lifted(d);
        if (o.d_ != d) return combine(o.lifted(d), sign);
        for (std::size_t i = 0; i < comps_.size(); ++i) {
            if (sign > 0)
                comps_[i] += o.comps_[i];
            else
                comps_[i] -= o.comps_[i];
        }
        return *this;
    }

    long d_;
    std::vector<Int> comps_;
};

// Raised when a value expected to be a rational integer still has an irrational component.
class NonRationalError : public std::runtime_error {
public:
    NonRationalError(std::size_t index, const Int& value)
        : std::runtime_error("cyclotomic value is not rational: component " + std::to_string(index) + " = " + value.get_str()),
          index_(index)
    {
    }
    std::size_t index() const { return index_; }

private:
    std::size_t index_;
};

inline Int cyc_to_int(const CycInt& c)
{
    const auto& v = c.comps();
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] != 0) throw NonRationalError(i, v[i]);
    return v[0];
}

}  // namespace si
