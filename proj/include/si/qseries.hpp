#pragma once

#include "si/cyclotomic.hpp"
#include "si/int_poly.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace si {

template <class R>
struct RingOps;

template <>
struct RingOps<Int> {
    static Int zero_like(const Int&) { return 0; }
    static bool is_zero(const Int& v) { return v == 0; }
    static Int align(const Int& v, long) { return v; }
    static long order(const Int&) { return 1; }

    struct Acc {
        Int v;
        explicit Acc(const Int&) {}
        void addmul(const Int& a, const Int& b) { mpz_addmul(v.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t()); }
        Int finish() { return std::move(v); }
    };
};

template <>
struct RingOps<CycInt> {
    static CycInt zero_like(const CycInt& v) { return CycInt::from_int(v.order(), 0); }
    static bool is_zero(const CycInt& v) { return v.is_zero(); }
    static long order(const CycInt& v) { return v.order(); }
    static CycInt align(const CycInt& v, long d) { return v.lifted(d); }

    // Unreduced product accumulator; every operand must already have the accumulator's order.
    struct Acc {
        long d;
        std::vector<Int> raw;
        explicit Acc(const CycInt& like) : d(like.order()), raw(2 * like.comps().size() - 1, 0) {}
        void addmul(const CycInt& a, const CycInt& b)
        {
            const auto& x = a.comps();
            const auto& y = b.comps();
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (x[i] == 0) continue;
                for (std::size_t j = 0; j < y.size(); ++j) mpz_addmul(raw[i + j].get_mpz_t(), x[i].get_mpz_t(), y[j].get_mpz_t());
            }
        }
        CycInt finish() { return CycInt(d, CycInt::reduce(d, std::move(raw))); }
    };
};

// Truncated Laurent series sum_k c_k q^(k/s), known modulo q^(trunc/s).
// Coefficients are stored densely from exponent lo; stored entries stop at or before trunc and
// anything between the last stored entry and trunc is zero.
template <class R>
class QSeries {
public:
    static constexpr std::int64_t kExact = std::int64_t(1) << 60;

    QSeries() : s_(1), lo_(0), trunc_(kExact), c_{R(0)} {}
    QSeries(long s, std::int64_t lo, std::int64_t trunc, std::vector<R> coeffs)
        : s_(s), lo_(lo), trunc_(std::min(trunc, kExact)), c_(std::move(coeffs))
    {
        if (s_ < 1) throw std::invalid_argument("ramification index must be positive");
        if (trunc_ <= lo_) throw std::invalid_argument("series truncation must exceed its lowest exponent");
        if (static_cast<std::int64_t>(c_.size()) > trunc_ - lo_) c_.resize(static_cast<std::size_t>(trunc_ - lo_));
        if (c_.empty()) c_.push_back(R(0));
        normalize_order();
    }

    static QSeries constant(const R& v) { return QSeries(1, 0, kExact, {v}); }

    long s() const { return s_; }
    std::int64_t lo() const { return lo_; }
    std::int64_t trunc() const { return trunc_; }
    bool exact() const { return trunc_ >= kExact; }
    const std::vector<R>& coeffs() const { return c_; }
    std::int64_t stored_end() const { return lo_ + static_cast<std::int64_t>(c_.size()); }

    // Coefficient of q^(num/s).
    R coeff(std::int64_t num) const
    {
        if (num >= trunc_) throw std::out_of_range("coefficient beyond series truncation");
        if (num < lo_ || num >= stored_end()) return RingOps<R>::zero_like(c_.front());
        return c_[static_cast<std::size_t>(num - lo_)];
    }

    // Numerator of the first nonzero exponent, or trunc if none is known.
    std::int64_t valuation() const
    {
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (!RingOps<R>::is_zero(c_[i])) return lo_ + static_cast<std::int64_t>(i);
        return trunc_;
    }

    QSeries reindexed(long s_new) const
    {
        if (s_new == s_) return *this;
        if (s_new < 1) throw std::invalid_argument("ramification index must be positive");
        if (s_new % s_ == 0) {
            long k = s_new / s_;
            std::vector<R> out((c_.size() - 1) * k + 1, RingOps<R>::zero_like(c_.front()));
            for (std::size_t i = 0; i < c_.size(); ++i) out[i * k] = c_[i];
            return QSeries(s_new, lo_ * k, scale_trunc(trunc_, k), std::move(out));
        }
        // Coarser grid: every nonzero exponent must survive.
        long g = std::gcd(s_, s_new);
        if (s_new != g) return reindexed(s_ / g * s_new).reindexed(s_new);
        long k = s_ / s_new;
        std::int64_t new_lo = floor_div(lo_, k);
        std::int64_t new_trunc = exact() ? kExact : floor_div(trunc_ - 1, k) + 1;
        std::int64_t last = floor_div(stored_end() - 1, k);
        std::vector<R> out(static_cast<std::size_t>(last - new_lo + 1), RingOps<R>::zero_like(c_.front()));
        for (std::size_t i = 0; i < c_.size(); ++i) {
            std::int64_t num = lo_ + static_cast<std::int64_t>(i);
            if (RingOps<R>::is_zero(c_[i])) continue;
            if (num % k != 0)
                throw std::invalid_argument("lossy reindex: nonzero coefficient at exponent " + std::to_string(num) + "/" + std::to_string(s_));
            out[static_cast<std::size_t>(num / k - new_lo)] = c_[i];
        }
        // A truncation that falls between grid points only guarantees the coarser points below it.
        return QSeries(s_new, new_lo, new_trunc, std::move(out));
    }

    QSeries operator-() const
    {
        QSeries r = *this;
        for (auto& v : r.c_) v = -v;
        return r;
    }

    QSeries& operator*=(const R& k)
    {
        for (auto& v : c_) v = v * k;
        normalize_order();
        return *this;
    }

    friend QSeries operator+(const QSeries& a, const QSeries& b) { return add(a, b, 1); }
    friend QSeries operator-(const QSeries& a, const QSeries& b) { return add(a, b, -1); }
    friend QSeries operator*(QSeries a, const R& k) { return a *= k; }

    friend QSeries operator*(const QSeries& a0, const QSeries& b0)
    {
        long s = std::lcm(a0.s_, b0.s_);
        QSeries a = a0.reindexed(s), b = b0.reindexed(s);
        long d = common_order(a, b);
        a.align_order(d);
        b.align_order(d);
        std::int64_t lo = a.lo_ + b.lo_;
        std::int64_t trunc = std::min(sat_add(a.lo_, b.trunc_), sat_add(b.lo_, a.trunc_));
        std::int64_t len = std::min<std::int64_t>(static_cast<std::int64_t>(a.c_.size() + b.c_.size() - 1), trunc - lo);
        std::vector<R> out;
        out.reserve(static_cast<std::size_t>(len));
        const R& like = a.c_.front();
        for (std::int64_t k = 0; k < len; ++k) {
            typename RingOps<R>::Acc acc(like);
            std::int64_t i0 = std::max<std::int64_t>(0, k - static_cast<std::int64_t>(b.c_.size()) + 1);
            std::int64_t i1 = std::min<std::int64_t>(k, static_cast<std::int64_t>(a.c_.size()) - 1);
            for (std::int64_t i = i0; i <= i1; ++i) acc.addmul(a.c_[static_cast<std::size_t>(i)], b.c_[static_cast<std::size_t>(k - i)]);
            out.push_back(acc.finish());
        }
        return QSeries(s, lo, trunc, std::move(out));
    }

    QSeries& operator+=(const QSeries& o) { return *this = *this + o; }
    QSeries& operator-=(const QSeries& o) { return *this = *this - o; }
    QSeries& operator*=(const QSeries& o) { return *this = *this * o; }

    // Same series with a smaller truncation.
    QSeries truncated(std::int64_t new_trunc) const
    {
        if (new_trunc >= trunc_) return *this;
        std::vector<R> out(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(std::clamp<std::int64_t>(new_trunc - lo_, 0, static_cast<std::int64_t>(c_.size()))));
        if (out.empty()) out.push_back(RingOps<R>::zero_like(c_.front()));
        return QSeries(s_, lo_, new_trunc, std::move(out));
    }

private:
    static std::int64_t floor_div(std::int64_t a, std::int64_t b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
    static std::int64_t scale_trunc(std::int64_t t, long k) { return t >= kExact ? kExact : std::min(t * k, kExact); }
    static std::int64_t sat_add(std::int64_t lo, std::int64_t t) { return t >= kExact ? kExact : std::min(lo + t, kExact); }

    static long common_order(const QSeries& a, const QSeries& b)
    {
        return CycInt::common_order(RingOps<R>::order(a.c_.front()), RingOps<R>::order(b.c_.front()));
    }
    void align_order(long d)
    {
        if (RingOps<R>::order(c_.front()) == d) return;
        for (auto& v : c_) v = RingOps<R>::align(v, d);
    }
    // All coefficients of a cyclotomic series share one order.
    void normalize_order()
    {
        long d = 1;
        for (const auto& v : c_) d = CycInt::common_order(d, RingOps<R>::order(v));
        for (auto& v : c_)
            if (RingOps<R>::order(v) != d) v = RingOps<R>::align(v, d);
    }

    static QSeries add(const QSeries& a0, const QSeries& b0, int sign)
    {
        long s = std::lcm(a0.s_, b0.s_);
        QSeries a = a0.reindexed(s), b = b0.reindexed(s);
        long d = common_order(a, b);
        a.align_order(d);
        b.align_order(d);
        std::int64_t lo = std::min(a.lo_, b.lo_);
        std::int64_t trunc = std::min(a.trunc_, b.trunc_);
        std::int64_t end = std::min(std::max(a.stored_end(), b.stored_end()), trunc);
        if (end <= lo) end = lo + 1;
        const R zero = RingOps<R>::zero_like(a.c_.front());
        std::vector<R> out(static_cast<std::size_t>(end - lo), zero);
        for (std::int64_t n = lo; n < end; ++n) {
            R& slot = out[static_cast<std::size_t>(n - lo)];
            if (n >= a.lo_ && n < a.stored_end()) slot = a.c_[static_cast<std::size_t>(n - a.lo_)];
            if (n >= b.lo_ && n < b.stored_end()) {
                const R& v = b.c_[static_cast<std::size_t>(n - b.lo_)];
                if (sign > 0)
                    slot = slot + v;
                else
                    slot = slot - v;
            }
        }
        return QSeries(s, lo, trunc, std::move(out));
    }

    long s_;
    std::int64_t lo_;
    std::int64_t trunc_;
    std::vector<R> c_;
};

template <>
inline void QSeries<Int>::normalize_order() {}

using IntSeries = QSeries<Int>;
using CycSeries = QSeries<CycInt>;

inline CycSeries to_cyclotomic(const IntSeries& f)
{
    std::vector<CycInt> c(f.coeffs().begin(), f.coeffs().end());
    return CycSeries(f.s(), f.lo(), f.trunc(), std::move(c));
}

// Applies cyc_to_int to every coefficient; throws NonRationalError on failure.
inline IntSeries to_integer(const CycSeries& f)
{
    std::vector<Int> c;
    c.reserve(f.coeffs().size());
    for (const auto& v : f.coeffs()) c.push_back(cyc_to_int(v));
    return IntSeries(f.s(), f.lo(), f.trunc(), std::move(c));
}

// Integer series with s = 1 from coefficients starting at exponent lo.
inline IntSeries make_series(std::int64_t lo, std::vector<Int> coeffs, std::int64_t trunc)
{
    return IntSeries(1, lo, trunc, std::move(coeffs));
}

}  // namespace si
