#pragma once

#include "si/curve.hpp"
#include "si/int_poly.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace si {

class BootstrapError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One (m, N) appendix pair: P, Q and the generating polynomial R.
struct PQRTriple {
    IntPoly P, Q, R;
};

// Solves R = P^2 - Q^2 x^3 + A PQx - B Q^2x^2 + C PQ - D Q^2x - E Q^2 for (A..E), jointly over all triples.
inline Cubic bootstrap_coeffs(const std::vector<PQRTriple>& triples)
{
    if (triples.empty()) throw BootstrapError("no data to bootstrap from");
    std::vector<std::vector<Rat>> rows;
    const IntPoly x = IntPoly::x();
    for (const auto& t : triples) {
        if (t.Q.is_zero()) throw BootstrapError("Q must be nonzero");
        IntPoly pq = t.P * t.Q, qq = t.Q * t.Q;
        std::array<IntPoly, 5> cols = {pq * x, -(qq * x * x), pq, -(qq * x), -qq};
        IntPoly rhs = t.R - t.P * t.P + qq * x * x * x;
        int deg = rhs.degree();
        for (const auto& c : cols) deg = std::max(deg, c.degree());
        for (int i = 0; i <= deg; ++i) {
            std::vector<Rat> row(6);
            for (int j = 0; j < 5; ++j) row[j] = cols[j].coeff(i);
            row[5] = rhs.coeff(i);
            rows.push_back(std::move(row));
        }
    }
    // Gauss-Jordan elimination over Q.
    std::size_t r = 0;
    std::array<int, 5> pivot_row{-1, -1, -1, -1, -1};
    for (int col = 0; col < 5 && r < rows.size(); ++col) {
        std::size_t piv = r;
        while (piv < rows.size() && rows[piv][col] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[r], rows[piv]);
        Rat inv = 1 / rows[r][col];
        for (auto& v : rows[r]) v *= inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][col] == 0) continue;
            Rat f = rows[i][col];
            for (int j = 0; j < 6; ++j) rows[i][j] -= f * rows[r][j];
        }
        pivot_row[col] = static_cast<int>(r);
        ++r;
    }
    for (std::size_t i = r; i < rows.size(); ++i)
        if (rows[i][5] != 0) throw BootstrapError("inconsistent system: appendix data do not fit one cubic");
    for (int col = 0; col < 5; ++col)
        if (pivot_row[col] < 0) throw BootstrapError("underdetermined system: more (m, N) pairs are needed");
    std::array<Int, 5> out;
    for (int col = 0; col < 5; ++col) {
        Rat v = rows[pivot_row[col]][5];
        v.canonicalize();
        if (v.get_den() != 1) throw BootstrapError("non-integral cubic coefficient " + v.get_str());
        out[col] = v.get_num();
    }
    return {out[0], out[1], out[2], out[3], out[4]};
}

inline Cubic bootstrap_coeffs(const IntPoly& P, const IntPoly& Q, const IntPoly& R) { return bootstrap_coeffs({PQRTriple{P, Q, R}}); }

// Long Weierstrass invariants with a1 = -A, a2 = B, a3 = -C, a4 = D, a6 = E.
struct Invariants {
    Int b2, b4, b6, b8, disc;
};

inline Invariants invariants(const Cubic& k)
{
    Int a1 = -k.A, a2 = k.B, a3 = -k.C, a4 = k.D, a6 = k.E;
    Invariants v;
    v.b2 = a1 * a1 + 4 * a2;
    v.b4 = 2 * a4 + a1 * a3;
    v.b6 = a3 * a3 + 4 * a6;
    v.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    v.disc = -v.b2 * v.b2 * v.b8 - 8 * v.b4 * v.b4 * v.b4 - 27 * v.b6 * v.b6 + 9 * v.b2 * v.b4 * v.b6;
    return v;
}

inline long mod_of(const Int& v, long p)
{
    Int r = v % p;
    long x = r.get_si();
    return x < 0 ? x + p : x;
}

// Number of projective points over F_p on the reduced cubic, singular point included.
inline long count_points(const Cubic& k, long p)
{
    long A = mod_of(k.A, p), B = mod_of(k.B, p), C = mod_of(k.C, p), D = mod_of(k.D, p), E = mod_of(k.E, p);
    long count = 1;  // the point at infinity
    if (p == 2) {
        for (long x = 0; x < 2; ++x)
            for (long y = 0; y < 2; ++y)
                if ((y * y - x * x * x - A * x * y - B * x * x - C * y - D * x - E) % 2 == 0) ++count;
        return count;
    }
    std::vector<int> roots(p, 0);
    for (long z = 0; z < p; ++z) ++roots[z * z % p];
    for (long x = 0; x < p; ++x) {
        // (2y - Ax - C)^2 = (Ax + C)^2 + 4(x^3 + Bx^2 + Dx + E)
        long s = (A * x + C) % p;
        long rhs = (((x * x % p) * x % p) + B * (x * x % p) + D * x + E) % p;
        long disc = (s * s + 4 * rhs) % p;
        count += roots[disc];
    }
    return count;
}

inline long ap_count(const Cubic& k, long p) { return p + 1 - count_points(k, p); }
inline long ap_count(const CurveRecord& c, long p) { return ap_count(c.cubic, p); }

inline std::vector<long> primes_up_to(long n)
{
    std::vector<char> comp(static_cast<std::size_t>(std::max<long>(n + 1, 2)), 0);
    std::vector<long> out;
    for (long i = 2; i <= n; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (long j = i * i; j <= n; j += i) comp[j] = 1;
    }
    return out;
}

inline std::vector<long> prime_factors(long n)
{
    std::vector<long> out;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        out.push_back(p);
        while (n % p == 0) n /= p;
    }
    if (n > 1) out.push_back(n);
    return out;
}

// Primes of bad reduction of the model: those dividing the discriminant.
inline std::vector<long> bad_primes(const Cubic& k)
{
    Int d = abs(invariants(k).disc);
    if (d == 0) throw BootstrapError("singular cubic");
    std::vector<long> out;
    for (long p = 2; d != 1; ++p) {
        if (!mpz_divisible_ui_p(d.get_mpz_t(), static_cast<unsigned long>(p))) continue;
        out.push_back(p);
        while (mpz_divisible_ui_p(d.get_mpz_t(), static_cast<unsigned long>(p))) mpz_divexact_ui(d.get_mpz_t(), d.get_mpz_t(), p);
        if (p > 1000000) throw BootstrapError("discriminant has a large prime factor");
    }
    return out;
}

// Coefficients a_1..a_{n_max} (index 0 unused) of the weight-two form attached to the curve at level N.
// Primes of N where the model has good reduction contribute the oldform lift sum_{d | N/M} d f(dz).
inline std::vector<Int> an_coefficients(const Cubic& k, int N, long n_max)
{
    std::vector<long> bad = bad_primes(k);
    long conductor = 1;
    for (long p : bad) {
        if (N % p) throw BootstrapError("model has bad reduction at " + std::to_string(p) + " which does not divide the level");
        conductor *= p;
    }
    std::set<long> bad_set(bad.begin(), bad.end());

    // Newform coefficients b_n.
    std::vector<Int> b(static_cast<std::size_t>(n_max + 1), 0);
    if (n_max >= 1) b[1] = 1;
    std::vector<long> spf(static_cast<std::size_t>(n_max + 1), 0);
    for (long i = 2; i <= n_max; ++i)
        if (!spf[i])
            for (long j = i; j <= n_max; j += i)
                if (!spf[j]) spf[j] = i;
    for (long n = 2; n <= n_max; ++n) {
        long p = spf[n], pk = 1, rest = n;
        int e = 0;
        while (rest % p == 0) rest /= p, pk *= p, ++e;
        if (rest != 1) {
            b[n] = b[pk] * b[rest];
            continue;
        }
        long ap = ap_count(k, p);
        if (e == 1)
            b[n] = ap;
        else if (bad_set.count(p))
            b[n] = b[n / p] * ap;
        else
            b[n] = ap * b[n / p] - Int(p) * b[n / p / p];
    }

    long index = N / conductor;
    std::vector<long> divs;
    for (long d = 1; d <= index; ++d)
        if (index % d == 0) divs.push_back(d);
    std::vector<Int> a(static_cast<std::size_t>(n_max + 1), 0);
    for (long n = 1; n <= n_max; ++n)
        for (long d : divs)
            if (n % d == 0) a[n] += Int(d) * b[n / d];
    return a;
}

inline std::vector<Int> an_coefficients(const CurveRecord& c, long n_max) { return an_coefficients(c.cubic, c.N, n_max); }

// x and y expansions through q^order from the cusp form sum a_n q^n.  x solves
// (theta x / f)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6 and y = (Ax + C - theta x / f) / 2.
inline std::pair<std::vector<Int>, std::vector<Int>> fourier_from_parametrization(const Cubic& k, int N, long order)
{
    if (order < 1) throw BootstrapError("order must be at least 1");
    const long K = order;
    std::vector<Int> a = an_coefficients(k, N, K + 4);
    Invariants inv = invariants(k);

    // h = q / f
    std::vector<Int> h(static_cast<std::size_t>(K + 4), 0);
    h[0] = 1;
    for (long n = 1; n < K + 4; ++n) {
        Int s = 0;
        for (long i = 1; i <= n; ++i) mpz_addmul(s.get_mpz_t(), a[i + 1].get_mpz_t(), h[n - i].get_mpz_t());
        h[n] = -s;
    }

    // One step past K so that u_K is final.
    std::vector<Int> x(static_cast<std::size_t>(K + 4), 0);   // x[i + 2]
    std::vector<Int> u(static_cast<std::size_t>(K + 5), 0);   // u[j + 3]
    std::vector<Int> x2(static_cast<std::size_t>(K + 6), 0);  // x2[m + 4]
    auto X = [&](long i) -> Int& { return x[static_cast<std::size_t>(i + 2)]; };
    auto U = [&](long j) -> Int& { return u[static_cast<std::size_t>(j + 3)]; };
    auto X2 = [&](long m) -> Int& { return x2[static_cast<std::size_t>(m + 4)]; };
    X(-2) = 1;
    U(-3) = -2;
    X2(-4) = 1;
    X2(-3) = 0;  // finalized once x_{-1} is known

    Int acc, tmp;
    for (long n = -1; n <= K + 1; ++n) {
        const long e = n - 4;
        Int u_part = 0;
        for (long i = -2; i <= n - 1; ++i) {
            if (X(i) == 0) continue;
            tmp = X(i) * i;
            mpz_addmul(u_part.get_mpz_t(), tmp.get_mpz_t(), h[static_cast<std::size_t>(n - i)].get_mpz_t());
        }
        Int x2_part = 0;
        for (long i = -1; i <= n - 1; ++i) {
            long j = n - 2 - i;
            if (j < -2 || j > n - 1) continue;
            mpz_addmul(x2_part.get_mpz_t(), X(i).get_mpz_t(), X(j).get_mpz_t());
        }
        auto u_at = [&](long j) -> const Int& { return j == n - 1 ? u_part : U(j); };
        auto x2_at = [&](long m) -> const Int& { return m == n - 2 ? x2_part : X2(m); };

        Int usq = 0;
        for (long j = -3; j <= n - 1; ++j) {
            long l = e - j;
            if (l < -3 || l > n - 1) continue;
            mpz_addmul(usq.get_mpz_t(), u_at(j).get_mpz_t(), u_at(l).get_mpz_t());
        }
        Int xcube = 0;
        for (long i = -2; i <= n - 1; ++i) {
            long m = e - i;
            if (m < -4 || m > n - 2) continue;
            mpz_addmul(xcube.get_mpz_t(), X(i).get_mpz_t(), x2_at(m).get_mpz_t());
        }
        acc = usq - 4 * xcube;
        if (e >= -4) acc -= inv.b2 * X2(e);
        if (e >= -2) acc -= 2 * inv.b4 * X(e);
        if (e == 0) acc -= inv.b6;
        Int denom = 4 * (n + 3);
        if (!mpz_divisible_p(acc.get_mpz_t(), denom.get_mpz_t()))
            throw BootstrapError("non-integral x coefficient at q^" + std::to_string(n) + " for level " + std::to_string(N));
        mpz_divexact(X(n).get_mpz_t(), acc.get_mpz_t(), denom.get_mpz_t());
        if (n == 0 && X(0) != 0) throw BootstrapError("nonzero constant term in x for level " + std::to_string(N));
        U(n - 1) = u_part + n * X(n);
        X2(n - 2) = x2_part + 2 * X(n);
    }
    std::vector<Int> y(static_cast<std::size_t>(K + 4), 0);
    for (long j = -3; j <= K; ++j) {
        Int v = -U(j);
        if (j >= -2) v += k.A * X(j);
        if (j == 0) v += k.C;
        if (!mpz_divisible_ui_p(v.get_mpz_t(), 2)) throw BootstrapError("non-integral y coefficient at q^" + std::to_string(j));
        mpz_divexact_ui(y[static_cast<std::size_t>(j + 3)].get_mpz_t(), v.get_mpz_t(), 2);
    }
    if (y[0] != 1) throw BootstrapError("y lead coefficient is not 1");
    if (y[3] != 0) throw BootstrapError("nonzero constant term in y for level " + std::to_string(N));
    x.resize(static_cast<std::size_t>(K + 3));
    return {std::move(x), std::move(y)};
}

inline CurveRecord bootstrap_record(int N, const Cubic& k, long order)
{
    CurveRecord c;
    c.N = N;
    c.cubic = k;
    c.order = order;
    std::tie(c.x, c.y) = fourier_from_parametrization(k, N, order);
    return c;
}

}  // namespace si
