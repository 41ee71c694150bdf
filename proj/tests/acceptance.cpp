// One PASS/FAIL line per acceptance criterion. Exit status reflects the primary lines only;
// stretch-tier lines are printed with a STRETCH prefix and never affect it.

#include "si/si.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <tuple>

using namespace si;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

int primary_failures = 0;

void report(const char* tag, const std::string& name, const std::function<Outcome()>& body, bool primary = true)
{
    auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (primary && !o.ok) ++primary_failures;
    std::printf("%s%s %s %s (%.1fs)%s%s\n", primary ? "" : "STRETCH ", o.ok ? "PASS" : "FAIL", tag, name.c_str(), secs,
                o.detail.empty() ? "" : ": ", o.detail.c_str());
    std::fflush(stdout);
}

Real sqrt_r(const Real& v) { return boost::multiprecision::sqrt(v); }

Outcome count_matches(int total_expected, int matched, int seen, const std::string& what)
{
    std::ostringstream s;
    s << matched << "/" << seen << " " << what;
    return {matched == seen && seen == total_expected, s.str()};
}

Outcome check_appendix_a(const std::function<bool(const PQFixture&)>& keep, int expected)
{
    int seen = 0, matched = 0;
    std::string bad;
    for (const auto& f : appendix_a()) {
        if (!keep(f)) continue;
        ++seen;
        auto rec = default_registry().record(f.N, std::max(kDefaultOrder, required_order(f.m)));
        PQPair pq = pq_extract(*rec, f.m);
        if (pq.P == f.P && pq.Q == f.Q)
            ++matched;
        else
            bad += " (" + std::to_string(f.N) + "," + std::to_string(f.m) + ")";
    }
    Outcome o = count_matches(expected, matched, seen, "pairs exact");
    if (!bad.empty()) o.detail += "; mismatched" + bad;
    return o;
}

// Splitting-type check used to explain stretch mismatches in the class polynomial table.
bool splits_uniformly(const IntPoly& f, long dK, long limit)
{
    for (long p : primes_up_to(limit)) {
        if (p < 3 || mpz_kronecker_si(Int(dK).get_mpz_t(), p) != 1) continue;
        ZpPoly g = ZpPoly::from_int(f, p);
        if (ZpPoly::gcd(g, g.derivative()).degree() > 0) continue;
        auto fs = detail::factor_mod_p(g);
        for (const auto& h : fs)
            if (h.degree() != fs[0].degree()) return false;
    }
    return true;
}

const MinPolyFixture& d_fixture(int N, int dK)
{
    static const auto all = appendix_d();
    for (const auto& f : all)
        if (f.N == N && f.dK == dK) return f;
    throw std::runtime_error("no class polynomial fixture for " + std::to_string(N) + "," + std::to_string(dK));
}

Outcome minpoly_entry(int N, int dK, double limit_secs)
{
    auto t0 = Clock::now();
    MinPolyResult r = minpoly(default_registry(), {N, dK});
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const IntPoly& printed = d_fixture(N, dK).M;
    std::ostringstream s;
    s << "degree " << r.poly.degree() << ", " << r.digits << " digits";
    if (r.poly == printed) {
        if (secs > limit_secs) return {false, s.str() + ", exact but over the time limit"};
        return {true, s.str() + ", exact"};
    }
    IntPoly diff = r.poly - printed;
    int differing = 0;
    for (int i = 0; i <= diff.degree(); ++i) differing += diff.coeff(i) != 0;
    s << ", " << differing << " coefficients differ from the printed table";
    s << "; computed polynomial splits uniformly at split primes: " << (splits_uniformly(r.poly, dK, 400) ? "yes" : "no");
    s << ", printed one: " << (splits_uniformly(printed, dK, 400) ? "yes" : "no");
    return {false, s.str()};
}

}  // namespace

int main()
{
    report("1", "Appendix A P,Q for m in {2,3}", [] { return check_appendix_a([](const PQFixture& f) { return f.m <= 3; }, 47); });
    report(
        "1", "Appendix A P,Q for m in {5,7}", [] { return check_appendix_a([](const PQFixture& f) { return f.m == 5 || f.m == 7; }, 63); },
        false);
    report(
        "1", "Appendix A P,Q for (N,m) = (210,11)", [] { return check_appendix_a([](const PQFixture& f) { return f.m == 11; }, 1); }, false);

    report("2", "Appendix B generating polynomials for m in {2,3}", [] {
        std::map<std::pair<int, int>, PQFixture> a;
        for (const auto& f : appendix_a()) a.emplace(std::pair(f.N, f.m), f);
        int seen = 0, matched = 0;
        for (const auto& b : appendix_b()) {
            if (b.m > 3) continue;
            ++seen;
            auto rec = default_registry().record(b.N);
            PQPair pq = pq_extract(*rec, b.m);
            matched += generating_polynomial(pq.P, pq.Q, *rec) == b.R;
        }
        return count_matches(47, matched, seen, "polynomials exact");
    });

    report("3", "Appendix C values for m in {2,3} at 30 digits", [] {
        PrecisionPolicy pol;
        pol.digits = 30;
        PrecisionScope scope(pol.working_digits());
        int seen = 0, matched = 0;
        std::string bad;
        for (const auto& f : appendix_c()) {
            if (f.m > 3) continue;
            ++seen;
            CMPoint pt = sqrt_point(f.m, f.N);
            EvalResult x = eval_x(default_registry(), f.N, pt, pol), y = eval_y(default_registry(), f.N, pt, pol);
            auto close = [](const EvalResult& v, const std::string& printed) {
                Real tol = boost::multiprecision::pow(Real(10), -(printed_decimals(printed) - 2));
                return boost::multiprecision::abs(v.value.re - parse_real(printed)) < tol && boost::multiprecision::abs(v.value.im) < tol;
            };
            if (close(x, f.x) && close(y, f.y))
                ++matched;
            else
                bad += " (" + std::to_string(f.N) + "," + std::to_string(f.m) + ")";
        }
        Outcome o = count_matches(47, matched, seen, "points within printed digits - 2");
        if (!bad.empty()) o.detail += "; mismatched" + bad;
        return o;
    });

    report("4", "N=37 m=2 octic factorization and root selection", [] {
        auto rec = default_registry().record(37);
        PQPair pq = pq_extract(*rec, 2);
        FactoredPoly fp = factor_over_z(generating_polynomial(pq.P, pq.Q, *rec));
        IntPoly quintic{-21904, -16428, -4440, -481, -10, 1};
        bool shape = fp.content == 1 && fp.factors.size() == 3 && fp.factors[0] == std::pair(IntPoly{4, 1}, 1) &&
                     fp.factors[1] == std::pair(IntPoly{5, 1}, 2) && fp.factors[2] == std::pair(quintic, 1);
        PrecisionPolicy pol;
        PrecisionScope scope(pol.working_digits());
        EvalResult x = eval_x(*rec, sqrt_point(2, 37), pol);
        bool picked = select_factor_by_root(fp, x.value, Real("1e-20")) == quintic;
        return Outcome{shape && picked, std::string("factors ") + (shape ? "ok" : "wrong") + ", selection " + (picked ? "ok" : "wrong")};
    });

    report("5", "closed form of x_37 at i sqrt(3/37)", [] {
        PrecisionPolicy pol;
        PrecisionScope scope(pol.working_digits());
        EvalResult x = eval_x(default_registry(), 37, sqrt_point(3, 37), pol);
        Real s37 = sqrt_r(Real(37));
        Real closed = (37 + s37 * (9 + sqrt_r(158 + 26 * s37))) / 4;
        Real gap = (x.value - Complex(closed)).abs();
        IntPoly quartic{-4107, -2738, -592, -37, 1};
        Real res = eval_poly(quartic, closed) / coefficient_scale(quartic, Complex(closed));
        bool ok = gap < Real("1e-12") && boost::multiprecision::abs(res) < Real("1e-30");
        return Outcome{ok, "|x - closed form| = " + gap.str(3) + ", relative quartic residual " + Real(boost::multiprecision::abs(res)).str(3)};
    });

    report("6", "integral points at i sqrt(2/141) and i sqrt(2/155)", [] {
        PrecisionPolicy pol;
        PrecisionScope scope(pol.working_digits());
        bool ok = true;
        std::string detail;
        // At N=155 the printed closed form 4 + 2 sqrt 10 is off the curve y^2 + 3y = x^3 + 2x^2 - 2;
        // the curve and the tabulated decimal 12.32455532033676 both give 6 + 2 sqrt 10, which is checked here.
        for (auto [N, r] : {std::pair(141, 6), std::pair(155, 10)}) {
            Real s = sqrt_r(Real(r));
            Real wx = N == 141 ? 3 + s : 2 + s, wy = N == 141 ? 6 + 3 * s : 6 + 2 * s;
            EvalResult x = eval_x(default_registry(), N, sqrt_point(2, N), pol), y = eval_y(default_registry(), N, sqrt_point(2, N), pol);
            Real gap = std::max((x.value - Complex(wx)).abs(), (y.value - Complex(wy)).abs());
            Real res = cubic_residual(x, y, default_registry().curve_coeffs(N)).residual;
            ok = ok && gap < Real("1e-12") && res < Real("1e-20");
            detail += "N=" + std::to_string(N) + " gap " + gap.str(3) + " residual " + res.str(3) + " ";
        }
        Real x155 = 2 + sqrt_r(Real(10)), printed_y = 4 + 2 * sqrt_r(Real(10));
        Real off = cubic_residual(Complex(x155), Complex(printed_y), default_registry().curve_coeffs(155)).residual;
        detail += "(printed y = 4 + 2 sqrt 10 has curve residual " + off.str(4) + ", so y = 6 + 2 sqrt 10 is used)";
        return Outcome{ok, detail};
    });

    report("7", "minpoly(37,-3) exact", [] { return minpoly_entry(37, -3, 120); });
    report("7", "minpoly(43,-3) exact", [] { return minpoly_entry(43, -3, 120); });
    for (auto [N, dK] : std::vector<std::pair<int, int>>{{37, -11}, {53, -3}, {61, -3}, {79, -3}, {83, -3}, {89, -3}, {131, -3}, {53, -11}, {61, -11}})
        report(
            "7", "minpoly(" + std::to_string(N) + "," + std::to_string(dK) + ") exact", [N, dK] { return minpoly_entry(N, dK, 1e9); }, false);

    report("8", "class numbers and orbit partition for |D| <= 100", [] {
        bool named = class_number(Int(-296)) == 10 && class_number(Int(-444)) == 8 && class_number(Int(-1036)) == 12 && class_number(Int(-4107)) == 12;
        // union-find over S and T moves on forms inside a box
        int bad = 0, tried = 0;
        for (long D = -3; D >= -100; --D) {
            long r = ((D % 4) + 4) % 4;
            if (r != 0 && r != 1) continue;
            ++tried;
            const long B = 4 * -D + 4;
            std::map<std::tuple<long, long, long>, int> index;
            std::vector<std::tuple<long, long, long>> forms;
            for (long a = 1; a <= B; ++a)
                for (long b = -B; b <= B; ++b) {
                    long num = b * b - D;
                    if (num % (4 * a)) continue;
                    long c = num / (4 * a);
                    if (c > B || std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
                    index[{a, b, c}] = static_cast<int>(forms.size());
                    forms.emplace_back(a, b, c);
                }
            std::vector<int> parent(forms.size());
            std::iota(parent.begin(), parent.end(), 0);
            std::function<int(int)> find = [&](int i) { return parent[i] == i ? i : parent[i] = find(parent[i]); };
            for (int i = 0; i < static_cast<int>(forms.size()); ++i) {
                auto [a, b, c] = forms[i];
                for (const auto& g : {std::tuple(c, -b, a), std::tuple(a, b + 2 * a, a + b + c), std::tuple(a, b - 2 * a, a - b + c)}) {
                    auto it = index.find(g);
                    if (it != index.end()) parent[find(i)] = find(it->second);
                }
            }
            long classes = 0;
            for (int i = 0; i < static_cast<int>(forms.size()); ++i) classes += find(i) == i;
            bad += classes != class_number(Int(D));
        }
        return Outcome{named && bad == 0, std::string("named values ") + (named ? "ok" : "wrong") + ", " + std::to_string(tried - bad) + "/" +
                                                std::to_string(tried) + " discriminants agree"};
    });

    report("9", "bootstrap integrity on all 38 levels", [] {
        std::map<std::pair<int, int>, PQFixture> a;
        for (const auto& f : appendix_a()) a.emplace(std::pair(f.N, f.m), f);
        int valid = 0, consistent = 0, compared = 0;
        for (int N : genus_one_levels()) {
            CurveRecord fresh = bootstrap_record(N, cubic_from_fixtures(N), 203);
            valid += validate_cubic(fresh).ok;
            std::vector<Cubic> found;
            for (const auto& b : appendix_b()) {
                if (b.N != N || !a.count({N, b.m})) continue;
                try {
                    found.push_back(bootstrap_coeffs(a.at({N, b.m}).P, a.at({N, b.m}).Q, b.R));
                } catch (const BootstrapError&) {
                    // a single m may leave the system underdetermined
                }
            }
            if (found.size() < 2) continue;
            ++compared;
            bool same = true;
            for (const auto& k : found) same = same && k.A == found[0].A && k.B == found[0].B && k.C == found[0].C && k.D == found[0].D && k.E == found[0].E;
            consistent += same;
        }
        return Outcome{valid == 38 && consistent == compared && compared > 0, std::to_string(valid) + "/38 levels validate through q^200, " +
                                                                                 std::to_string(consistent) + "/" + std::to_string(compared) +
                                                                                 " levels give one cubic across m"};
    });

    report("10", "property suites", [] {
        std::mt19937_64 rng(2024);
        std::string detail;
        // reduce_to_xy round trip
        int rt_bad = 0;
        for (int N : {37, 91, 210}) {
            MonomialTable tab(*default_registry().record(N));
            for (int t = 0; t < 20; ++t) {
                int a = static_cast<int>(rng() % 7), b = static_cast<int>(rng() % 2);
                YLinearPoly g = b ? YLinearPoly{IntPoly{}, IntPoly::monomial(1, a)} : YLinearPoly{IntPoly::monomial(1, a), IntPoly{}};
                rt_bad += !(reduce_to_xy(expand_ylinear(g, tab), tab) == g);
            }
        }
        detail += "round trip failures " + std::to_string(rt_bad);
        // leading behaviour of Phi_m(x, x)
        int lead_bad = 0;
        for (int N : {37, 53, 79}) {
            MonomialTable tab(*default_registry().record(N));
            for (long m : {2L, 3L, 5L}) {
                ModularPolynomial phi = phi_polynomial(*default_registry().record(N), m);
                IntSeries sub = IntSeries::constant(0);
                for (long j = 0; j <= phi.degree(); ++j) sub = sub + phi.series[j] * tab.xpow(j);
                long s = sigma1_plus(m);
                lead_bad += sub.valuation() != -2 * s || abs(sub.coeff(-2 * s)) != 1;
            }
        }
        detail += ", leading term failures " + std::to_string(lead_bad);
        // construct then factor
        int fac_bad = 0;
        auto pick = [&](long lo, long hi) { return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1)); };
        for (int t = 0; t < 100; ++t) {
            std::map<std::vector<Int>, int> want;
            IntPoly f = IntPoly::constant(1);
            int parts = static_cast<int>(pick(1, 4));
            for (int i = 0; i < parts; ++i) {
                IntPoly g;
                if (pick(0, 1)) {
                    long a = pick(1, 5), b = pick(-9, 9);
                    if (std::gcd(a, std::abs(b)) != 1) b = 1;
                    g = IntPoly{b, a};
                } else {
                    g = cyclotomic_polynomial(std::vector<long>{3, 4, 5, 7, 8, 9, 12}[pick(0, 6)]);
                }
                int e = static_cast<int>(pick(1, 2));
                for (int k = 0; k < e; ++k) f = f * g;
                want[g.coeffs()] += e;
            }
            FactoredPoly fp = factor_over_z(f);
            std::map<std::vector<Int>, int> got;
            for (const auto& [g, e] : fp.factors) got[g.coeffs()] += e;
            fac_bad += got != want || !(fp.expand() == f);
        }
        detail += ", factorization failures " + std::to_string(fac_bad);
        // M(x_j) residuals
        int res_bad = 0;
        for (auto [N, dK] : {std::pair(37, -3), std::pair(43, -3)}) {
            MinPolyResult r = minpoly(default_registry(), {N, dK});
            PrecisionScope scope(r.digits + 15);
            Real tol = boost::multiprecision::pow(Real(10), -(r.digits - r.poly.degree() - 4));
            for (const auto& root : r.roots) res_bad += !(eval_poly(r.poly, root.x.value).abs() < tol * coefficient_scale(r.poly, root.x.value));
        }
        detail += ", class polynomial residual failures " + std::to_string(res_bad);
        return Outcome{rt_bad + lead_bad + fac_bad + res_bad == 0, detail};
    });

    std::printf("%s: %d primary criteria failed\n", primary_failures ? "FAIL" : "PASS", primary_failures);
    return primary_failures ? 1 : 0;
}
