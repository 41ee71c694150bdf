#include "si/bootstrap.hpp"
#include "si/curve.hpp"
#include "si/fixtures.hpp"
#include "si/genpoly.hpp"
#include "si/registry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include <unistd.h>

using namespace si;

namespace {

// Affine solutions of the cubic over F_p by trying every (x, y), plus the point at infinity.
long brute_points(const Cubic& k, long p)
{
    long count = 1;
    auto md = [p](const Int& v) { return mod_of(v, p); };
    long A = md(k.A), B = md(k.B), C = md(k.C), D = md(k.D), E = md(k.E);
    for (long x = 0; x < p; ++x)
        for (long y = 0; y < p; ++y) {
            long v = (y * y - x * x % p * x - A * x * y - B * x * x - C * y - D * x - E) % p;
            if (v == 0) ++count;
        }
    return count;
}

std::filesystem::path temp_dir()
{
    auto d = std::filesystem::temp_directory_path() / ("si_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(d);
    return d;
}

}  // namespace

TEST(CurveData, ThirtyEightLevels)
{
    EXPECT_EQ(genus_one_levels().size(), 38u);
    EXPECT_TRUE(is_genus_one_level(37));
    EXPECT_TRUE(is_genus_one_level(238));
    EXPECT_FALSE(is_genus_one_level(11));
    EXPECT_TRUE(is_prime(131));
    EXPECT_FALSE(is_prime(141));
}

TEST(CurveData, PointCountsAgreeWithBruteForce)
{
    for (int N : {37, 43, 141, 210}) {
        Cubic k = cubic_from_fixtures(N);
        for (long p : primes_up_to(60)) EXPECT_EQ(count_points(k, p), brute_points(k, p)) << "N=" << N << " p=" << p;
    }
}

TEST(CurveData, HasseBoundAtGoodPrimes)
{
    for (int N : genus_one_levels()) {
        Cubic k = default_registry().curve_coeffs(N);
        auto bad = bad_primes(k);
        for (long p : primes_up_to(500)) {
            if (std::find(bad.begin(), bad.end(), p) != bad.end()) continue;
            long ap = ap_count(k, p);
            EXPECT_LE(static_cast<double>(ap * ap), 4.0 * p) << "N=" << N << " p=" << p;
        }
    }
}

TEST(CurveData, BadPrimesDivideTheLevel)
{
    for (int N : genus_one_levels())
        for (long p : bad_primes(default_registry().curve_coeffs(N))) EXPECT_EQ(N % p, 0) << "N=" << N << " p=" << p;
}

TEST(CurveData, LevelThirtySevenExpansion)
{
    CurveRecord r = bootstrap_record(37, cubic_from_fixtures(37), 12);
    std::vector<long> want{1, 2, 0, 9, 18, 29, 51, 82, 131, 199, 306, 450, 666};
    for (long n = -2; n <= 10; ++n) EXPECT_EQ(r.x_coeff(n), want[n + 2]) << "n=" << n;
    EXPECT_EQ(r.y_coeff(-3), 1);
    EXPECT_EQ(r.y_coeff(0), 0);
    EXPECT_TRUE(validate_cubic(r).ok);
}

TEST(CurveData, EveryLevelSatisfiesItsCubic)
{
    for (int N : genus_one_levels()) {
        auto rec = default_registry().record(N, 210);
        EXPECT_EQ(rec->x_coeff(-2), 1);
        EXPECT_EQ(rec->x_coeff(0), 0);
        EXPECT_EQ(rec->y_coeff(-3), 1);
        EXPECT_EQ(rec->y_coeff(0), 0);
        CubicCheck chk = validate_cubic(*rec);
        EXPECT_TRUE(chk.ok) << "N=" << N << " first bad exponent " << chk.first_bad.value_or(0);
        EXPECT_GE(rec->order, 203);
    }
}

TEST(CurveData, RegeneratedRecordsMatchVendored)
{
    LevelRegistry reg;
    for (int N : {37, 141, 238}) {
        auto e = reg.get(N, 100);
        EXPECT_EQ(e.provenance, Provenance::vendored);
        CurveRecord fresh = bootstrap_record(N, cubic_from_fixtures(N), 100);
        for (long n = -2; n <= 100; ++n) EXPECT_EQ(fresh.x_coeff(n), e.record->x_coeff(n));
        for (long n = -3; n <= 100; ++n) EXPECT_EQ(fresh.y_coeff(n), e.record->y_coeff(n));
    }
}

TEST(CurveData, CubicIsStableAcrossAppendixPairs)
{
    std::map<std::pair<int, int>, PQFixture> a;
    for (const auto& f : appendix_a()) a.emplace(std::pair(f.N, f.m), f);
    int checked = 0;
    for (const auto& b : appendix_b()) {
        auto it = a.find({b.N, b.m});
        if (it == a.end()) continue;
        Cubic k = cubic_from_fixtures(b.N);
        EXPECT_EQ(generating_polynomial(it->second.P, it->second.Q, k), b.R) << "N=" << b.N << " m=" << b.m;
        ++checked;
    }
    EXPECT_GT(checked, 47);
    // m = 2 and m = 3 solved separately give the same cubic where each pins it down
    int agreed = 0;
    for (int N : genus_one_levels()) {
        std::vector<Cubic> found;
        for (int m : {2, 3}) {
            auto ia = a.find({N, m});
            if (ia == a.end()) continue;
            for (const auto& b : appendix_b()) {
                if (b.N != N || b.m != m) continue;
                try {
                    found.push_back(bootstrap_coeffs(ia->second.P, ia->second.Q, b.R));
                } catch (const BootstrapError& e) {
                    // one m alone may leave the system short of rank, but never inconsistent
                    EXPECT_NE(std::string(e.what()).find("underdetermined"), std::string::npos) << e.what();
                }
            }
        }
        if (found.size() == 2) {
            EXPECT_EQ(found[0].A, found[1].A);
            EXPECT_EQ(found[0].B, found[1].B);
            EXPECT_EQ(found[0].C, found[1].C);
            EXPECT_EQ(found[0].D, found[1].D);
            EXPECT_EQ(found[0].E, found[1].E);
            ++agreed;
        }
    }
    EXPECT_EQ(agreed, 8);  // levels where m = 2 and m = 3 each determine the cubic alone
}

TEST(CurveData, BootstrapRejectsInconsistentData)
{
    auto a = appendix_a().front();
    auto b = appendix_b().front();
    ASSERT_EQ(a.N, b.N);
    ASSERT_EQ(a.m, b.m);
    EXPECT_THROW(bootstrap_coeffs(a.P, a.Q, b.R + IntPoly{1}), BootstrapError);
}

TEST(CurveData, RecordRoundTripAndTamperDetection)
{
    CurveRecord r = bootstrap_record(43, cubic_from_fixtures(43), 40);
    std::string text = format_record(r);
    CurveRecord back = parse_record(text);
    EXPECT_EQ(back.N, 43);
    EXPECT_EQ(back.order, 40);
    EXPECT_EQ(back.x, r.x);
    EXPECT_EQ(back.y, r.y);
    EXPECT_EQ(back.cubic.E, r.cubic.E);

    std::string bad = text;
    auto pos = bad.rfind("\nSHA256=");
    ASSERT_NE(pos, std::string::npos);
    bad[pos - 1] = bad[pos - 1] == '7' ? '8' : '7';
    EXPECT_THROW(parse_record(bad), RecordError);

    auto dir = temp_dir();
    save_record((dir / "N43.rec").string(), r);
    EXPECT_EQ(load_record((dir / "N43.rec").string()).x, r.x);
    std::filesystem::remove_all(dir);
}

TEST(CurveData, SHA256KnownAnswer)
{
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(CurveData, RegistryExtendsShortRecords)
{
    auto dir = temp_dir();
    save_record(record_path(53, dir).string(), bootstrap_record(53, cubic_from_fixtures(53), 50));
    LevelRegistry reg(dir);
    auto e = reg.get(53, 50);
    EXPECT_EQ(e.provenance, Provenance::vendored);
    EXPECT_EQ(e.record->order, 50);
    auto f = reg.get(53, 300);
    EXPECT_EQ(f.provenance, Provenance::bootstrapped);
    EXPECT_GE(f.record->order, 300);
    EXPECT_THROW(reg.get(11, 10), UnknownLevel);
    std::filesystem::remove_all(dir);
}
