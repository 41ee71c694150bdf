#include "si/cmeval.hpp"
#include "si/quadforms.hpp"
#include "si/registry.hpp"

#include <gtest/gtest.h>

#include <map>
#include <numeric>
#include <random>

using namespace si;

namespace {

// Classes of primitive positive forms of discriminant D by union-find over S and T moves inside a box.
long orbit_class_number(long D)
{
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
    auto join = [&](int i, const std::tuple<long, long, long>& g) {
        auto it = index.find(g);
        if (it != index.end()) parent[find(i)] = find(it->second);
    };
    for (int i = 0; i < static_cast<int>(forms.size()); ++i) {
        auto [a, b, c] = forms[i];
        join(i, {c, -b, a});                          // S
        join(i, {a, b + 2 * a, a + b + c});           // T
        join(i, {a, b - 2 * a, a - b + c});           // T^-1
    }
    long classes = 0;
    for (int i = 0; i < static_cast<int>(forms.size()); ++i)
        if (find(i) == i) ++classes;
    return classes;
}

}  // namespace

TEST(QuadForms, KnownClassNumbers)
{
    EXPECT_EQ(class_number(Int(-296)), 10);
    EXPECT_EQ(class_number(Int(-444)), 8);
    EXPECT_EQ(class_number(Int(-1036)), 12);
    EXPECT_EQ(class_number(Int(-4107)), 12);
    EXPECT_EQ(class_number(Int(-3)), 1);
    EXPECT_EQ(class_number(Int(-23)), 3);
}

TEST(QuadForms, ClassNumberMatchesOrbitPartition)
{
    for (long D = -3; D >= -100; --D) {
        long r = ((D % 4) + 4) % 4;
        if (r != 0 && r != 1) continue;
        EXPECT_EQ(class_number(Int(D)), orbit_class_number(D)) << "D=" << D;
    }
}

TEST(QuadForms, ReductionUndoesRandomUnimodularMoves)
{
    std::mt19937_64 rng(5);
    for (long D : {-3L, -23L, -296L, -4107L, -12675L}) {
        for (const auto& f : reduced_forms(Int(D))) {
            EXPECT_TRUE(f.is_reduced());
            for (int t = 0; t < 5; ++t) {
                // random word in S and T
                QuadForm g = f;
                for (int s = 0; s < 8; ++s) {
                    long k = static_cast<long>(rng() % 7) - 3;
                    g = transform(g, 1, k, 0, 1);
                    g = transform(g, 0, -1, 1, 0);
                }
                EXPECT_EQ(g.disc(), f.disc());
                QuadForm h = reduce(g);
                EXPECT_EQ(h, f);
                EXPECT_TRUE(h.is_primitive());
            }
        }
    }
}

TEST(QuadForms, InvalidDiscriminants)
{
    EXPECT_THROW(reduced_forms(Int(-5)), std::invalid_argument);
    EXPECT_THROW(reduced_forms(Int(8)), std::invalid_argument);
    EXPECT_THROW(reduce({-1, 0, -1}), std::invalid_argument);
}

TEST(QuadForms, ModularHelpers)
{
    EXPECT_EQ(crt({{Int(2), Int(3)}, {Int(3), Int(5)}, {Int(2), Int(7)}}), 23);
    EXPECT_EQ(inverse_mod(Int(3), Int(7)), 5);
    EXPECT_THROW(inverse_mod(Int(2), Int(4)), std::invalid_argument);
    EXPECT_EQ(mod_floor(Int(-1), Int(5)), 4);
    EXPECT_EQ(tau0_for(Int(-3)), (CMPoint{1, 1, -3}));
    EXPECT_EQ(tau0_for(Int(-4)), (CMPoint{1, 0, -4}));
    EXPECT_EQ(fixed_point(fricke(37)), sqrt_point(1, 37));
}

TEST(QuadForms, CoprimeRepresentative)
{
    for (const auto& f : reduced_forms(Int(-4107))) {
        CoprimeRep cr = coprime_rep(f, Int(74));
        Int g;
        mpz_gcd(g.get_mpz_t(), cr.form.a.get_mpz_t(), Int(74).get_mpz_t());
        EXPECT_EQ(g, 1);
        EXPECT_EQ(cr.transform.det(), 1);
        EXPECT_EQ(reduce(cr.form), f);
    }
}

TEST(QuadForms, PhiMapLandsOnDiscriminantDK)
{
    for (auto [N, dK] : {std::pair(37L, -3L), std::pair(37L, -11L), std::pair(43L, -3L), std::pair(131L, -3L), std::pair(61L, -11L),
                         std::pair(53L, -4L), std::pair(101L, -7L)}) {
        Int D = Int(N) * N * dK;
        auto forms = reduced_forms(D);
        for (const auto& f : forms) {
            QuadForm g = phi_map(f, N, Int(dK));
            EXPECT_EQ(g.disc(), dK);
            EXPECT_GT(g.a, 0);
        }
    }
    EXPECT_THROW(phi_map({1, 1, 1}, 37, Int(-3)), std::invalid_argument);
}

TEST(QuadForms, LevelReductionKeepsTheValue)
{
    std::mt19937_64 rng(11);
    auto rec = default_registry().record(37);
    PrecisionPolicy pol;
    pol.digits = 20;
    PrecisionScope scope(pol.working_digits());
    int tried = 0;
    while (tried < 8) {
        // points low in the upper half plane, imaginary part between 0.1 and 0.22
        long a = 20 + static_cast<long>(rng() % 70);
        long b = static_cast<long>(rng() % (2 * a)) - a + 1;
        long c = b * b / (4 * a) + 1;
        CMPoint pt{a, b, Int(b * b - 4 * a * c)};
        if (pt.imag_approx() < 0.1) continue;
        CMPoint red = reduce_for_level(pt, 37);
        EXPECT_GE(red.imag_approx(), pt.imag_approx() - 1e-12);
        EXPECT_EQ(reduce_for_level(red, 37), red);
        EvalResult direct = eval_series(rec->x, -2, pt, pol);
        EvalResult moved = eval_series(rec->x, -2, red, pol);
        EXPECT_LT((direct.value - moved.value).abs(), Real("1e-15") * std::max(Real(1), direct.value.abs()));
        ++tried;
    }
}
