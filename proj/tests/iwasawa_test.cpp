#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"

using namespace iwb;

namespace {

constexpr long kP = 3, kD = 30, kN = 40;

using oracle::merge_slopes;
using oracle::random_poly;
using oracle::random_series_poly;

IwasawaElement1 series(const IntPoly& f, long D = kD, long N = kN) { return IwasawaElement1::from_poly(kP, f, D, N); }

}  // namespace

TEST(Iwasawa, ProfileAdditivityUnderProducts) {
    std::mt19937_64 rng(101);
    int checked = 0;
    for (int i = 0; i < 500; ++i) {
        IntPoly a = random_series_poly(rng, kP, 7), b = random_series_poly(rng, kP, 7);
        auto pa = newton_invariants(series(a)), pb = newton_invariants(series(b));
        auto pab = newton_invariants(series(a) * series(b));
        ASSERT_TRUE(pa.stabilized && pb.stabilized && pab.stabilized);
        EXPECT_EQ(pab.mu, pa.mu + pb.mu);
        EXPECT_EQ(pab.lambda, pa.lambda + pb.lambda);
        EXPECT_EQ(pab.slopes, merge_slopes(pa.slopes, pb.slopes));
        ++checked;
    }
    EXPECT_EQ(checked, 500);
}

TEST(Iwasawa, UnitInvariance) {
    std::mt19937_64 rng(202);
    for (int i = 0; i < 500; ++i) {
        IntPoly f = random_series_poly(rng, kP, 7);
        IntPoly u = random_poly(rng, 6, 20);
        u[0] = 1 + 3 * static_cast<long>(rng() % 10);
        if (rng() % 2) u[0] = -u[0] + 1;
        if (u[0] % kP == 0) u[0] += 1;
        auto pf = newton_invariants(series(f));
        auto pu = newton_invariants(series(poly_mul(f, u)));
        EXPECT_TRUE(pf.same_invariants(pu)) << pf.to_string() << " vs " << pu.to_string();
        // scaling by a p-adic unit constant
        auto ps = newton_invariants(series(f).scaled(Rational(7, 5)));
        EXPECT_TRUE(pf.same_invariants(ps));
    }
}

TEST(Iwasawa, SlopesAreRootValuations) {
    // prod (X - p^{a_i} u_i): the slope multiset is {a_i}.
    std::mt19937_64 rng(303);
    for (int i = 0; i < 200; ++i) {
        long k = 1 + static_cast<long>(rng() % 6);
        IntPoly f{Integer(1)};
        std::map<long, long, std::greater<long>> want;
        for (long j = 0; j < k; ++j) {
            long a = 1 + static_cast<long>(rng() % 4);
            long u = 1 + static_cast<long>(rng() % 20);
            if (u % kP == 0) ++u;
            f = poly_mul(f, IntPoly{-ipow_big(kP, a) * u, Integer(1)});
            ++want[a];
        }
        auto prof = newton_invariants(series(f));
        EXPECT_EQ(prof.mu, 0);
        EXPECT_EQ(prof.lambda, k);
        std::vector<Slope> expect;
        for (auto [a, c] : want) expect.push_back({c, Rational(a)});
        EXPECT_EQ(prof.slopes, expect);
    }
}

TEST(Iwasawa, EisensteinSlopes) {
    auto f = newton_invariants(series({Integer(-3), Integer(0), Integer(1)}));
    EXPECT_EQ(f.slopes_string(), "{(2:1/2)}");
    auto g = newton_invariants(series(cyclotomic_poly(3, 2)));
    EXPECT_EQ(g.lambda, 6);
    EXPECT_EQ(g.slopes_string(), "{(6:1/6)}");
}

TEST(Iwasawa, MuOfScaledUnit) {
    auto f = newton_invariants(series({Integer(9), Integer(27)}));
    EXPECT_EQ(f.mu, 2);
    EXPECT_EQ(f.lambda, 0);
    EXPECT_TRUE(f.slopes.empty());
}

TEST(Iwasawa, UnknownCoefficientsBlockStabilization) {
    IwasawaElement1 f = series({Integer(9), Integer(1)}, 10, 5);
    f.set(0, PadicScalar::zero_mod(3, 1));
    EXPECT_FALSE(newton_invariants(f).stabilized);
    // X (X + 3): the constant term is only known to vanish mod p^N
    auto g = newton_invariants(series({Integer(0), Integer(3), Integer(1)}));
    EXPECT_EQ(g.lambda, 2);
    EXPECT_FALSE(g.stabilized);
    IwasawaElement1 h = series({Integer(0), Integer(3), Integer(1)});
    h.set(0, PadicScalar::exact_zero(3));
    EXPECT_TRUE(newton_invariants(h).stabilized);
    IwasawaElement1 z(3, 5, 5);
    for (long i = 0; i <= 5; ++i) z.set(i, PadicScalar::zero_mod(3, 5));
    try {
        newton_invariants(z);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::PrecisionInsufficient);
    }
}

TEST(Iwasawa, InverseOfUnit) {
    std::mt19937_64 rng(404);
    for (int i = 0; i < 100; ++i) {
        IntPoly u = random_poly(rng, 5, 10);
        if (u[0] % kP == 0) u[0] += 1;
        auto s = series(u, 20, 30);
        auto prod = s * s.inverse();
        EXPECT_TRUE(prod.agrees_with(series({Integer(1)}, 20, 30)));
    }
}

TEST(Iwasawa, WeierstrassFactorsReassemble) {
    std::mt19937_64 rng(505);
    for (int i = 0; i < 100; ++i) {
        IntPoly f = random_series_poly(rng, kP, 6);
        auto s = series(f, 40, 30);
        auto w = weierstrass_prepare(s);
        auto prof = newton_invariants(s);
        EXPECT_EQ(w.mu, prof.mu);
        EXPECT_EQ(w.distinguished.trunc_degree(), prof.lambda);
        for (long j = 0; j < prof.lambda; ++j) {
            const auto& c = w.distinguished[j];
            EXPECT_TRUE(c.is_zero() || c.valuation() >= 1) << "coefficient " << j << " is not in pZ_p";
        }
        IwasawaElement1 dist(kP, 40, 30);
        for (long j = 0; j <= 40; ++j)
            dist.set(j, j <= prof.lambda ? w.distinguished[j] : PadicScalar::exact_zero(kP));
        IwasawaElement1 unit = w.unit;
        auto back = (dist * unit.truncated(40)).scaled(Rational(ipow_big(kP, w.mu)));
        // Compare where both sides are known.
        long D = std::min(back.trunc_degree(), s.trunc_degree());
        for (long j = 0; j <= D; ++j) EXPECT_TRUE(back[j].agrees_with(s[j])) << i << " coefficient " << j;
    }
}

TEST(Iwasawa, HalfLogProductsVanishOnMatchingParity) {
    long n = 4;
    for (int parity : {0, 1}) {
        auto f = half_log_product(kP, parity, n, 100, 20);
        for (int k = 1; k <= n; ++k) {
            auto r = reduce_mod_cyclotomic(f, k);
            if (k % 2 == parity) EXPECT_TRUE(r.is_zero()) << k;
            else EXPECT_FALSE(r.is_zero()) << k;
        }
        long want = 0;
        for (long k = 1; k <= n; ++k)
            if (k % 2 == parity) want += euler_phi(ipow(kP, static_cast<int>(k)));
        EXPECT_EQ(degree(half_log_product_poly(kP, parity, n)), want);
    }
}

TEST(Iwasawa, PollackLogConstantTerm) {
    for (int sign : {1, -1}) {
        auto f = pollack_log_truncated(kP, sign, 4, 100, 20);
        EXPECT_EQ(f[0].to_rational(), Rational(1, 3));
    }
}

TEST(Iwasawa, ReductionMatchesCyclotomicEvaluation) {
    std::mt19937_64 rng(606);
    for (int i = 0; i < 60; ++i) {
        int k = 1 + static_cast<int>(rng() % 3);
        long L = ipow(kP, k);
        IntPoly f = random_poly(rng, 3 + static_cast<long>(rng() % 20), 15);
        // f(zeta - 1) in Q(zeta_L)
        CyclotomicInt x = CyclotomicInt::zeta_power(L, 1) - CyclotomicInt::from_integer(L, 1);
        CyclotomicInt acc = CyclotomicInt::from_integer(L, 0), pw = CyclotomicInt::from_integer(L, 1);
        for (const auto& c : f) {
            acc = acc + pw * Rational(c);
            pw = pw * x;
        }
        auto want = embed_padic(acc, kP, k, 25);
        auto got = reduce_mod_cyclotomic(series(f, 40, 25), k);
        EXPECT_TRUE(got.agrees_with(want));
    }
}

TEST(Iwasawa, PiCycIsRingHomomorphism) {
    std::mt19937_64 rng(707);
    long D = 6, N = 20;
    auto random2 = [&]() {
        std::vector<std::tuple<long, long, Integer>> t;
        long terms = 1 + static_cast<long>(rng() % 6);
        for (long k = 0; k < terms; ++k)
            t.emplace_back(static_cast<long>(rng() % 4), static_cast<long>(rng() % 4),
                           Integer(static_cast<long>(rng() % 41) - 20));
        return IwasawaElement2::from_terms(kP, t, D, N);
    };
    for (int i = 0; i < 500; ++i) {
        auto f = random2(), g = random2();
        EXPECT_TRUE(pi_cyc(f * g).agrees_with(pi_cyc(f) * pi_cyc(g)));
        EXPECT_TRUE(pi_cyc(f + g).agrees_with(pi_cyc(f) + pi_cyc(g)));
        EXPECT_TRUE(pi_cyc(f - g).agrees_with(pi_cyc(f) - pi_cyc(g)));
    }
    auto one = IwasawaElement2::from_terms(kP, {{0, 0, Integer(1)}}, D, N);
    EXPECT_TRUE(pi_cyc(one).agrees_with(IwasawaElement1::constant(kP, 1, D, N)));
}

TEST(Iwasawa, ResultantMatchesSylvesterDeterminant) {
    // Specialize S to small integers and compare with an exact rational determinant.
    std::mt19937_64 rng(808);
    long D = 12, N = 30;
    for (int i = 0; i < 40; ++i) {
        long m = 1 + static_cast<long>(rng() % 2), n = 1 + static_cast<long>(rng() % 2);
        std::vector<std::tuple<long, long, Integer>> tf{{0, m, Integer(1)}}, tg{{0, n, Integer(1)}};
        std::map<std::pair<long, long>, long> cf, cg;
        cf[{0, m}] = 1;
        cg[{0, n}] = 1;
        for (long j = 0; j < m; ++j)
            for (long s = 0; s <= 1; ++s) {
                long c = static_cast<long>(rng() % 7) - 3;
                tf.emplace_back(s, j, Integer(c));
                cf[{s, j}] += c;
            }
        for (long j = 0; j < n; ++j)
            for (long s = 0; s <= 1; ++s) {
                long c = static_cast<long>(rng() % 7) - 3;
                tg.emplace_back(s, j, Integer(c));
                cg[{s, j}] += c;
            }
        auto f = IwasawaElement2::from_terms(kP, tf, D, N), g = IwasawaElement2::from_terms(kP, tg, D, N);
        auto res = resultant_in_T(f, g);
        for (long s0 = -2; s0 <= 2; ++s0) {
            auto coef = [&](const std::map<std::pair<long, long>, long>& c, long j) {
                Rational v = 0;
                for (const auto& [key, x] : c)
                    if (key.second == j) v += Rational(x) * (key.first == 0 ? 1 : s0);
                return v;
            };
            RMatrix syl(static_cast<std::size_t>(m + n), RVector(static_cast<std::size_t>(m + n)));
            for (long r = 0; r < n; ++r)
                for (long j = 0; j <= m; ++j) syl[r][r + j] = coef(cf, m - j);
            for (long r = 0; r < m; ++r)
                for (long j = 0; j <= n; ++j) syl[n + r][r + j] = coef(cg, n - j);
            Rational want = determinant(syl);
            Rational got = 0;
            for (long k = 0; k <= D; ++k) got += res[k].to_rational() * Rational(ipow_big(s0 < 0 ? -s0 : s0, k)) *
                                                 ((s0 < 0 && k % 2) ? -1 : 1);
            Rational diff = got - want;
            EXPECT_TRUE(diff == 0 || valuation(diff, kP) >= 25) << "s = " << s0 << " got " << got << " want " << want;
        }
    }
}
