#include <gtest/gtest.h>

#include <random>

#include "iwb/modsym.hpp"

using namespace iwb;

namespace {

const CurveData& curve32a() {
    static const CurveData E("32a", {0, 0, 0, -1, 0}, 32);
    return E;
}

struct Pair {
    EigenSymbol plus, minus;
};

const Pair& symbols32a() {
    static const Pair s{extract_eigensymbol(ManinSymbolSpace(32, 1), curve32a()),
                        extract_eigensymbol(ManinSymbolSpace(32, -1), curve32a())};
    return s;
}

// ell + 1 - #E(F_ell) from the 9-pair style table: all (x, y) mod ell.
long brute_ap(const std::array<long, 5>& a, long ell) {
    long count = 1;
    for (long x = 0; x < ell; ++x)
        for (long y = 0; y < ell; ++y) {
            long lhs = y * y + a[0] * x * y + a[2] * y;
            long rhs = x * x * x + a[1] * x * x + a[3] * x + a[4];
            if (floor_mod(lhs - rhs, ell) == 0) ++count;
        }
    return ell + 1 - count;
}

long p1_size(long N) {
    long s = N;
    for (auto [q, e] : factor(N)) s = s / q * (q + 1);
    return N == 1 ? 1 : s;
}

RMatrix mul(const RMatrix& a, const RMatrix& b) { return mat_mul(a, b); }

}  // namespace

TEST(Curve, PointCountsMatchEnumeration) {
    std::vector<std::pair<std::string, std::array<long, 5>>> curves{
        {"32a", {0, 0, 0, -1, 0}}, {"40a1", {0, 0, 0, -7, -6}}, {"56a1", {0, 0, 0, 1, 2}}, {"11a1", {0, -1, 1, -10, -20}}};
    std::vector<long> conductors{32, 40, 56, 11};
    for (std::size_t i = 0; i < curves.size(); ++i) {
        CurveData E(curves[i].first, curves[i].second, conductors[i]);
        for (long ell : primes_up_to(60)) {
            if (!E.has_good_reduction(ell)) continue;
            long a = E.ap(ell);
            EXPECT_EQ(a, brute_ap(curves[i].second, ell)) << curves[i].first << " " << ell;
            EXPECT_LE(a * a, 4 * ell);
        }
    }
    EXPECT_EQ(curve32a().ap(3), 0);
    EXPECT_EQ(curve32a().ap(7), 0);
}

TEST(Curve, BadPrimeRejected) {
    try {
        (void)curve32a().ap(2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::BadReduction);
    }
}

TEST(ManinSymbols, GeneratorCounts) {
    for (long N = 1; N <= 120; ++N) EXPECT_EQ(static_cast<long>(P1List(N).size()), p1_size(N)) << N;
    EXPECT_EQ(P1List(32).size(), 48u);
    EXPECT_EQ(P1List(11).size(), 12u);
    EXPECT_EQ(P1List(1).size(), 1u);
}

TEST(ManinSymbols, LevelElevenEigenspaces) {
    for (int s : {1, -1}) EXPECT_EQ(ManinSymbolSpace(11, s).cuspidal_dimension(), 1);
}

TEST(ManinSymbols, RelationsHoldInQuotient) {
    for (long N : {11L, 32L, 40L, 56L})
        for (int s : {1, -1}) {
            ManinSymbolSpace M(N, s);
            for (long i = 0; i < static_cast<long>(M.generator_count()); ++i) {
                RVector a = M.image_dense(i), b = M.image_dense(M.s_index(i));
                long t1 = M.t_index(i), t2 = M.t_index(t1);
                RVector c = M.image_dense(t1), d = M.image_dense(t2), e = M.image_dense(M.star_index(i));
                for (long j = 0; j < M.dimension(); ++j) {
                    EXPECT_EQ(a[j] + b[j], 0);
                    EXPECT_EQ(a[j] + c[j] + d[j], 0);
                    EXPECT_EQ(e[j], s * a[j]);
                }
            }
        }
}

TEST(ManinSymbols, HeckeOperatorsCommute) {
    for (long N : {32L, 40L, 56L}) {
        ManinSymbolSpace M(N, 1);
        std::vector<long> ells;
        for (long ell : primes_up_to(20))
            if (N % ell) ells.push_back(ell);
        for (std::size_t i = 0; i < ells.size(); ++i)
            for (std::size_t j = i + 1; j < ells.size(); ++j) {
                RMatrix A = M.hecke_matrix(ells[i]), B = M.hecke_matrix(ells[j]);
                EXPECT_EQ(mul(A, B), mul(B, A)) << N << ": T" << ells[i] << " T" << ells[j];
            }
    }
}

TEST(EigenSymbol, ResidualsVanishUpToFifty) {
    std::vector<std::pair<std::string, std::array<long, 5>>> curves{
        {"32a", {0, 0, 0, -1, 0}}, {"40a1", {0, 0, 0, -7, -6}}, {"56a1", {0, 0, 0, 1, 2}}};
    std::vector<long> conductors{32, 40, 56};
    for (std::size_t c = 0; c < curves.size(); ++c) {
        CurveData E(curves[c].first, curves[c].second, conductors[c]);
        for (int s : {1, -1}) {
            ManinSymbolSpace M(conductors[c], s);
            EigenSymbol f = extract_eigensymbol(M, E);
            RVector v(static_cast<std::size_t>(M.dimension()));
            for (long b = 0; b < M.dimension(); ++b) v[b] = f.values()[M.basis_generator(b)];
            for (long ell : primes_up_to(50)) {
                if (!E.has_good_reduction(ell)) continue;
                RVector tv = mat_vec(M.hecke_matrix(ell), v);
                for (long b = 0; b < M.dimension(); ++b)
                    EXPECT_EQ(tv[b], Rational(E.ap(ell)) * v[b]) << E.label() << " ell=" << ell;
            }
            // unitized: integral with gcd 1
            Integer g = 0;
            for (long x : f.values()) mpz_gcd_ui(g.get_mpz_t(), g.get_mpz_t(), static_cast<unsigned long>(std::labs(x)));
            EXPECT_EQ(g, 1);
            for (long i = 0; i < static_cast<long>(M.generator_count()); ++i)
                EXPECT_EQ(f.values()[M.star_index(i)], s * f.values()[i]);
        }
    }
}

TEST(EigenSymbol, HeckeOnPaths) {
    // sum_b [(a + b m)/(ell m)] + [ell a / m] = a_ell [a/m]
    const auto& S = symbols32a();
    std::mt19937_64 rng(9);
    for (int i = 0; i < 200; ++i) {
        long m = 1 + static_cast<long>(rng() % 200), a = static_cast<long>(rng() % 400) - 200;
        for (long ell : {3L, 5L, 7L, 13L}) {
            for (const EigenSymbol* f : {&S.plus, &S.minus}) {
                long lhs = f->eval_path(ell * a, m);
                for (long b = 0; b < ell; ++b) lhs += f->eval_path(a + b * m, ell * m);
                EXPECT_EQ(lhs, curve32a().ap(ell) * f->eval_path(a, m)) << a << "/" << m << " ell " << ell;
            }
        }
    }
}

TEST(EigenSymbol, PathRouteIndependence) {
    const auto& S = symbols32a();
    std::mt19937_64 rng(10);
    for (int i = 0; i < 100; ++i) {
        long m = 1 + static_cast<long>(rng() % 5000), a = static_cast<long>(rng() % 20001) - 10000;
        EXPECT_EQ(S.plus.eval_path(a, m), S.plus.eval_path_nearest(a, m)) << a << "/" << m;
        EXPECT_EQ(S.minus.eval_path(a, m), S.minus.eval_path_nearest(a, m)) << a << "/" << m;
    }
}

TEST(EigenSymbol, ParityOfPaths) {
    const auto& S = symbols32a();
    for (long m = 1; m < 60; ++m)
        for (long a = -m; a <= m; ++a) {
            EXPECT_EQ(S.plus.eval_path(-a, m), S.plus.eval_path(a, m));
            EXPECT_EQ(S.minus.eval_path(-a, m), -S.minus.eval_path(a, m));
        }
}

TEST(EigenSymbol, PeriodicInNumerator) {
    const auto& S = symbols32a();
    for (long m = 1; m < 40; ++m)
        for (long a = 0; a < m; ++a) EXPECT_EQ(S.plus.eval_path(a + 7 * m, m), S.plus.eval_path(a, m));
}

TEST(EigenSymbol, LevelMismatchRejected) {
    try {
        (void)extract_eigensymbol(ManinSymbolSpace(64, 1), curve32a());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
    }
}

TEST(Twist, IdentityAtTrivialDiscriminant) {
    const auto& S = symbols32a();
    for (long m = 1; m < 30; ++m)
        for (long a = 0; a < m; ++a) {
            EXPECT_EQ(twist_symbol_value(S.plus, S.minus, 1, 1, a, m), Integer(S.plus.eval_path(a, m)));
            EXPECT_EQ(twist_symbol_value(S.plus, S.minus, 1, -1, a, m), Integer(S.minus.eval_path(a, m)));
        }
}

TEST(Twist, RejectsNonCoprimeDenominator) {
    const auto& S = symbols32a();
    try {
        (void)twist_symbol_value(S.plus, S.minus, -43, 1, 1, 43);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
    }
}

TEST(Twist, AgreesWithDirectTwistedSpace) {
    // 32a twisted by chi_{-3} is y^2 = x^3 - 9x of conductor 288.
    CurveData Et("32a(-3)", {0, 0, 0, -9, 0}, 288);
    const auto& S = symbols32a();
    for (int sign : {1, -1}) {
        EigenSymbol direct = extract_eigensymbol(ManinSymbolSpace(288, sign), Et);
        std::optional<Rational> scale;
        std::mt19937_64 rng(12 + sign);
        int nonzero = 0;
        for (int i = 0; i < 150; ++i) {
            long m = 1 + static_cast<long>(rng() % 300);
            if (m % 3 == 0) continue;
            long a = static_cast<long>(rng() % 1000) - 500;
            Integer birch = twist_symbol_value(S.plus, S.minus, -3, sign, a, m);
            long d = direct.eval_path(a, m);
            if (d == 0) {
                EXPECT_EQ(birch, 0) << a << "/" << m;
                continue;
            }
            ++nonzero;
            Rational r(birch, Integer(d));
            r.canonicalize();
            if (!scale) scale = r;
            EXPECT_EQ(r, *scale) << a << "/" << m;
        }
        EXPECT_GT(nonzero, 20);
        ASSERT_TRUE(scale.has_value());
        EXPECT_NE(*scale, 0);
    }
}
