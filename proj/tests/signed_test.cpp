#include <gtest/gtest.h>

#include <map>
#include <random>

#include "iwb/expected_table.hpp"
#include "iwb/signed.hpp"
#include "oracles.hpp"

using namespace iwb;

namespace {

using oracle::direct_sum;
using oracle::eval_int_poly;
using oracle::shifted_representative;

struct Curve {
    CurveData E;
    std::shared_ptr<const EigenSymbol> plus, minus;
};

const Curve& curve(const std::string& label) {
    static std::map<std::string, Curve> cache;
    static const std::map<std::string, std::pair<std::array<long, 5>, long>> known{
        {"32a", {{0, 0, 0, -1, 0}, 32}}, {"40a1", {{0, 0, 0, -7, -6}, 40}}, {"56a1", {{0, 0, 0, 1, 2}, 56}},
        {"11a1", {{0, -1, 1, -10, -20}, 11}}};
    auto it = cache.find(label);
    if (it != cache.end()) return it->second;
    const auto& [a, N] = known.at(label);
    CurveData E(label, a, N);
    auto plus = std::make_shared<const EigenSymbol>(extract_eigensymbol(ManinSymbolSpace(N, 1), E));
    auto minus = std::make_shared<const EigenSymbol>(extract_eigensymbol(ManinSymbolSpace(N, -1), E));
    return cache.emplace(label, Curve{E, plus, minus}).first->second;
}

SymbolSource source(const std::string& label, long D) {
    const Curve& c = curve(label);
    return SymbolSource(c.E, c.plus, c.minus, D);
}

const SymbolTables& tables(const std::string& label, long D, long top = 7) {
    static std::map<std::tuple<std::string, long, long>, std::unique_ptr<SymbolTables>> cache;
    auto key = std::make_tuple(label, D, top);
    auto& slot = cache[key];
    if (!slot) slot = std::make_unique<SymbolTables>(source(label, D), 3, top, 4);
    return *slot;
}

// Kronecker symbol (D/u), D odd, by Euler's criterion at each prime factor of u.
int brute_chi(long D, long u) {
    if (std::gcd(D, u) != 1) return 0;
    long n = u;
    int out = 1;
    for (long q = 2; q <= n; ++q)
        while (n % q == 0) {
            n /= q;
            if (q == 2) {
                long d8 = floor_mod(D, 8);
                out *= (d8 == 1 || d8 == 7) ? 1 : -1;
            } else {
                out *= pow_mod(floor_mod(D, q), static_cast<unsigned long>((q - 1) / 2), q) == 1 ? 1 : -1;
            }
        }
    return out;
}

// Checks r(zeta^s - 1) * prod Phi_{p^k}(zeta^s) = (-1)^e S_m(zeta^s) for the s in `ss`.
void check_interpolation(const SymbolTables& tab, const SignedLSeries& f, long m, const std::vector<long>& ss) {
    oracle::InterpolationCheck check(tab, f);
    for (long s : ss) EXPECT_TRUE(check.holds(m, s)) << f.label << " sign " << f.sign << " m=" << m << " s=" << s;
}

}  // namespace

TEST(MazurTate, CharacterEvaluationMatchesBirchSum) {
    const auto& tab = tables("32a", -43);
    for (long n = 1; n <= 4; ++n) {
        auto mt = mazur_tate(tab, n);
        auto jtab = gamma_log_table(3, static_cast<int>(n + 1));
        for (long s = 0; s < ipow(3, static_cast<int>(n)); ++s) {
            auto psi = DirichletCharacter::cyclotomic(3, static_cast<int>(n), s);
            EXPECT_EQ(mt.evaluate(psi, jtab), birch_sum(tab, psi)) << "n=" << n << " s=" << s;
        }
    }
}

TEST(MazurTate, CoefficientsSumToTrivialCharacter) {
    const auto& tab = tables("32a", 1);
    for (long n = 0; n <= 5; ++n) {
        auto mt = mazur_tate(tab, n);
        Integer total = 0, direct = 0;
        for (const auto& c : mt.coefficients()) total += c;
        long q = ipow(3, static_cast<int>(n + 1));
        for (long a = 1; a < q; ++a)
            if (a % 3) direct += tab.value(a, n + 1);
        EXPECT_EQ(total, direct);
    }
}

TEST(Twist, ValuesMatchBruteDoubleSum) {
    const Curve& c = curve("32a");
    std::mt19937_64 rng(43);
    for (long D : {-43L, -107L}) {
        long ad = -D;
        for (int i = 0; i < 60; ++i) {
            long m = ipow(3, 1 + static_cast<int>(rng() % 5));
            long a = static_cast<long>(rng() % m);
            for (int sign : {1, -1}) {
                const EigenSymbol& base = sign == -1 ? *c.plus : *c.minus;
                Integer want = 0;
                for (long u = 0; u < ad; ++u)
                    want += brute_chi(D, u) * base.eval_path_nearest(a * ad + u * m, m * ad);
                EXPECT_EQ(twist_symbol_value(*c.plus, *c.minus, D, sign, a, m), want) << D << " " << a << "/" << m;
            }
        }
    }
}

TEST(Twist, SourceParity) {
    auto src = source("32a", -43);
    for (long m : {9L, 27L, 81L})
        for (long a = 1; a < m; ++a) EXPECT_EQ(src.value(-a, m), src.value(a, m));
}

TEST(SignedSeries, CrtRecoversPolynomial) {
    std::mt19937_64 rng(77);
    for (int sign : {1, -1}) {
        auto levels = signed_levels(sign, 4);
        IntPoly omega{Integer(1)};
        for (long m : levels) omega = poly_mul(omega, cyclotomic_poly(3, static_cast<int>(m)));
        long deg = degree(omega);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<Rational> r(static_cast<std::size_t>(deg));
            for (auto& x : r) x = ratio(static_cast<long>(rng() % 41) - 20, 1 + static_cast<long>(rng() % 3));
            auto [num, den] = shifted_representative(r);
            std::vector<CyclotomicInt> values;
            for (long m : levels)
                values.push_back(eval_int_poly(num, ipow(3, static_cast<int>(m)), 1) * ratio(1, den));
            EXPECT_EQ(crt_reconstruct(3, levels, values), r);
        }
    }
}

TEST(SignedSeries, InverseCyclotomicValues) {
    for (long m = 1; m <= 4; ++m)
        for (long k = 1; k <= 5; ++k) {
            if (k == m) continue;
            long L = ipow(3, static_cast<int>(m));
            auto inv = inverse_phi_at_root(3, k, m);
            auto phi = eval_int_poly(cyclotomic_poly_in_y(ipow(3, static_cast<int>(k))), L, 1);
            EXPECT_EQ(inv * phi, CyclotomicInt::from_integer(L, 1)) << k << " " << m;
        }
}

TEST(SignedSeries, ReinterpolationAtAllCharacters) {
    // Every character of conductor 3^{m+1}, m <= 4; for m = 5, 6 a spread of Galois conjugates.
    for (auto [label, D] : {std::pair<std::string, long>{"32a", -43}, {"32a", 1}, {"40a1", -331}}) {
        const auto& tab = tables(label, D);
        for (int sign : {1, -1}) {
            auto f = reconstruct_signed(tab, sign, 6, 30, 728);
            for (long m : f.levels) {
                long L = ipow(3, static_cast<int>(m));
                std::vector<long> ss;
                for (long s = 1; s < L; ++s)
                    if (s % 3 && (m <= 4 || s % 37 == 1 || s == L - 1)) ss.push_back(s);
                check_interpolation(tab, f, m, ss);
            }
        }
    }
}

TEST(SignedSeries, InterpolationValuesAreGaloisEquivariant) {
    const auto& tab = tables("56a1", -139);
    for (long m = 1; m <= 4; ++m) {
        int sign = m % 2 ? 1 : -1;
        auto v = signed_interpolation_value(mazur_tate(tab, m), sign);
        long L = ipow(3, static_cast<int>(m));
        auto num = direct_sum(tab, m, 1);
        for (long s = 1; s < L; ++s) {
            if (s % 3 == 0) continue;
            EXPECT_EQ(direct_sum(tab, m, s), num.galois(s));
            // the valuation of a conjugate does not depend on s
            EXPECT_EQ(v.galois(s).norm(), v.norm());
        }
    }
}

TEST(SignedSeries, TableRowMatchesExpected) {
    const auto& tab = tables("32a", -43);
    const ExpectedRow* row = find_expected("32a", -43, 3);
    ASSERT_NE(row, nullptr);
    auto plus = reconstruct_signed(tab, 1, 6, 30, 728);
    auto minus = reconstruct_signed(tab, -1, 6, 30, 728);
    EXPECT_EQ(plus.profile.mu, 0);
    EXPECT_EQ(plus.profile.lambda, row->lambda_plus);
    EXPECT_EQ(plus.profile.slopes_string(), row->slopes_plus);
    EXPECT_EQ(minus.profile.mu, 0);
    EXPECT_EQ(minus.profile.lambda, row->lambda_minus);
    EXPECT_EQ(minus.profile.slopes_string(), row->slopes_minus);
    EXPECT_TRUE(plus.profile.stabilized && minus.profile.stabilized);
    EXPECT_TRUE(plus.guard_ok && minus.guard_ok);
    EXPECT_EQ(plus.levels, (std::vector<long>{1, 3, 5}));
    EXPECT_EQ(minus.levels, (std::vector<long>{2, 4, 6}));
}

TEST(SignedSeries, ProfileStableFromSixToSeven) {
    const auto& tab = tables("32a", -107, 8);
    for (int sign : {1, -1}) {
        auto a = reconstruct_signed(tab, sign, 6, 30, 728);
        auto b = reconstruct_signed(tab, sign, 7, 30, 2186);
        EXPECT_TRUE(a.profile.same_invariants(b.profile)) << a.profile.to_string() << " vs " << b.profile.to_string();
        EXPECT_TRUE(b.profile.stabilized);
    }
}

TEST(SignedSeries, BaseCurvePlusIsUnit) {
    for (const char* label : {"32a", "40a1", "56a1"}) {
        auto f = reconstruct_signed(tables(label, 1), 1, 6, 30, 728);
        EXPECT_EQ(f.profile.mu, 0) << label;
        EXPECT_EQ(f.profile.lambda, 0) << label;
        EXPECT_TRUE(f.profile.stabilized) << label;
    }
}

TEST(SignedSeries, TrivialCharacterRatio) {
    for (const char* label : {"32a", "40a1", "56a1"}) {
        const auto& tab = tables(label, 1);
        auto plus = reconstruct_signed(tab, 1, 6, 30, 728);
        auto minus = reconstruct_signed(tab, -1, 6, 30, 728);
        auto rep = trivial_character_ratio_check(plus, minus);
        EXPECT_EQ(rep.expected, 1);
        EXPECT_EQ(rep.status, "consistent") << label << ": " << rep.detail;
    }
}

TEST(SignedSeries, HistoryCoversEachLevel) {
    auto f = reconstruct_signed(tables("32a", -43), -1, 6, 30, 728);
    ASSERT_EQ(f.history.size(), 5u);  // n = 2..6
    EXPECT_EQ(f.history.front().levels, (std::vector<long>{2}));
    EXPECT_EQ(f.history.back().levels, (std::vector<long>{2, 4, 6}));
}

TEST(SignedSeries, InputErrors) {
    auto expect_kind = [](ErrorKind k, auto&& fn) {
        try {
            fn();
            FAIL() << "no error";
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), k) << e.what();
        }
    };
    const auto& tab = tables("32a", 1);
    expect_kind(ErrorKind::InvalidArgument, [&] { reconstruct_signed(tab, 0, 6, 30, 728); });
    expect_kind(ErrorKind::InvalidArgument, [&] { reconstruct_signed(tab, 1, 7, 30, 2186); });
    expect_kind(ErrorKind::TruncationInsufficient, [&] { reconstruct_signed(tab, 1, 6, 30, 100); });
    expect_kind(ErrorKind::InvalidArgument, [&] { signed_interpolation_value(mazur_tate(tab, 2), 1); });
    expect_kind(ErrorKind::UnsupportedHypothesis, [&] { SymbolTables(source("11a1", 1), 3, 2); });
    expect_kind(ErrorKind::BadReduction, [&] { SymbolTables(source("11a1", 1), 11, 1); });
    expect_kind(ErrorKind::InvalidArgument, [&] { SymbolTables(source("32a", -3), 3, 2); });
    expect_kind(ErrorKind::InvalidArgument, [&] { source("32a", -12); });
}
