#include <gtest/gtest.h>

#include <random>

#include "iwb/arith.hpp"

using namespace iwb;

namespace {

long brute_phi(long n) {
    long c = 0;
    for (long k = 1; k <= n; ++k) c += std::gcd(k, n) == 1;
    return c;
}

bool brute_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d < n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Legendre symbol by searching for a square root.
int brute_legendre(long a, long p) {
    a = floor_mod(a, p);
    if (a == 0) return 0;
    for (long x = 1; x < p; ++x)
        if (x * x % p == a) return 1;
    return -1;
}

bool brute_fundamental(long d) {
    if (d == 1 || d == 0) return false;
    long m = floor_mod(d, 4);
    auto squarefree = [](long n) {
        n = std::labs(n);
        for (long k = 2; k * k <= n; ++k)
            if (n % (k * k) == 0) return false;
        return true;
    };
    if (m == 1) return squarefree(d);
    if (m != 0) return false;
    long e = d / 4;
    long em = floor_mod(e, 4);
    return (em == 2 || em == 3) && squarefree(e);
}

}  // namespace

TEST(Arith, PrimesMatchTrialDivision) {
    auto ps = primes_up_to(500);
    std::vector<long> want;
    for (long n = 2; n <= 500; ++n)
        if (brute_prime(n)) want.push_back(n);
    EXPECT_EQ(ps, want);
    for (long n = -3; n <= 500; ++n) EXPECT_EQ(is_prime(n), brute_prime(n)) << n;
}

TEST(Arith, EulerPhiMatchesCount) {
    for (long n = 1; n <= 300; ++n) EXPECT_EQ(euler_phi(n), brute_phi(n)) << n;
}

TEST(Arith, FactorReassembles) {
    for (long n = 2; n <= 2000; ++n) {
        long m = 1;
        for (auto [q, e] : factor(n)) {
            EXPECT_TRUE(brute_prime(q));
            m *= ipow(q, e);
        }
        EXPECT_EQ(m, n);
    }
}

TEST(Arith, KroneckerAgreesWithLegendreAtOddPrimes) {
    for (long p : primes_up_to(60)) {
        if (p == 2) continue;
        for (long a = -50; a <= 50; ++a) EXPECT_EQ(kronecker(a, p), brute_legendre(a, p)) << a << " " << p;
    }
}

TEST(Arith, KroneckerAtTwoForDiscriminants) {
    // (d/2) = 0 for even d, +1 for d = +-1 mod 8, -1 for d = +-3 mod 8.
    for (long d = -200; d <= 200; ++d) {
        if (floor_mod(d, 4) != 0 && floor_mod(d, 4) != 1) continue;
        int want = d % 2 == 0 ? 0 : (floor_mod(d, 8) == 1 || floor_mod(d, 8) == 7 ? 1 : -1);
        EXPECT_EQ(kronecker(d, 2), want) << d;
    }
}

TEST(Arith, FundamentalDiscriminants) {
    for (long d = -600; d <= 600; ++d) EXPECT_EQ(is_fundamental_discriminant(d), brute_fundamental(d)) << d;
    for (long d : {-3, -4, -7, -8, -43, -107, -139, -283, -331, -487}) EXPECT_TRUE(is_fundamental_discriminant(d));
    EXPECT_FALSE(is_fundamental_discriminant(-12));
}

TEST(Arith, InverseModRandom) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
        long m = 2 + static_cast<long>(rng() % 10000);
        long a = static_cast<long>(rng() % m);
        if (std::gcd(a, m) != 1) continue;
        EXPECT_EQ(mul_mod(a, inverse_mod(a, m), m), 1 % m);
    }
}

TEST(Arith, PowModMatchesRepeatedProduct) {
    for (long m : {7L, 9L, 1000L, 65537L})
        for (long b = 0; b < 20; ++b) {
            long acc = 1 % m;
            for (unsigned long e = 0; e < 30; ++e) {
                EXPECT_EQ(pow_mod(b, e, m), acc);
                acc = mul_mod(acc, b, m);
            }
        }
}

TEST(Arith, ValuationOfRationals) {
    EXPECT_EQ(valuation(Rational(9, 2), 3), 2);
    EXPECT_EQ(valuation(Rational(2, 27), 3), -3);
    EXPECT_EQ(valuation(Integer(48), 2), 4);
    EXPECT_EQ(valuation(12L, 3L), 1);
}

TEST(Arith, BinomialBigMatchesPascal) {
    // C(c, k) for negative and large c via the falling factorial.
    for (long c = -12; c <= 12; ++c)
        for (long k = 0; k <= 10; ++k) {
            Rational f = 1;
            for (long i = 0; i < k; ++i) {
                Rational step(c - i, i + 1);
                step.canonicalize();
                f *= step;
            }
            EXPECT_EQ(Rational(binomial_big(Integer(c), k)), f) << c << " " << k;
        }
}

TEST(Arith, PrimitiveRootGeneratesUnits) {
    for (long p : {3L, 5L, 7L, 11L})
        for (int k = 1; k <= 3; ++k) {
            long q = ipow(p, k), g = primitive_root_prime_power(p, k);
            long x = 1, ord = 0;
            do {
                x = mul_mod(x, g, q);
                ++ord;
            } while (x != 1);
            EXPECT_EQ(ord, euler_phi(q)) << p << "^" << k;
        }
}
