#pragma once

// Integer and rational helpers shared by every module. Machine-word routines
// use 128-bit intermediates; anything unbounded goes through GMP.

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "iwb/errors.hpp"

namespace iwb {

using Integer = mpz_class;
using Rational = mpq_class;

inline long floor_mod(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

inline long gcd(long a, long b) { return std::gcd(a, b); }

inline long mul_mod(long a, long b, long m) {
    return static_cast<long>((static_cast<__int128>(a) * b) % m);
}

inline long pow_mod(long base, unsigned long e, long m) {
    long result = 1 % m;
    base = floor_mod(base, m);
    while (e) {
        if (e & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    return result;
}

// Extended gcd: returns g and sets s, t with s*a + t*b = g.
inline long xgcd(long a, long b, long& s, long& t) {
    long old_r = a, r = b, old_s = 1, cur_s = 0, old_t = 0, cur_t = 1;
    while (r != 0) {
        long q = old_r / r;
        long tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * cur_s;
        old_s = cur_s;
        cur_s = tmp;
        tmp = old_t - q * cur_t;
        old_t = cur_t;
        cur_t = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    s = old_s;
    t = old_t;
    return old_r;
}

inline long inverse_mod(long a, long m) {
    long s, t;
    long g = xgcd(floor_mod(a, m), m, s, t);
    require(g == 1, ErrorKind::InvalidArgument,
            std::to_string(a) + " is not invertible mod " + std::to_string(m));
    return floor_mod(s, m);
}

inline bool is_prime(long n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (long d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<long> primes_up_to(long bound) {
    std::vector<long> out;
    if (bound < 2) return out;
    std::vector<bool> sieve(static_cast<std::size_t>(bound + 1), true);
    for (long i = 2; i <= bound; ++i) {
        if (!sieve[i]) continue;
        out.push_back(i);
        for (long j = i * i; j <= bound; j += i) sieve[j] = false;
    }
    return out;
}

// Prime factorization of |n| as (prime, exponent) pairs in increasing order.
inline std::vector<std::pair<long, int>> factor(long n) {
    std::vector<std::pair<long, int>> out;
    if (n < 0) n = -n;
    for (long d = 2; d * d <= n; ++d) {
        if (n % d) continue;
        int e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        out.emplace_back(d, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline long euler_phi(long n) {
    long r = n;
    for (auto [q, e] : factor(n)) r = r / q * (q - 1);
    return r;
}

inline long ipow(long base, int e) {
    long r = 1;
    while (e-- > 0) r *= base;
    return r;
}

inline Integer ipow_big(long base, long e) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(e));
    return r;
}

inline int valuation(long n, long p) {
    require(n != 0, ErrorKind::InvalidArgument, "valuation of zero");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

inline long valuation(const Integer& n, long p) {
    require(n != 0, ErrorKind::InvalidArgument, "valuation of zero");
    Integer pp = p;
    return static_cast<long>(mpz_remove(Integer().get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t()));
}

// Strips all factors of p in place and returns how many were removed.
inline long remove_factor(Integer& n, long p) {
    if (n == 0) return 0;
    Integer pp = p;
    return static_cast<long>(mpz_remove(n.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t()));
}

inline long valuation(const Rational& q, long p) {
    require(q != 0, ErrorKind::InvalidArgument, "valuation of zero");
    return valuation(Integer(q.get_num()), p) - valuation(Integer(q.get_den()), p);
}

inline Integer mod_nonneg(const Integer& a, const Integer& m) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline Integer inverse_mod(const Integer& a, const Integer& m) {
    Integer r;
    int ok = mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    require(ok != 0, ErrorKind::InvalidArgument, "non-invertible residue");
    return r;
}

inline Integer binomial(long n, long k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

// Kronecker symbol (a/n) for n > 0.
/// C(c, k) for any integer c.
inline Integer binomial_big(const Integer& c, long k) {
    Integer r;
    mpz_bin_ui(r.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(k));
    return r;
}

inline int kronecker(long a, long n) {
    require(n > 0, ErrorKind::InvalidArgument, "kronecker symbol needs n > 0");
    Integer A = a, N = n;
    return mpz_kronecker(A.get_mpz_t(), N.get_mpz_t());
}

inline bool is_squarefree(long n) {
    for (auto [q, e] : factor(n))
        if (e > 1) return false;
    return true;
}

inline bool is_fundamental_discriminant(long d) {
    if (d == 0 || d == 1) return false;
    long m = floor_mod(d, 4);
    if (m == 1) return is_squarefree(d);
    if (m != 0) return false;
    long e = d / 4;
    long r = floor_mod(e, 4);
    return (r == 2 || r == 3) && is_squarefree(e);
}

// Smallest primitive root modulo p^k for an odd prime p.
inline long primitive_root_prime_power(long p, int k) {
    require(p > 2 && is_prime(p), ErrorKind::InvalidArgument, "odd prime expected");
    long order = p - 1;
    auto fac = factor(order);
    long g = 2;
    for (;; ++g) {
        bool ok = true;
        for (auto [q, e] : fac)
            if (pow_mod(g, static_cast<unsigned long>(order / q), p) == 1) {
                ok = false;
                break;
            }
        if (ok) break;
    }
    if (k >= 2 && pow_mod(g, static_cast<unsigned long>(p - 1), p * p) == 1) g += p;
    return g;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

/// n/d in canonical form.
inline Rational ratio(const Integer& n, const Integer& d) {
    Rational q(n, d);
    q.canonicalize();
    return q;
}

inline Rational rational_from_string(const std::string& s) {
    Rational q;
    require(q.set_str(s, 10) == 0, ErrorKind::Parse, "bad rational '" + s + "'");
    q.canonicalize();
    return q;
}

}  // namespace iwb
