#pragma once

// Dense integer polynomials, coefficient of x^i at index i.

#include <algorithm>
#include <string>
#include <vector>

#include "iwb/arith.hpp"

namespace iwb {

using IntPoly = std::vector<Integer>;

inline void trim(IntPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline long degree(const IntPoly& f) {
    for (long i = static_cast<long>(f.size()) - 1; i >= 0; --i)
        if (f[i] != 0) return i;
    return -1;
}

inline IntPoly poly_add(const IntPoly& a, const IntPoly& b) {
    IntPoly r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    trim(r);
    return r;
}

inline IntPoly poly_sub(const IntPoly& a, const IntPoly& b) {
    IntPoly r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    trim(r);
    return r;
}

inline IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
    if (a.empty() || b.empty()) return {};
    IntPoly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            mpz_addmul(r[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
    trim(r);
    return r;
}

// Product with every coefficient reduced into [0, modulus).
inline IntPoly poly_mul_mod(const IntPoly& a, const IntPoly& b, const Integer& modulus) {
    IntPoly r = poly_mul(a, b);
    for (auto& c : r) c = mod_nonneg(c, modulus);
    trim(r);
    return r;
}

inline IntPoly poly_scale(const IntPoly& a, const Integer& s) {
    IntPoly r = a;
    for (auto& c : r) c *= s;
    trim(r);
    return r;
}

// Remainder of f modulo a monic polynomial m.
inline IntPoly poly_rem_monic(IntPoly f, const IntPoly& m) {
    long dm = degree(m);
    require(dm >= 0 && m[dm] == 1, ErrorKind::InvalidArgument, "modulus must be monic");
    std::vector<std::pair<long, Integer>> low;
    for (long i = 0; i < dm; ++i)
        if (m[i] != 0) low.emplace_back(i, m[i]);
    for (long j = static_cast<long>(f.size()) - 1; j >= dm; --j) {
        if (f[j] == 0) continue;
        Integer c = f[j];
        f[j] = 0;
        for (const auto& [i, mi] : low) mpz_submul(f[j - dm + i].get_mpz_t(), c.get_mpz_t(), mi.get_mpz_t());
    }
    trim(f);
    return f;
}

// Exact quotient f / (x^d - 1); throws if the division is not exact.
inline IntPoly poly_div_xd_minus_one(IntPoly f, long d) {
    trim(f);
    long n = degree(f);
    if (n < 0) return {};
    require(n >= d, ErrorKind::Internal, "inexact division by x^d - 1");
    IntPoly q(static_cast<std::size_t>(n - d + 1));
    for (long j = n; j >= d; --j) {
        Integer c = f[j];
        q[j - d] = c;
        f[j] = 0;
        f[j - d] += c;
    }
    trim(f);
    require(f.empty(), ErrorKind::Internal, "inexact division by x^d - 1");
    return q;
}

// g(x) = f(1 + x), computed as a Taylor shift.
inline IntPoly taylor_shift_one(IntPoly f) {
    long n = static_cast<long>(f.size());
    for (long i = 0; i < n; ++i)
        for (long j = n - 2; j >= i; --j) f[j] += f[j + 1];
    trim(f);
    return f;
}

inline Integer poly_eval(const IntPoly& f, const Integer& x) {
    Integer r = 0;
    for (long i = static_cast<long>(f.size()) - 1; i >= 0; --i) r = r * x + f[i];
    return r;
}

inline std::string poly_to_string(const IntPoly& f, const std::string& var = "X") {
    std::string s;
    for (long i = degree(f); i >= 0; --i) {
        if (f[i] == 0) continue;
        Integer c = f[i];
        bool neg = c < 0;
        if (neg) c = -c;
        if (!s.empty()) s += neg ? " - " : " + ";
        else if (neg) s += "-";
        bool unit_coeff = (c == 1 && i > 0);
        if (!unit_coeff) s += c.get_str();
        if (i > 0) {
            if (!unit_coeff) s += "*";
            s += var;
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s.empty() ? "0" : s;
}

}  // namespace iwb
