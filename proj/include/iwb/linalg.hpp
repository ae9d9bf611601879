#pragma once

// Dense exact linear algebra over Q, plus a division-free determinant usable
// over any commutative ring.

#include <vector>

#include "iwb/arith.hpp"

namespace iwb {

using RVector = std::vector<Rational>;
using RMatrix = std::vector<RVector>;

struct Rref {
    RMatrix rows;               // nonzero rows of the reduced echelon form
    std::vector<long> pivots;   // pivot column of each row
};

/// Reduced row echelon form; pivots are chosen left to right.
inline Rref rref(RMatrix m, long ncols) {
    Rref out;
    long nrows = static_cast<long>(m.size());
    long r = 0;
    for (long c = 0; c < ncols && r < nrows; ++c) {
        long piv = -1;
        for (long i = r; i < nrows; ++i)
            if (m[i][c] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(m[r], m[piv]);
        Rational inv = 1 / m[r][c];
        for (long j = c; j < ncols; ++j) m[r][j] *= inv;
        for (long i = 0; i < nrows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rational f = m[i][c];
            for (long j = c; j < ncols; ++j)
                if (m[r][j] != 0) m[i][j] -= f * m[r][j];
        }
        out.pivots.push_back(c);
        ++r;
    }
    m.resize(static_cast<std::size_t>(r));
    out.rows = std::move(m);
    return out;
}

inline long rank(const RMatrix& m, long ncols) { return static_cast<long>(rref(m, ncols).pivots.size()); }

/// Basis (as rows) of {x : m x = 0}.
inline RMatrix nullspace(const RMatrix& m, long ncols) {
    Rref e = rref(m, ncols);
    std::vector<bool> is_pivot(static_cast<std::size_t>(ncols), false);
    for (long c : e.pivots) is_pivot[c] = true;
    RMatrix basis;
    for (long f = 0; f < ncols; ++f) {
        if (is_pivot[f]) continue;
        RVector v(static_cast<std::size_t>(ncols));
        v[f] = 1;
        for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.rows[i][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

inline RMatrix mat_mul(const RMatrix& a, const RMatrix& b) {
    if (a.empty()) return {};
    std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    RMatrix r(n, RVector(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (a[i][t] == 0) continue;
            for (std::size_t j = 0; j < m; ++j)
                if (b[t][j] != 0) r[i][j] += a[i][t] * b[t][j];
        }
    return r;
}

inline RVector mat_vec(const RMatrix& a, const RVector& v) {
    RVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j)
            if (a[i][j] != 0 && v[j] != 0) r[i] += a[i][j] * v[j];
    return r;
}

/// Determinant by Gaussian elimination over Q.
inline Rational determinant(RMatrix m) {
    long n = static_cast<long>(m.size());
    Rational det = 1;
    for (long c = 0; c < n; ++c) {
        long piv = -1;
        for (long i = c; i < n; ++i)
            if (m[i][c] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) return 0;
        if (piv != c) {
            std::swap(m[c], m[piv]);
            det = -det;
        }
        det *= m[c][c];
        for (long i = c + 1; i < n; ++i) {
            if (m[i][c] == 0) continue;
            Rational f = m[i][c] / m[c][c];
            for (long j = c; j < n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    return det;
}

/// Berkowitz's division-free determinant. R needs +, -, * and copy.
template <class R>
R berkowitz_det(const std::vector<std::vector<R>>& a, const R& zero, const R& one) {
    long n = static_cast<long>(a.size());
    if (n == 0) return one;
    // v holds the characteristic polynomial coefficients of the leading k x k block.
    std::vector<R> v{one, zero - a[0][0]};
    for (long k = 1; k < n; ++k) {
        // Toeplitz column: 1, -a_kk, -R S, -R A S, ..., -R A^{k-1} S.
        std::vector<R> col;
        col.push_back(one);
        col.push_back(zero - a[k][k]);
        std::vector<R> s(static_cast<std::size_t>(k), zero);
        for (long i = 0; i < k; ++i) s[i] = a[i][k];
        for (long t = 0; t < k; ++t) {
            R dot = zero;
            for (long i = 0; i < k; ++i) dot = dot + a[k][i] * s[i];
            col.push_back(zero - dot);
            if (t + 1 < k) {
                std::vector<R> ns(static_cast<std::size_t>(k), zero);
                for (long i = 0; i < k; ++i)
                    for (long j = 0; j < k; ++j) ns[i] = ns[i] + a[i][j] * s[j];
                s = std::move(ns);
            }
        }
        std::vector<R> nv(static_cast<std::size_t>(k + 2), zero);
        for (long i = 0; i < k + 2; ++i)
            for (long j = 0; j <= std::min<long>(i, k); ++j) nv[i] = nv[i] + col[i - j] * v[j];
        v = std::move(nv);
    }
    return n % 2 == 0 ? v[n] : zero - v[n];
}

}  // namespace iwb
