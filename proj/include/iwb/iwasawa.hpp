#pragma once

// Truncated power series over Z_p in one and two variables, Newton polygons,
// Weierstrass preparation, Pollack's half logarithms and resultants in T.

#include <algorithm>
#include <climits>
#include <string>
#include <tuple>
#include <vector>

#include "iwb/arith.hpp"
#include "iwb/cyclotomic.hpp"
#include "iwb/linalg.hpp"
#include "iwb/padic.hpp"
#include "iwb/poly.hpp"

namespace iwb {

/// Rational known to absolute precision N (zero within precision when v >= N).
inline PadicScalar padic_abs(long p, const Rational& q, long N) {
    if (q == 0) return PadicScalar::zero_mod(p, N);
    long v = valuation(q, p);
    if (v >= N) return PadicScalar::zero_mod(p, N);
    return PadicScalar::from_rational(p, q, N - v);
}

/// Element of Z_p[[X]] (coefficients may carry negative valuation) truncated
/// at degree D; coefficients beyond D are unknown.
class IwasawaElement1 {
   public:
    IwasawaElement1() = default;

    IwasawaElement1(long p, long D, long N) : p_(p), D_(D), N_(N) {
        require(p > 2 && is_prime(p), ErrorKind::InvalidArgument, "odd prime expected");
        require(D >= 0 && N >= 1, ErrorKind::InvalidArgument, "bad truncation or precision");
        c_.assign(static_cast<std::size_t>(D + 1), PadicScalar::exact_zero(p));
    }

    static IwasawaElement1 from_poly(long p, const IntPoly& f, long D, long N) {
        IwasawaElement1 e(p, D, N);
        require(degree(f) <= D, ErrorKind::TruncationInsufficient, "polynomial degree exceeds the truncation");
        for (std::size_t i = 0; i < f.size(); ++i) e.c_[i] = padic_abs(p, Rational(f[i]), N);
        for (std::size_t i = f.size(); i <= static_cast<std::size_t>(D); ++i) e.c_[i] = PadicScalar::zero_mod(p, N);
        return e;
    }

    static IwasawaElement1 from_rationals(long p, const std::vector<Rational>& f, long D, long N) {
        IwasawaElement1 e(p, D, N);
        for (long i = 0; i <= D; ++i)
            e.c_[i] = i < static_cast<long>(f.size()) ? padic_abs(p, f[i], N) : PadicScalar::zero_mod(p, N);
        require(static_cast<long>(f.size()) <= D + 1 ||
                    std::all_of(f.begin() + D + 1, f.end(), [](const Rational& x) { return x == 0; }),
                ErrorKind::TruncationInsufficient, "series degree exceeds the truncation");
        return e;
    }

    static IwasawaElement1 constant(long p, const Integer& c, long D, long N) {
        return from_poly(p, IntPoly{c}, D, N);
    }

    long prime() const { return p_; }
    long trunc_degree() const { return D_; }
    long precision() const { return N_; }
    const PadicScalar& operator[](long i) const { return c_[i]; }
    const std::vector<PadicScalar>& coefficients() const { return c_; }

    void set(long i, const PadicScalar& v) { c_[i] = v; }

    bool is_zero_within_precision() const {
        for (const auto& c : c_)
            if (!c.is_zero()) return false;
        return true;
    }

    friend IwasawaElement1 operator+(const IwasawaElement1& a, const IwasawaElement1& b) {
        check(a, b);
        IwasawaElement1 r(a.p_, std::min(a.D_, b.D_), std::min(a.N_, b.N_));
        for (long i = 0; i <= r.D_; ++i) r.c_[i] = a.c_[i] + b.c_[i];
        return r;
    }

    IwasawaElement1 operator-() const {
        IwasawaElement1 r = *this;
        for (auto& c : r.c_) c = -c;
        return r;
    }

    friend IwasawaElement1 operator-(const IwasawaElement1& a, const IwasawaElement1& b) { return a + (-b); }

    friend IwasawaElement1 operator*(const IwasawaElement1& a, const IwasawaElement1& b) {
        check(a, b);
        IwasawaElement1 r(a.p_, std::min(a.D_, b.D_), std::min(a.N_, b.N_));
        for (long i = 0; i <= r.D_; ++i) {
            if (a.c_[i].is_exact_zero()) continue;
            for (long j = 0; i + j <= r.D_; ++j) {
                if (b.c_[j].is_exact_zero()) continue;
                r.c_[i + j] += a.c_[i] * b.c_[j];
            }
        }
        return r;
    }

    IwasawaElement1 scaled(const Rational& q) const {
        IwasawaElement1 r = *this;
        PadicScalar s = PadicScalar::from_rational(p_, q, N_ + 64);
        for (auto& c : r.c_) c = c * s;
        return r;
    }

    /// f / p^k.
    IwasawaElement1 shifted_valuation(long k) const {
        IwasawaElement1 r = *this;
        for (auto& c : r.c_) c = c * PadicScalar::from_unit(p_, 1, -k, N_ + 64);
        return r;
    }

    IwasawaElement1 truncated(long D) const {
        IwasawaElement1 r = *this;
        if (D < D_) {
            r.c_.resize(static_cast<std::size_t>(D + 1));
            r.D_ = D;
        }
        return r;
    }

    /// Multiplicative inverse; requires a unit constant term.
    IwasawaElement1 inverse() const {
        require(!c_[0].is_zero() && c_[0].valuation() == 0, ErrorKind::InvalidArgument,
                "inverse needs a unit constant term");
        IwasawaElement1 r(p_, D_, N_);
        PadicScalar inv0 = PadicScalar::from_unit(p_, 1, 0, N_) / c_[0];
        r.c_[0] = inv0;
        for (long n = 1; n <= D_; ++n) {
            PadicScalar s = PadicScalar::exact_zero(p_);
            for (long k = 1; k <= n; ++k) s += c_[k] * r.c_[n - k];
            r.c_[n] = -(s * inv0);
        }
        return r;
    }

    bool agrees_with(const IwasawaElement1& o) const {
        long D = std::min(D_, o.D_);
        for (long i = 0; i <= D; ++i)
            if (!c_[i].agrees_with(o.c_[i])) return false;
        return true;
    }

    std::string to_string(long terms = 12) const {
        std::string s;
        for (long i = 0; i <= D_ && i < terms; ++i) {
            if (c_[i].is_exact_zero() || c_[i].is_zero()) continue;
            if (!s.empty()) s += " + ";
            s += "(" + to_string_rational(c_[i]) + ")";
            if (i > 0) s += "*X^" + std::to_string(i);
        }
        return s.empty() ? "0" : s + " + ...";
    }

   private:
    static std::string to_string_rational(const PadicScalar& x) { return x.to_rational().get_str(); }

    static void check(const IwasawaElement1& a, const IwasawaElement1& b) {
        require(a.p_ == b.p_, ErrorKind::InvalidArgument, "mixing series over different primes");
    }

    long p_ = 3, D_ = 0, N_ = 1;
    std::vector<PadicScalar> c_;
};

struct Slope {
    long count;
    Rational valuation;
    friend bool operator==(const Slope& a, const Slope& b) { return a.count == b.count && a.valuation == b.valuation; }
};

struct InvariantProfile {
    long mu = 0;
    long lambda = 0;
    std::vector<Slope> slopes;  // left to right along the polygon
    bool stabilized = false;

    /// Same invariants, ignoring the stabilization flag.
    bool same_invariants(const InvariantProfile& o) const {
        return mu == o.mu && lambda == o.lambda && slopes == o.slopes;
    }

    std::string slopes_string() const {
        std::string s = "{";
        for (std::size_t i = 0; i < slopes.size(); ++i) {
            if (i) s += ",";
            s += "(" + std::to_string(slopes[i].count) + ":" + slopes[i].valuation.get_str() + ")";
        }
        return s + "}";
    }

    std::string to_string() const {
        return "mu=" + std::to_string(mu) + " lambda=" + std::to_string(lambda) + " " + slopes_string() +
               (stabilized ? "" : " (unstabilized)");
    }
};

/// Lower convex hull slopes through the points (x_i, y_i), x increasing.
inline std::vector<Slope> hull_slopes(const std::vector<std::pair<long, Rational>>& pts) {
    std::vector<std::pair<long, Rational>> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            // drop b if it lies on or above the segment a -> pt
            Rational lhs = (b.second - a.second) * (pt.first - a.first);
            Rational rhs = (pt.second - a.second) * (b.first - a.first);
            if (lhs >= rhs) hull.pop_back();
            else break;
        }
        hull.push_back(pt);
    }
    std::vector<Slope> out;
    for (std::size_t i = 1; i < hull.size(); ++i) {
        long len = hull[i].first - hull[i - 1].first;
        Rational s = (hull[i - 1].second - hull[i].second) / Rational(len);
        s.canonicalize();
        if (!out.empty() && out.back().valuation == s) out.back().count += len;
        else out.push_back({len, s});
    }
    return out;
}

/// Value at x of the lower hull of pts (x within the hull's range).
inline Rational hull_value(const std::vector<std::pair<long, Rational>>& pts, long x) {
    Rational best;
    bool have = false;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i; j < pts.size(); ++j) {
            long x1 = pts[i].first, x2 = pts[j].first;
            if (x1 > x || x2 < x) continue;
            Rational v = x1 == x2 ? pts[i].second
                                  : pts[i].second + (pts[j].second - pts[i].second) * ratio(x - x1, x2 - x1);
            if (!have || v < best) best = v;
            have = true;
        }
    return best;
}

/// mu, lambda and Newton slopes of f. Unknown coefficients (zero within
/// precision) only bound valuations from below; the profile is flagged
/// stabilized when no unknown coefficient can change it.
inline InvariantProfile newton_invariants(const IwasawaElement1& f) {
    const auto& c = f.coefficients();
    long n = static_cast<long>(c.size());
    long mu = LONG_MAX, lambda = -1;
    for (long i = 0; i < n; ++i) {
        if (c[i].is_zero()) continue;
        if (c[i].valuation() < mu) {
            mu = c[i].valuation();
            lambda = i;
        }
    }
    require(lambda >= 0, ErrorKind::PrecisionInsufficient, "series is zero within precision");
    InvariantProfile prof;
    prof.mu = mu;
    prof.lambda = lambda;
    std::vector<std::pair<long, Rational>> pts;
    for (long i = 0; i <= lambda; ++i)
        if (!c[i].is_zero()) pts.push_back({i, Rational(c[i].valuation() - mu)});
    prof.slopes = hull_slopes(pts);
    bool stable = true;
    for (long i = 0; i < n && stable; ++i) {
        if (!c[i].is_zero() || c[i].is_exact_zero()) continue;
        long bound = c[i].valuation();
        if (i < lambda) {
            if (bound <= mu || i < pts.front().first) stable = false;
            else if (Rational(bound - mu) < hull_value(pts, i)) stable = false;
        } else if (bound < mu) {
            stable = false;
        }
    }
    prof.stabilized = stable;
    return prof;
}

struct WeierstrassFactors {
    IwasawaElement1 unit;
    IwasawaElement1 distinguished;  // monic of degree lambda
    long mu;
};

/// f = p^mu * unit * distinguished.
inline WeierstrassFactors weierstrass_prepare(const IwasawaElement1& f) {
    InvariantProfile prof = newton_invariants(f);
    long p = f.prime(), D = f.trunc_degree(), N = f.precision();
    long lam = prof.lambda, mu = prof.mu;
    require(lam < D, ErrorKind::TruncationInsufficient, "lambda is not below the truncation degree");
    require(mu < N, ErrorKind::TruncationInsufficient, "mu is not below the precision");
    IwasawaElement1 g = f.shifted_valuation(mu);
    long Nr = N - mu;  // relative digits available after removing p^mu
    long Dq = D - lam;
    // g = P + X^lam U with P of degree < lam
    IwasawaElement1 U(p, Dq, Nr);
    for (long i = 0; i <= Dq; ++i) U.set(i, g[i + lam]);
    IwasawaElement1 Uinv = U.inverse();
    // Solve X^lam = q g + r: with h_0 = X^lam, t = tau(h) U^{-1} and
    // h' = (h - X^lam tau(h)) - t P, each step gains a factor p from P.
    std::vector<PadicScalar> P(static_cast<std::size_t>(lam));
    for (long i = 0; i < lam; ++i) P[i] = g[i];
    IwasawaElement1 h(p, D, Nr);
    h.set(lam, PadicScalar::from_unit(p, 1, 0, Nr));
    IwasawaElement1 q(p, Dq, Nr);
    for (long it = 0;; ++it) {
        IwasawaElement1 top(p, Dq, Nr);
        for (long i = 0; i <= Dq; ++i) top.set(i, h[i + lam]);
        if (top.is_zero_within_precision() || it > Nr) {
            // The leftover X^lam tau(h) changes the remainder by its reduction
            // mod the distinguished part: degree lam + i gains floor(i/lam)
            // factors of p. Degrees past D are unknown.
            if (lam > 0) {
                std::vector<long> w(static_cast<std::size_t>(Dq + 2), 0);
                for (long i = 0; i <= Dq; ++i) w[i] = std::min(Nr, top[i].valuation());
                auto cap = [&](const PadicScalar& x, long k) {
                    return x.is_exact_zero() ? PadicScalar::zero_mod(p, k) : x.with_absolute_precision(k);
                };
                long rb = Nr;
                for (long i = 0; i <= Dq + 1; ++i) rb = std::min(rb, w[i] + i / lam);
                for (long i = 0; i < lam; ++i) h.set(i, cap(h[i], rb + 1));
                for (long k = 0; k <= Dq; ++k) {
                    long qb = Nr;
                    for (long i = k; i <= Dq + 1; ++i) qb = std::min(qb, w[i] + (i - k) / lam);
                    q.set(k, cap(q[k], qb));
                }
            }
            break;
        }
        IwasawaElement1 t = top * Uinv;
        q = q + t;
        // Coefficients of t past Dq are not determined by the known part of
        // f; after `it` steps they are divisible by p^it.
        std::vector<PadicScalar> tt(t.coefficients());
        for (long i = Dq + 1; i <= D; ++i) tt.push_back(PadicScalar::zero_mod(p, std::min(it, Nr)));
        IwasawaElement1 nh(p, D, Nr);
        for (long i = 0; i < lam; ++i) nh.set(i, h[i]);
        for (long i = 0; i <= D; ++i) {
            if (tt[i].is_exact_zero()) continue;
            for (long j = 0; j < lam && i + j <= D; ++j) nh.set(i + j, nh[i + j] - tt[i] * P[j]);
        }
        h = std::move(nh);
    }
    IwasawaElement1 dist(p, lam, Nr);
    for (long i = 0; i < lam; ++i) dist.set(i, -h[i]);
    dist.set(lam, PadicScalar::from_unit(p, 1, 0, Nr));
    IwasawaElement1 unit = q.inverse();
    return {unit, dist, mu};
}

/// prod over k <= n with k = parity (mod 2) of Phi_{p^k}(1+X), k >= 1.
inline IntPoly half_log_product_poly(long p, int parity, long n) {
    require(n >= 1, ErrorKind::InvalidArgument, "half_log_product needs n >= 1");
    IntPoly f{Integer(1)};
    for (long k = 1; k <= n; ++k)
        if (k % 2 == parity % 2) f = poly_mul(f, cyclotomic_poly(p, static_cast<int>(k)));
    return f;
}

inline IwasawaElement1 half_log_product(long p, int parity, long n, long D, long N) {
    return IwasawaElement1::from_poly(p, half_log_product_poly(p, parity, n), D, N);
}

/// (1/p) prod_{k <= n_max, k even (+) or odd (-)} Phi_{p^k}(1+X)/p.
inline IwasawaElement1 pollack_log_truncated(long p, int sign, long n_max, long D, long N) {
    require(sign == 1 || sign == -1, ErrorKind::InvalidArgument, "sign must be +1 or -1");
    require(n_max >= 1, ErrorKind::InvalidArgument, "n_max must be positive");
    int parity = sign == 1 ? 0 : 1;
    IntPoly f = half_log_product_poly(p, parity, n_max);
    require(degree(f) <= D, ErrorKind::TruncationInsufficient, "log product exceeds the truncation degree");
    long factors = 0;
    for (long k = 1; k <= n_max; ++k)
        if (k % 2 == parity) ++factors;
    Rational scale(1, ipow_big(p, factors + 1));
    std::vector<Rational> r;
    for (const auto& x : f) r.push_back(Rational(x) * scale);
    return IwasawaElement1::from_rationals(p, r, D, N);
}

/// Element of Z_p[[S,T]]: coefficient (i, j) of S^i T^j, each index truncated at D.
class IwasawaElement2 {
   public:
    IwasawaElement2(long p, long D, long N) : p_(p), D_(D), N_(N) {
        c_.assign(static_cast<std::size_t>((D + 1) * (D + 1)), PadicScalar::exact_zero(p));
    }

    /// From integer coefficients {(i, j, c)}; all other coefficients are zero to precision N.
    static IwasawaElement2 from_terms(long p, const std::vector<std::tuple<long, long, Integer>>& terms, long D, long N) {
        IwasawaElement2 e(p, D, N);
        for (auto& x : e.c_) x = PadicScalar::zero_mod(p, N);
        for (const auto& [i, j, c] : terms) {
            require(i <= D && j <= D, ErrorKind::TruncationInsufficient, "term beyond truncation");
            e.c_[e.idx(i, j)] = e.c_[e.idx(i, j)] + padic_abs(p, Rational(c), N);
        }
        return e;
    }

    long prime() const { return p_; }
    long trunc_degree() const { return D_; }
    long precision() const { return N_; }
    const PadicScalar& at(long i, long j) const { return c_[idx(i, j)]; }
    void set(long i, long j, const PadicScalar& v) { c_[idx(i, j)] = v; }

    friend IwasawaElement2 operator+(const IwasawaElement2& a, const IwasawaElement2& b) {
        IwasawaElement2 r(a.p_, std::min(a.D_, b.D_), std::min(a.N_, b.N_));
        for (long i = 0; i <= r.D_; ++i)
            for (long j = 0; j <= r.D_; ++j) r.set(i, j, a.at(i, j) + b.at(i, j));
        return r;
    }

    IwasawaElement2 operator-() const {
        IwasawaElement2 r = *this;
        for (auto& c : r.c_) c = -c;
        return r;
    }

    friend IwasawaElement2 operator-(const IwasawaElement2& a, const IwasawaElement2& b) { return a + (-b); }

    friend IwasawaElement2 operator*(const IwasawaElement2& a, const IwasawaElement2& b) {
        IwasawaElement2 r(a.p_, std::min(a.D_, b.D_), std::min(a.N_, b.N_));
        long D = r.D_;
        for (long i1 = 0; i1 <= D; ++i1)
            for (long j1 = 0; j1 <= D; ++j1) {
                const auto& x = a.at(i1, j1);
                if (x.is_exact_zero()) continue;
                for (long i2 = 0; i1 + i2 <= D; ++i2)
                    for (long j2 = 0; j1 + j2 <= D; ++j2) {
                        const auto& y = b.at(i2, j2);
                        if (y.is_exact_zero()) continue;
                        r.c_[r.idx(i1 + i2, j1 + j2)] += x * y;
                    }
            }
        return r;
    }

    /// Coefficient of T^j as a series in S.
    IwasawaElement1 t_coefficient(long j) const {
        IwasawaElement1 r(p_, D_, N_);
        for (long i = 0; i <= D_; ++i) r.set(i, at(i, j));
        return r;
    }

    /// Largest j whose T^j coefficient is not zero within precision (-1 if none).
    long t_degree() const {
        for (long j = D_; j >= 0; --j)
            if (!t_coefficient(j).is_zero_within_precision()) return j;
        return -1;
    }

    bool agrees_with(const IwasawaElement2& o) const {
        long D = std::min(D_, o.D_);
        for (long i = 0; i <= D; ++i)
            for (long j = 0; j <= D; ++j)
                if (!at(i, j).agrees_with(o.at(i, j))) return false;
        return true;
    }

   private:
    std::size_t idx(long i, long j) const { return static_cast<std::size_t>(i * (D_ + 1) + j); }

    long p_, D_, N_;
    std::vector<PadicScalar> c_;
};

/// S -> X, T -> X.
inline IwasawaElement1 pi_cyc(const IwasawaElement2& f) {
    long D = f.trunc_degree();
    IwasawaElement1 r(f.prime(), D, f.precision());
    for (long i = 0; i <= D; ++i)
        for (long j = 0; i + j <= D; ++j) r.set(i + j, r[i + j] + f.at(i, j));
    return r;
}

/// Sylvester resultant of f and g viewed as polynomials in T over Z_p[[S]],
/// computed with a division-free determinant. One leading T-coefficient
/// must be a unit.
inline IwasawaElement1 resultant_in_T(const IwasawaElement2& f, const IwasawaElement2& g) {
    long p = f.prime(), D = std::min(f.trunc_degree(), g.trunc_degree());
    long N = std::min(f.precision(), g.precision());
    long m = f.t_degree(), n = g.t_degree();
    require(m >= 0 && n >= 0, ErrorKind::PrecisionInsufficient, "a resultant argument is zero within precision");
    auto unit_lead = [](const IwasawaElement2& h, long d) {
        PadicScalar lead = h.t_coefficient(d)[0];
        return !lead.is_zero() && lead.valuation() == 0;
    };
    require(unit_lead(f, m) || unit_lead(g, n), ErrorKind::PrecisionLoss,
            "neither leading T-coefficient is a unit");
    IwasawaElement1 zero(p, D, N);
    for (long i = 0; i <= D; ++i) zero.set(i, PadicScalar::zero_mod(p, N));
    IwasawaElement1 one = zero;
    one.set(0, PadicScalar::from_unit(p, 1, 0, N));
    if (m == 0 && n == 0) return one;
    long size = m + n;
    std::vector<std::vector<IwasawaElement1>> syl(static_cast<std::size_t>(size),
                                                  std::vector<IwasawaElement1>(static_cast<std::size_t>(size), zero));
    for (long r = 0; r < n; ++r)
        for (long j = 0; j <= m; ++j) syl[r][r + j] = f.t_coefficient(m - j).truncated(D);
    for (long r = 0; r < m; ++r)
        for (long j = 0; j <= n; ++j) syl[n + r][r + j] = g.t_coefficient(n - j).truncated(D);
    return berkowitz_det(syl, zero, one);
}

/// Image of f in Z_p[X]/Phi_{p^k}(1+X), i.e. f evaluated at X = zeta_{p^k} - 1.
inline EisensteinElement reduce_mod_cyclotomic(const IwasawaElement1& f, int k) {
    long p = f.prime();
    IntPoly m = cyclotomic_poly(p, k);
    long e = degree(m);
    std::vector<PadicScalar> r(f.coefficients());
    for (long j = static_cast<long>(r.size()) - 1; j >= e; --j) {
        if (r[j].is_exact_zero()) continue;
        PadicScalar c = r[j];
        r[j] = PadicScalar::exact_zero(p);
        for (long i = 0; i < e; ++i)
            if (m[i] != 0) r[j - e + i] -= c.scaled_by(m[i]);
    }
    r.resize(static_cast<std::size_t>(e), PadicScalar::exact_zero(p));
    return EisensteinElement(p, k, std::move(r));
}

}  // namespace iwb
