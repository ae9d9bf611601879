#pragma once

// Exact arithmetic in Z[zeta_L][1/d], Dirichlet characters of odd prime-power
// modulus, Gauss sums, and the embedding of Z[zeta_{p^k}] into the Eisenstein
// quotient Z_p[X]/Phi_{p^k}(1+X).

#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "iwb/arith.hpp"
#include "iwb/padic.hpp"
#include "iwb/poly.hpp"

namespace iwb {

/// Phi_L(Y) via the Moebius product over divisors of L.
inline IntPoly cyclotomic_poly_in_y(long L) {
    require(L >= 1, ErrorKind::InvalidArgument, "cyclotomic order must be positive");
    auto fac = factor(L);
    // Squarefree divisors d' of rad(L); the factor for d = L/d' is (Y^d - 1)^{mu(d')}.
    std::vector<std::pair<long, int>> terms;  // (d, mu)
    std::size_t r = fac.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << r); ++mask) {
        long dp = 1;
        int mu = 1;
        for (std::size_t i = 0; i < r; ++i)
            if (mask >> i & 1) {
                dp *= fac[i].first;
                mu = -mu;
            }
        terms.emplace_back(L / dp, mu);
    }
    IntPoly f{Integer(1)};
    for (auto [d, mu] : terms) {
        if (mu != 1) continue;
        IntPoly g(static_cast<std::size_t>(d + 1));
        g[0] = -1;
        g[d] = 1;
        f = poly_mul(f, g);
    }
    for (auto [d, mu] : terms)
        if (mu == -1) f = poly_div_xd_minus_one(f, d);
    return f;
}

/// Phi_{p^k}(1+X): Eisenstein at p of degree phi(p^k).
inline IntPoly cyclotomic_poly(long p, int k) {
    require(is_prime(p), ErrorKind::InvalidArgument, "cyclotomic_poly needs a prime");
    require(k >= 1, ErrorKind::InvalidArgument, "cyclotomic_poly needs k >= 1");
    long q = ipow(p, k - 1);
    IntPoly f(static_cast<std::size_t>((p - 1) * q + 1));
    for (long i = 0; i < p; ++i) f[i * q] = 1;
    return taylor_shift_one(f);
}

namespace detail {

struct CycloModulus {
    long order;
    long degree;
    std::vector<std::pair<long, Integer>> low;  // Phi = Y^degree + sum low
};

inline std::shared_ptr<const CycloModulus> make_modulus(long L) {
    auto m = std::make_shared<CycloModulus>();
    m->order = L;
    IntPoly f = cyclotomic_poly_in_y(L);
    m->degree = degree(f);
    for (long i = 0; i < m->degree; ++i)
        if (f[i] != 0) m->low.emplace_back(i, f[i]);
    return m;
}

}  // namespace detail

/// Element of Q(zeta_L) with integral power-basis numerator over a positive
/// denominator. Orders L = 2 mod 4 are folded onto L/2.
class CyclotomicInt {
   public:
    CyclotomicInt() : CyclotomicInt(1) {}

    explicit CyclotomicInt(long order) {
        require(order >= 1, ErrorKind::InvalidArgument, "cyclotomic order must be positive");
        if (order % 4 == 2) order /= 2;
        mod_ = detail::make_modulus(order);
        c_.assign(static_cast<std::size_t>(mod_->degree), Integer(0));
    }

    static CyclotomicInt from_integer(long order, const Integer& n) {
        CyclotomicInt x(order);
        x.c_[0] = n;
        return x;
    }

    static CyclotomicInt from_rational(long order, const Rational& q) {
        CyclotomicInt x(order);
        x.c_[0] = q.get_num();
        x.den_ = q.get_den();
        return x;
    }

    /// zeta_order^j.
    static CyclotomicInt zeta_power(long order, long j) {
        CyclotomicInt x(order);
        long L = x.order();
        long e = floor_mod(j, order);
        Integer s = 1;
        if (L != order) {
            // zeta_{2m} = -zeta_m^{(m+1)/2}
            if (e % 2) s = -1;
            e = mul_mod(e, (L + 1) / 2, L);
        }
        std::vector<Integer> raw(static_cast<std::size_t>(L));
        raw[e] = s;
        x.c_ = x.reduce(std::move(raw));
        return x;
    }

    /// Sum of coeffs[i] * zeta^i over a denominator; any length is accepted.
    static CyclotomicInt from_coefficients(long order, std::vector<Integer> coeffs, const Integer& den = 1) {
        require(den > 0, ErrorKind::InvalidArgument, "denominator must be positive");
        CyclotomicInt x(order);
        if (x.order() != order) {
            std::vector<Integer> raw(static_cast<std::size_t>(x.order()));
            for (std::size_t i = 0; i < coeffs.size(); ++i) {
                if (coeffs[i] == 0) continue;
                long e = floor_mod(static_cast<long>(i), order);
                long t = mul_mod(e, (x.order() + 1) / 2, x.order());
                if (e % 2) raw[t] -= coeffs[i];
                else raw[t] += coeffs[i];
            }
            coeffs = std::move(raw);
        } else if (static_cast<long>(coeffs.size()) > order) {
            std::vector<Integer> raw(static_cast<std::size_t>(order));
            for (std::size_t i = 0; i < coeffs.size(); ++i) raw[i % order] += coeffs[i];
            coeffs = std::move(raw);
        }
        x.c_ = x.reduce(std::move(coeffs));
        x.den_ = den;
        x.normalize();
        return x;
    }

    long order() const { return mod_->order; }
    long degree() const { return mod_->degree; }
    const std::vector<Integer>& numerator() const { return c_; }
    const Integer& denominator() const { return den_; }

    bool is_zero() const {
        for (const auto& v : c_)
            if (v != 0) return false;
        return true;
    }

    std::optional<Rational> as_rational() const {
        for (std::size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) return std::nullopt;
        Rational q(c_[0], den_);
        q.canonicalize();
        return q;
    }

    friend bool operator==(const CyclotomicInt& a, const CyclotomicInt& b) {
        return a.order() == b.order() && a.den_ == b.den_ && a.c_ == b.c_;
    }

    friend CyclotomicInt operator+(const CyclotomicInt& a, const CyclotomicInt& b) {
        check_order(a, b);
        CyclotomicInt r = a;
        Integer g = gcd_z(a.den_, b.den_);
        Integer fa = b.den_ / g, fb = a.den_ / g;
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] * fa + b.c_[i] * fb;
        r.den_ = a.den_ * fa;
        r.normalize();
        return r;
    }

    CyclotomicInt operator-() const {
        CyclotomicInt r = *this;
        for (auto& v : r.c_) v = -v;
        return r;
    }

    friend CyclotomicInt operator-(const CyclotomicInt& a, const CyclotomicInt& b) { return a + (-b); }

    friend CyclotomicInt operator*(const CyclotomicInt& a, const CyclotomicInt& b) {
        check_order(a, b);
        std::vector<Integer> raw(static_cast<std::size_t>(2 * a.degree() - 1));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                mpz_addmul(raw[i + j].get_mpz_t(), a.c_[i].get_mpz_t(), b.c_[j].get_mpz_t());
        }
        CyclotomicInt r = a;
        r.c_ = a.reduce(std::move(raw));
        r.den_ = a.den_ * b.den_;
        r.normalize();
        return r;
    }

    friend CyclotomicInt operator*(const CyclotomicInt& a, const Rational& q) {
        CyclotomicInt r = a;
        for (auto& v : r.c_) v *= q.get_num();
        r.den_ *= q.get_den();
        r.normalize();
        return r;
    }

    CyclotomicInt& operator+=(const CyclotomicInt& o) { return *this = *this + o; }
    CyclotomicInt& operator*=(const CyclotomicInt& o) { return *this = *this * o; }

    /// The automorphism zeta -> zeta^t, gcd(t, L) = 1.
    CyclotomicInt galois(long t) const {
        long L = order();
        require(gcd(floor_mod(t, L), L) == 1 || L == 1, ErrorKind::InvalidArgument, "galois exponent not a unit");
        std::vector<Integer> raw(static_cast<std::size_t>(L));
        for (std::size_t i = 0; i < c_.size(); ++i) raw[mul_mod(static_cast<long>(i), floor_mod(t, L), L)] += c_[i];
        CyclotomicInt r = *this;
        r.c_ = reduce(std::move(raw));
        return r;
    }

    CyclotomicInt conj() const { return galois(-1); }

    /// Image under Q(zeta_L) -> Q(zeta_M), zeta_L -> zeta_M^{M/L}; L must divide M.
    CyclotomicInt embed(long M) const {
        CyclotomicInt target(M);
        long Mi = target.order();
        require(Mi % order() == 0, ErrorKind::InvalidArgument, "embedding into a field not containing zeta_L");
        long step = Mi / order();
        std::vector<Integer> raw(static_cast<std::size_t>(Mi));
        for (std::size_t i = 0; i < c_.size(); ++i) raw[static_cast<long>(i) * step] += c_[i];
        target.c_ = target.reduce(std::move(raw));
        target.den_ = den_;
        return target;
    }

    /// Product of all Galois conjugates; rational.
    Rational norm() const {
        CyclotomicInt prod = CyclotomicInt::from_integer(order(), 1);
        long L = order();
        for (long t = 1; t < L || (L == 1 && t == 1); ++t)
            if (gcd(t, L) == 1) prod *= galois(t);
        auto q = prod.as_rational();
        require(q.has_value(), ErrorKind::Internal, "norm is not rational");
        return *q;
    }

    /// Multiplicative inverse via the conjugate product; quadratic in the degree per conjugate.
    CyclotomicInt inverse() const {
        require(!is_zero(), ErrorKind::InvalidArgument, "inverse of zero");
        long L = order();
        CyclotomicInt others = CyclotomicInt::from_integer(L, 1);
        for (long t = 2; t < L; ++t)
            if (gcd(t, L) == 1) others *= galois(t);
        auto n = (others * *this).as_rational();
        require(n.has_value() && *n != 0, ErrorKind::Internal, "norm is not rational");
        Rational inv = 1 / *n;
        return others * inv;
    }

    friend CyclotomicInt operator/(const CyclotomicInt& a, const CyclotomicInt& b) { return a * b.inverse(); }

    std::string to_string() const {
        IntPoly f(c_.begin(), c_.end());
        trim(f);
        std::string s = poly_to_string(f, "z");
        if (den_ != 1) s = "(" + s + ")/" + den_.get_str();
        return s;
    }

   private:
    static Integer gcd_z(const Integer& a, const Integer& b) {
        Integer g;
        mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        return g;
    }

    static void check_order(const CyclotomicInt& a, const CyclotomicInt& b) {
        require(a.order() == b.order(), ErrorKind::InvalidArgument, "mixing cyclotomic fields of different order");
    }

    std::vector<Integer> reduce(std::vector<Integer> raw) const {
        long d = mod_->degree;
        for (long j = static_cast<long>(raw.size()) - 1; j >= d; --j) {
            if (raw[j] == 0) continue;
            Integer c = raw[j];
            for (const auto& [i, a] : mod_->low) mpz_submul(raw[j - d + i].get_mpz_t(), c.get_mpz_t(), a.get_mpz_t());
        }
        raw.resize(static_cast<std::size_t>(d));
        return raw;
    }

    void normalize() {
        if (den_ == 1) return;
        Integer g = den_;
        for (const auto& v : c_) {
            if (g == 1) break;
            if (v != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        }
        if (is_zero()) g = den_;
        if (g == 1) return;
        for (auto& v : c_) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
        den_ /= g;
    }

    std::shared_ptr<const detail::CycloModulus> mod_;
    std::vector<Integer> c_;
    Integer den_ = 1;
};

/// Dirichlet character modulo p^k (p odd) with psi(g) = zeta_phi^t for the
/// smallest primitive root g.
class DirichletCharacter {
   public:
    DirichletCharacter(long p, int k, long t) : p_(p), k_(k) {
        require(p > 2 && is_prime(p), ErrorKind::InvalidArgument, "odd prime expected");
        require(k >= 1, ErrorKind::InvalidArgument, "modulus exponent must be positive");
        q_ = ipow(p, k);
        phi_ = q_ / p * (p - 1);
        t_ = floor_mod(t, phi_);
        auto table = std::make_shared<std::vector<long>>(static_cast<std::size_t>(q_), -1L);
        long g = primitive_root_prime_power(p, k), x = 1;
        for (long i = 0; i < phi_; ++i) {
            (*table)[x] = i;
            x = mul_mod(x, g, q_);
        }
        ind_ = std::move(table);
    }

    static std::vector<DirichletCharacter> all(long p, int k) {
        DirichletCharacter base(p, k, 0);
        std::vector<DirichletCharacter> out;
        for (long t = 0; t < base.phi_; ++t) out.push_back(base.with_exponent(t));
        return out;
    }

    /// Character of Gamma_Cyc of conductor p^{m+1} with value zeta_{p^m}^{s * ind_g(1+p)/(p-1)} at 1+p.
    static DirichletCharacter cyclotomic(long p, int m, long s) {
        return DirichletCharacter(p, m + 1, (p - 1) * s);
    }

    long prime() const { return p_; }
    long modulus() const { return q_; }
    long exponent_t() const { return t_; }
    long order() const { return phi_ / std::gcd(t_, phi_); }
    bool is_even() const { return t_ % 2 == 0; }

    long conductor() const {
        if (t_ == 0) return 1;
        long v = 0, t = t_;
        while (t % p_ == 0) {
            t /= p_;
            ++v;
        }
        return ipow(p_, static_cast<int>(std::max<long>(1, k_ - v)));
    }

    bool is_primitive() const { return conductor() == q_; }

    /// e with psi(a) = zeta_order^e, or -1 when gcd(a, p) > 1.
    long exponent(long a) const {
        long i = (*ind_)[floor_mod(a, q_)];
        if (i < 0) return -1;
        long ord = order();
        return mul_mod(i, t_ / (phi_ / ord), ord);
    }

    CyclotomicInt value(long a) const {
        long e = exponent(a);
        if (e < 0) return CyclotomicInt(order());
        return CyclotomicInt::zeta_power(order(), e);
    }

    DirichletCharacter conj() const { return with_exponent(-t_); }

    friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
        return a.q_ == b.q_ && a.t_ == b.t_;
    }

   private:
    DirichletCharacter with_exponent(long t) const {
        DirichletCharacter c = *this;
        c.t_ = floor_mod(t, phi_);
        return c;
    }

    long p_, q_, phi_, t_;
    int k_;
    std::shared_ptr<const std::vector<long>> ind_;
};

/// tau(psi) = sum_a psi(a) zeta_q^a in Q(zeta_{lcm(ord, q)}).
inline CyclotomicInt gauss_sum(const DirichletCharacter& psi) {
    require(psi.is_primitive(), ErrorKind::InvalidArgument, "gauss_sum needs a primitive character");
    long q = psi.modulus(), ord = psi.order();
    long L = std::lcm(q, ord);
    std::vector<Integer> counts(static_cast<std::size_t>(L));
    for (long a = 1; a < q; ++a) {
        long e = psi.exponent(a);
        if (e < 0) continue;
        counts[floor_mod(e * (L / ord) + a * (L / q), L)] += 1;
    }
    return CyclotomicInt::from_coefficients(L, std::move(counts));
}

/// j(a) with <a> = (1+p)^{j(a)} modulo p^n, for every residue a mod p^n
/// (-1 for non-units); values lie in [0, p^{n-1}).
inline std::vector<long> gamma_log_table(long p, int n) {
    require(p > 2 && is_prime(p) && n >= 1, ErrorKind::InvalidArgument, "bad gamma_log_table arguments");
    long q = ipow(p, n), pm = q / p;
    std::vector<long> dlog(static_cast<std::size_t>(q), -1);
    long x = 1;
    for (long i = 0; i < pm; ++i) {
        dlog[x] = i;
        x = mul_mod(x, 1 + p, q);
    }
    long inv = pm == 1 ? 0 : inverse_mod(p - 1, pm);
    std::vector<long> out(static_cast<std::size_t>(q), -1);
    for (long a = 1; a < q; ++a) {
        if (a % p == 0) continue;
        long d = dlog[pow_mod(a, static_cast<unsigned long>(p - 1), q)];
        require(d >= 0, ErrorKind::Internal, "a^(p-1) outside 1 + pZ");
        out[a] = pm == 1 ? 0 : mul_mod(d, inv, pm);
    }
    return out;
}

/// Element of Z_p[X]/Phi_{p^k}(1+X) (k = 0 means Z_p), coefficients in the X basis.
class EisensteinElement {
   public:
    EisensteinElement(long p, int k, std::vector<PadicScalar> coeffs) : p_(p), k_(k), c_(std::move(coeffs)) {
        modulus_ = std::make_shared<IntPoly>(k == 0 ? IntPoly{Integer(0), Integer(1)} : cyclotomic_poly(p, k));
        require(static_cast<long>(c_.size()) == ram_degree(), ErrorKind::InvalidArgument,
                "coefficient count differs from the degree");
    }

    long prime() const { return p_; }
    int level() const { return k_; }
    long ram_degree() const { return degree(*modulus_); }
    const std::vector<PadicScalar>& coefficients() const { return c_; }

    bool is_zero() const {
        for (const auto& c : c_)
            if (!c.is_zero()) return false;
        return true;
    }

    /// Valuation normalized so v(p) = 1, or nullopt if not determined by the known digits.
    std::optional<Rational> valuation() const {
        long e = ram_degree();
        std::optional<Rational> best;
        Rational bound;
        bool have_bound = false;
        for (long i = 0; i < e; ++i) {
            Rational v = Rational(c_[i].is_exact_zero() ? 0 : c_[i].valuation()) + ratio(i, e);
            if (c_[i].is_exact_zero()) continue;
            if (c_[i].is_zero()) {
                if (!have_bound || v < bound) bound = v;
                have_bound = true;
            } else if (!best || v < *best) {
                best = v;
            }
        }
        if (!best) return std::nullopt;
        if (have_bound && bound <= *best) return std::nullopt;
        best->canonicalize();
        return best;
    }

    friend EisensteinElement operator+(const EisensteinElement& a, const EisensteinElement& b) {
        check(a, b);
        EisensteinElement r = a;
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] + b.c_[i];
        return r;
    }

    friend EisensteinElement operator*(const EisensteinElement& a, const EisensteinElement& b) {
        check(a, b);
        long e = a.ram_degree();
        std::vector<PadicScalar> raw(static_cast<std::size_t>(2 * e - 1), PadicScalar::exact_zero(a.p_));
        for (long i = 0; i < e; ++i)
            for (long j = 0; j < e; ++j) raw[i + j] += a.c_[i] * b.c_[j];
        const IntPoly& m = *a.modulus_;
        for (long j = 2 * e - 2; j >= e; --j) {
            if (raw[j].is_exact_zero()) continue;
            PadicScalar c = raw[j];
            raw[j] = PadicScalar::exact_zero(a.p_);
            for (long i = 0; i < e; ++i)
                if (m[i] != 0) raw[j - e + i] -= c.scaled_by(m[i]);
        }
        raw.resize(static_cast<std::size_t>(e));
        EisensteinElement r = a;
        r.c_ = std::move(raw);
        return r;
    }

    bool agrees_with(const EisensteinElement& o) const {
        check(*this, o);
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (!c_[i].agrees_with(o.c_[i])) return false;
        return true;
    }

   private:
    static void check(const EisensteinElement& a, const EisensteinElement& b) {
        require(a.p_ == b.p_ && a.k_ == b.k_, ErrorKind::InvalidArgument, "mixing different Eisenstein quotients");
    }

    long p_;
    int k_;
    std::vector<PadicScalar> c_;
    std::shared_ptr<const IntPoly> modulus_;
};

/// zeta_{p^k} -> 1+X. The numerator is known mod p^N; a p-part p^a of the
/// denominator costs a digits of absolute precision.
inline EisensteinElement embed_padic(const CyclotomicInt& x, long p, int k, long N) {
    require(N >= 1, ErrorKind::InvalidArgument, "precision must be positive");
    long L = ipow(p, k);
    require(x.order() == 1 || x.order() == L || (k == 0 && x.order() == 1), ErrorKind::InvalidArgument,
            "element does not live in Q(zeta_{p^k})");
    CyclotomicInt y = x.order() == L ? x : x.embed(L);
    Integer den = y.denominator();
    long a = remove_factor(den, p);
    require(a < N, ErrorKind::PrecisionLoss, "denominator divisible by p beyond the working precision");
    Integer mod = ipow_big(p, N);
    Integer den_inv = inverse_mod(den, mod);
    const auto& b = y.numerator();
    long e = static_cast<long>(b.size());
    // sum_i b_i (1+X)^i
    IntPoly f(b.begin(), b.end());
    f = taylor_shift_one(f);
    f.resize(static_cast<std::size_t>(e));
    std::vector<PadicScalar> out;
    out.reserve(static_cast<std::size_t>(e));
    for (long j = 0; j < e; ++j) {
        PadicScalar s = PadicScalar::from_residue(p, mod_nonneg(f[j] * den_inv, mod), N);
        if (a > 0) {
            if (s.is_zero()) s = PadicScalar::zero_mod(p, N - a);
            else s = PadicScalar::from_unit(p, s.unit(), s.valuation() - a, s.relative_precision());
        }
        out.push_back(s);
    }
    return EisensteinElement(p, k, std::move(out));
}

inline EisensteinElement embed_padic(const CyclotomicInt& x, long N) {
    long L = x.order();
    auto fac = factor(L);
    require(L > 1 && fac.size() == 1, ErrorKind::InvalidArgument, "embed_padic needs a prime-power order");
    return embed_padic(x, fac[0].first, fac[0].second, N);
}

}  // namespace iwb
