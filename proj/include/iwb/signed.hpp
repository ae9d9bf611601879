#pragma once

// Mazur-Tate elements and the signed series theta^+- of a supersingular
// curve (a_p = 0) or of its quadratic twist, rebuilt by Chinese remaindering
// from their values at characters of Gamma_Cyc of conductor p^{m+1}:
//
//   theta^+(zeta - 1) = (-1)^{(m+1)/2} S_m(zeta) / prod_{even k < m} Phi_{p^k}(zeta),  m odd
//   theta^-(zeta - 1) = (-1)^{(m+2)/2} S_m(zeta) / prod_{odd  k < m} Phi_{p^k}(zeta),  m even
//
// where zeta = psi(1+p) has order p^m and S_m(zeta) = sum_a zeta^{j(a)} [a/p^{m+1}]^+.

#include <algorithm>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "iwb/arith.hpp"
#include "iwb/curve.hpp"
#include "iwb/cyclotomic.hpp"
#include "iwb/iwasawa.hpp"
#include "iwb/modsym.hpp"

namespace iwb {

/// Plus-symbol values of E (D = 1) or of E twisted by the quadratic character of conductor |D|.
class SymbolSource {
   public:
    SymbolSource(const CurveData& curve, std::shared_ptr<const EigenSymbol> plus,
                 std::shared_ptr<const EigenSymbol> minus, long D = 1)
        : curve_(curve), plus_(std::move(plus)), minus_(std::move(minus)), D_(D) {
        require(plus_ && minus_, ErrorKind::InvalidArgument, "both signed symbols are required");
        require(D == 1 || is_fundamental_discriminant(D), ErrorKind::InvalidArgument,
                "twist discriminant must be fundamental");
    }

    const CurveData& curve() const { return curve_; }
    long discriminant() const { return D_; }
    std::string label() const { return D_ == 1 ? curve_.label() : curve_.label() + "(" + std::to_string(D_) + ")"; }

    Integer value(long a, long m) const {
        if (D_ == 1) return plus_->eval_path(a, m);
        return twist_symbol_value(*plus_, *minus_, D_, 1, a, m);
    }

   private:
    CurveData curve_;
    std::shared_ptr<const EigenSymbol> plus_, minus_;
    long D_;
};

/// Runs f(i) for i in [0, n) on `workers` threads; each index is written by one thread.
template <class F>
void parallel_for(long n, int workers, F&& f) {
    workers = std::max(1, std::min<int>(workers, static_cast<int>(std::max<long>(1, n))));
    if (workers == 1) {
        for (long i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (long i = w; i < n; i += workers) f(i);
        });
    for (auto& t : pool) t.join();
}

/// Raw values [a/p^k] for k = 1..n_top, unitized by the gcd of the top table
/// (lower conductors lie in the span of the top one when a_p = 0).
class SymbolTables {
   public:
    SymbolTables(const SymbolSource& src, long p, long n_top, int workers = 1) : p_(p), label_(src.label()) {
        const CurveData& E = src.curve();
        require(is_prime(p) && p > 2, ErrorKind::InvalidArgument, "odd prime expected");
        require(E.has_good_reduction(p), ErrorKind::BadReduction, "p divides the conductor of " + E.label());
        require(E.ap(p) == 0, ErrorKind::UnsupportedHypothesis, "a_p(" + E.label() + ") is not zero");
        require(src.discriminant() % p != 0, ErrorKind::InvalidArgument, "p divides the twist discriminant");
        tables_.resize(static_cast<std::size_t>(n_top + 1));
        for (long k = 1; k <= n_top; ++k) {
            long q = ipow(p, static_cast<int>(k));
            auto& t = tables_[k];
            t.assign(static_cast<std::size_t>(q), Integer(0));
            parallel_for(q, workers, [&](long a) {
                if (a % p) t[a] = src.value(a, q);
            });
        }
        Integer g = 0;
        for (const auto& v : tables_[n_top]) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        content_ = g;
        if (g > 1)
            for (auto& t : tables_)
                for (auto& v : t) {
                    require(mpz_divisible_p(v.get_mpz_t(), g.get_mpz_t()) != 0, ErrorKind::Internal,
                            "lower conductor value not divisible by the content");
                    mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
                }
    }

    long prime() const { return p_; }
    long top() const { return static_cast<long>(tables_.size()) - 1; }
    const std::string& label() const { return label_; }
    /// Factor removed from the raw values (0 when all top values vanish).
    const Integer& content() const { return content_; }
    const Integer& value(long a, long k) const { return tables_[k][floor_mod(a, ipow(p_, static_cast<int>(k)))]; }

   private:
    long p_;
    std::string label_;
    std::vector<std::vector<Integer>> tables_;
    Integer content_;
};

/// theta_n = sum_{a in (Z/p^{n+1})^x} [a/p^{n+1}] sigma_a projected to Gamma_n;
/// coefficient j collects all a with log_{1+p} <a> = j mod p^n.
class MazurTateElement {
   public:
    MazurTateElement(long p, long n, std::vector<Integer> coeffs, std::string provenance)
        : p_(p), n_(n), c_(std::move(coeffs)), provenance_(std::move(provenance)) {}

    long prime() const { return p_; }
    long level() const { return n_; }
    const std::vector<Integer>& coefficients() const { return c_; }
    const std::string& provenance() const { return provenance_; }

    /// sum_j c_j zeta^j in Q(zeta_{p^n}), zeta = psi(1+p) of order dividing p^n.
    CyclotomicInt evaluate_at_root(long order, long s) const {
        long q = ipow(p_, static_cast<int>(n_));
        require(q % order == 0, ErrorKind::InvalidArgument, "root order does not divide p^n");
        std::vector<Integer> raw(static_cast<std::size_t>(order));
        for (long j = 0; j < q; ++j) raw[mul_mod(j, floor_mod(s, order), order)] += c_[j];
        return CyclotomicInt::from_coefficients(order, std::move(raw));
    }

    /// psi(theta_n) for a character of Gamma_Cyc given as a Dirichlet character mod p^{n+1}
    /// trivial on the (p-1)-torsion.
    CyclotomicInt evaluate(const DirichletCharacter& psi, const std::vector<long>& jtab) const {
        long q = ipow(p_, static_cast<int>(n_ + 1));
        require(psi.modulus() == q, ErrorKind::InvalidArgument, "character modulus differs from p^{n+1}");
        require(psi.exponent_t() % (p_ - 1) == 0, ErrorKind::InvalidArgument, "character is not of Gamma_Cyc type");
        // psi(a) depends only on j(a); take the value at the a of minimal j.
        long order = psi.order();
        std::vector<long> rep(static_cast<std::size_t>(q / p_), -1);
        for (long a = 1; a < q; ++a)
            if (a % p_ && rep[jtab[a]] < 0) rep[jtab[a]] = a;
        std::vector<Integer> raw(static_cast<std::size_t>(order));
        for (long j = 0; j < q / p_; ++j) raw[psi.exponent(rep[j])] += c_[j];
        return CyclotomicInt::from_coefficients(order, std::move(raw));
    }

   private:
    long p_, n_;
    std::vector<Integer> c_;
    std::string provenance_;
};

inline MazurTateElement mazur_tate(const SymbolTables& tab, long n) {
    long p = tab.prime();
    require(n >= 0 && n + 1 <= tab.top(), ErrorKind::InvalidArgument, "level beyond the computed symbol tables");
    long q = ipow(p, static_cast<int>(n + 1));
    auto jtab = gamma_log_table(p, static_cast<int>(n + 1));
    std::vector<Integer> c(static_cast<std::size_t>(q / p));
    for (long a = 1; a < q; ++a)
        if (a % p) c[jtab[a]] += tab.value(a, n + 1);
    return MazurTateElement(p, n, std::move(c), tab.label());
}

/// Birch sum sum_a psi(a) [a/p^{n+1}] computed directly from the tables, character by character.
inline CyclotomicInt birch_sum(const SymbolTables& tab, const DirichletCharacter& psi) {
    long q = psi.modulus();
    long k = 0;
    for (long t = q; t > 1; t /= tab.prime()) ++k;
    std::vector<Integer> raw(static_cast<std::size_t>(psi.order()));
    for (long a = 1; a < q; ++a) {
        long e = psi.exponent(a);
        if (e >= 0) raw[e] += tab.value(a, k);
    }
    return CyclotomicInt::from_coefficients(psi.order(), std::move(raw));
}

/// Phi_{p^k}(zeta)^{-1} for zeta a primitive p^m-th root, k != m, as an element of Q(zeta_{p^m}).
inline CyclotomicInt inverse_phi_at_root(long p, long k, long m) {
    long L = ipow(p, static_cast<int>(m));
    require(k != m && k >= 1 && m >= 1, ErrorKind::InvalidArgument, "Phi_{p^m}(zeta) is zero");
    if (k > m) return CyclotomicInt::from_rational(L, Rational(1, p));
    // Phi_{p^k}(zeta) = Phi_p(eta), eta = zeta^{p^{k-1}}; Phi_p(eta)^{-1} = (eta - 1)/(xi - 1), xi = eta^p,
    // and (xi - 1)^{-1} = -Q(xi)/p with Phi_{p^t}(Y) = p + (Y - 1) Q(Y), t = m - k.
    long t = m - k;
    long eta = ipow(p, static_cast<int>(k - 1));
    long xi = eta * p;
    IntPoly phi = cyclotomic_poly_in_y(ipow(p, static_cast<int>(t)));
    phi[0] -= p;
    // Q(Y) = (Phi(Y) - p)/(Y - 1) by synthetic division.
    long deg = degree(phi);
    IntPoly Q(static_cast<std::size_t>(deg));
    Integer carry = 0;
    for (long i = deg; i >= 1; --i) {
        carry += phi[i];
        Q[i - 1] = carry;
    }
    std::vector<Integer> qraw(static_cast<std::size_t>(L));
    for (long i = 0; i < static_cast<long>(Q.size()); ++i) qraw[(i * xi) % L] -= Q[i];
    CyclotomicInt inv_xi = CyclotomicInt::from_coefficients(L, std::move(qraw), Integer(p));
    CyclotomicInt eta_minus_one = CyclotomicInt::zeta_power(L, eta) - CyclotomicInt::from_integer(L, 1);
    return eta_minus_one * inv_xi;
}

/// Conductor exponents m (zeta of order p^m) feeding theta^sign, up to n_max.
inline std::vector<long> signed_levels(int sign, long n_max) {
    std::vector<long> out;
    for (long m = sign == 1 ? 1 : 2; m <= n_max; m += 2) out.push_back(m);
    return out;
}

/// theta^sign(zeta - 1) for zeta = zeta_{p^m} (the root with s = 1).
inline CyclotomicInt signed_interpolation_value(const MazurTateElement& mt, int sign) {
    long p = mt.prime(), m = mt.level();
    require(m >= 1, ErrorKind::InvalidArgument, "the trivial character is not used");
    require((sign == 1) == (m % 2 == 1), ErrorKind::InvalidArgument, "conductor parity does not match the sign");
    long L = ipow(p, static_cast<int>(m));
    CyclotomicInt v = mt.evaluate_at_root(L, 1);
    long e = sign == 1 ? (m + 1) / 2 : (m + 2) / 2;
    if (e % 2) v = -v;
    for (long k = sign == 1 ? 2 : 1; k < m; k += 2) v = v * inverse_phi_at_root(p, k, m);
    return v;
}

struct LevelProfile {
    std::vector<long> levels;  // level set used at this n
    InvariantProfile profile;
    bool guard_ok = false;
};

struct SignedLSeries {
    long p = 3;
    int sign = 1;
    std::string label;
    std::vector<long> levels;                 // conductor exponents m used
    IntPoly modulus;                          // prod Phi_{p^m}(1+X) over levels
    std::vector<Rational> representative;     // exact, degree < deg(modulus)
    IwasawaElement1 series;                   // representative at precision N
    InvariantProfile profile;
    bool guard_ok = false;                    // profile provably equals that of theta
    bool integral = true;                     // representative is p-integral
    Integer content = 1;                      // factor removed from the raw symbol values
    std::vector<CyclotomicInt> values;        // interpolation value for each level
    std::vector<LevelProfile> history;
    std::string note;
};

/// Exact CRT: the unique r of degree < deg(prod Phi_{p^m}(1+X)) with r(zeta_{p^m} - 1) = values[i].
inline std::vector<Rational> crt_reconstruct(long p, const std::vector<long>& levels,
                                             const std::vector<CyclotomicInt>& values) {
    IntPoly total{Integer(1)};
    std::vector<IntPoly> phis;
    for (long m : levels) {
        phis.push_back(cyclotomic_poly(p, static_cast<int>(m)));
        total = poly_mul(total, phis.back());
    }
    long deg = degree(total);
    std::vector<Rational> r(static_cast<std::size_t>(deg), Rational(0));
    for (std::size_t i = 0; i < levels.size(); ++i) {
        long m = levels[i];
        long L = ipow(p, static_cast<int>(m));
        IntPoly W{Integer(1)};
        CyclotomicInt b = values[i];
        for (std::size_t j = 0; j < levels.size(); ++j) {
            if (j == i) continue;
            W = poly_mul(W, phis[j]);
            b = b * inverse_phi_at_root(p, levels[j], m);
        }
        require(b.order() == L, ErrorKind::Internal, "interpolation value in the wrong field");
        IntPoly B(b.numerator().begin(), b.numerator().end());
        IntPoly prod = poly_mul(W, taylor_shift_one(B));
        require(degree(prod) < deg, ErrorKind::Internal, "CRT summand degree too large");
        for (std::size_t t = 0; t < prod.size(); ++t)
            if (prod[t] != 0) r[t] += ratio(prod[t], b.denominator());
    }
    for (auto& x : r) x.canonicalize();
    return r;
}

/// The profile of r equals that of theta = r + q * omega (q integral) when mu(r) = 0
/// and omega's Newton polygon lies strictly above r's on [0, lambda(r)].
inline bool lambda_range_guard(long p, const std::vector<Rational>& r, const IntPoly& omega,
                               const InvariantProfile& prof) {
    if (prof.mu != 0 || r.empty() || r[0] == 0) return false;
    std::vector<std::pair<long, Rational>> rp, op;
    for (long i = 0; i <= prof.lambda && i < static_cast<long>(r.size()); ++i)
        if (r[i] != 0) rp.push_back({i, Rational(valuation(r[i], p))});
    for (long i = 0; i < static_cast<long>(omega.size()); ++i)
        if (omega[i] != 0) op.push_back({i, Rational(valuation(omega[i], p))});
    for (long i = 0; i <= prof.lambda; ++i)
        if (hull_value(op, i) <= hull_value(rp, i)) return false;
    return true;
}

inline SignedLSeries reconstruct_from_levels(long p, int sign, const std::vector<long>& levels,
                                             const std::vector<CyclotomicInt>& values, long N, long D) {
    SignedLSeries out;
    out.p = p;
    out.sign = sign;
    out.levels = levels;
    out.values = values;
    out.modulus = IntPoly{Integer(1)};
    for (long m : levels) out.modulus = poly_mul(out.modulus, cyclotomic_poly(p, static_cast<int>(m)));
    out.representative = crt_reconstruct(p, levels, values);
    for (const auto& x : out.representative)
        if (x != 0 && valuation(x, p) < 0) out.integral = false;
    long deg = degree(out.modulus);
    require(D >= deg - 1, ErrorKind::TruncationInsufficient,
            "truncation degree " + std::to_string(D) + " below the modulus degree " + std::to_string(deg));
    out.series = IwasawaElement1::from_rationals(p, out.representative, D, N);
    // The representative is exact; beyond its degree the coefficients are exact zeros.
    for (long i = deg; i <= D; ++i) out.series.set(i, PadicScalar::exact_zero(p));
    bool all_zero = std::all_of(out.representative.begin(), out.representative.end(),
                                [](const Rational& x) { return x == 0; });
    if (all_zero || out.series.is_zero_within_precision()) {
        out.note = "representative is zero within precision";
        out.profile = InvariantProfile{};
        out.profile.stabilized = false;
        out.guard_ok = false;
        return out;
    }
    out.profile = newton_invariants(out.series);
    out.guard_ok = out.integral && lambda_range_guard(p, out.representative, out.modulus, out.profile);
    return out;
}

/// theta^sign of the source, rebuilt from all levels of matching parity up to
/// n_max, with the profile history over growing level sets.
inline SignedLSeries reconstruct_signed(const SymbolTables& tab, int sign, long n_max, long N, long D) {
    require(sign == 1 || sign == -1, ErrorKind::InvalidArgument, "sign must be +1 or -1");
    require(n_max + 1 <= tab.top(), ErrorKind::InvalidArgument, "symbol tables do not reach p^{n_max+1}");
    long p = tab.prime();
    auto levels = signed_levels(sign, n_max);
    require(!levels.empty(), ErrorKind::InvalidArgument, "no level of matching parity below n_max");
    std::vector<CyclotomicInt> values;
    for (long m : levels) values.push_back(signed_interpolation_value(mazur_tate(tab, m), sign));
    // History over n = 1..n_max; n and n+1 share a level set for one parity.
    std::vector<LevelProfile> history;
    std::vector<SignedLSeries> by_count(levels.size() + 1);
    for (long n = 1; n <= n_max; ++n) {
        std::size_t k = signed_levels(sign, n).size();
        if (k == 0) continue;
        if (by_count[k].levels.empty()) {
            std::vector<long> lv(levels.begin(), levels.begin() + static_cast<long>(k));
            std::vector<CyclotomicInt> vv(values.begin(), values.begin() + static_cast<long>(k));
            by_count[k] = reconstruct_from_levels(p, sign, lv, vv, N, D);
        }
        history.push_back({by_count[k].levels, by_count[k].profile, by_count[k].guard_ok});
    }
    SignedLSeries last = by_count[levels.size()];
    last.label = tab.label();
    last.content = tab.content();
    last.history = history;
    bool agree = history.size() >= 2 &&
                 history[history.size() - 1].profile.same_invariants(history[history.size() - 2].profile);
    last.profile.stabilized = last.profile.stabilized && last.guard_ok && agree;
    if (!last.guard_ok && last.note.empty()) last.note = "needs larger n_max";
    return last;
}

struct RatioReport {
    std::string status;  // consistent | inconsistent | inconclusive
    Rational expected;
    long known_digits = 0;
    std::string detail;
};

/// Compares theta^+(0)/theta^-(0) with (p-1)/2; r(0) = theta(0) mod p^{#levels}.
inline RatioReport trivial_character_ratio_check(const SignedLSeries& plus, const SignedLSeries& minus) {
    require(plus.sign == 1 && minus.sign == -1 && plus.p == minus.p, ErrorKind::InvalidArgument,
            "expected theta^+ and theta^- for the same prime");
    long p = plus.p;
    RatioReport rep;
    rep.expected = ratio(p - 1, 2);
    long t = static_cast<long>(std::min(plus.levels.size(), minus.levels.size()));
    rep.known_digits = t;
    if (plus.representative.empty() || minus.representative.empty() || !plus.integral || !minus.integral) {
        rep.status = "inconclusive";
        rep.detail = "constant terms unavailable";
        return rep;
    }
    const Rational& a = plus.representative[0];
    const Rational& b = minus.representative[0];
    if (a == 0 || b == 0 || valuation(a, p) >= t || valuation(b, p) >= t) {
        rep.status = "inconclusive";
        rep.detail = "a value at the trivial character is zero modulo p^" + std::to_string(t);
        return rep;
    }
    // 2 theta^+(0) = (p-1) theta^-(0), both sides known modulo p^t.
    Rational diff = 2 * a - Rational(p - 1) * b;
    bool ok = diff == 0 || valuation(diff, p) >= t;
    rep.status = ok ? "consistent" : "inconsistent";
    rep.detail = "2*theta+(0) - (p-1)*theta-(0) checked modulo p^" + std::to_string(t);
    return rep;
}

}  // namespace iwb
