#pragma once

// Second Chern class arithmetic for cyclic pseudo-null quotients of
// Z_p[[S,T]]: local lengths at vertical primes (p, P), resultant pushforward
// to the S-line, fudge factors at l != p, and the identity ledger.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iwb/curve.hpp"
#include "iwb/iwasawa.hpp"

namespace iwb {

enum class PrimeKind { Vertical, Horizontal };

/// Height-two prime of Z_p[[S,T]]. Vertical primes are (p, P) with P a
/// regular parameter mod p written as var - phi(other variable), phi(0) = 0.
struct PrimeDescriptor {
    PrimeKind kind = PrimeKind::Vertical;
    long p = 0;
    char var = 'T';             // 'T': P = T - phi(S); 'S': P = S - phi(T)
    std::vector<long> phi;      // coefficients mod p, phi[0] = 0, truncated
    InvariantProfile profile;   // horizontal: profile of the pushforward
    long fiber_degree = 1;
    std::string label;          // horizontal or unresolved descriptors
    bool resolved = true;

    static PrimeDescriptor vertical(long p, char var, std::vector<long> phi) {
        require(var == 'S' || var == 'T', ErrorKind::InvalidArgument, "variable must be S or T");
        PrimeDescriptor d;
        d.p = p;
        d.var = var;
        for (auto& c : phi) c = floor_mod(c, p);
        if (phi.empty()) phi.push_back(0);
        require(phi[0] == 0, ErrorKind::InvalidArgument, "distinguished generator needs phi(0) = 0");
        while (phi.size() > 1 && phi.back() == 0) phi.pop_back();
        d.phi = std::move(phi);
        return d;
    }

    static PrimeDescriptor horizontal(long p, std::string label, long fiber_degree = 1) {
        PrimeDescriptor d;
        d.kind = PrimeKind::Horizontal;
        d.p = p;
        d.label = std::move(label);
        d.fiber_degree = fiber_degree;
        return d;
    }

    std::string generator_string() const {
        char other = var == 'T' ? 'S' : 'T';
        std::string s(1, var);
        for (std::size_t k = 1; k < phi.size(); ++k) {
            if (phi[k] == 0) continue;
            long c = floor_mod(-phi[k], p);
            s += " + ";
            if (c != 1) s += std::to_string(c) + "*";
            s += other;
            if (k > 1) s += "^" + std::to_string(k);
        }
        return s;
    }

    std::string to_string() const {
        if (!resolved) return "(" + std::to_string(p) + ", ?" + label + ")";
        if (kind == PrimeKind::Horizontal) return "[" + label + ", fiber " + std::to_string(fiber_degree) + "]";
        return "(" + std::to_string(p) + ", " + generator_string() + ")";
    }

    friend bool operator==(const PrimeDescriptor& a, const PrimeDescriptor& b) {
        return a.kind == b.kind && a.p == b.p && a.var == b.var && a.phi == b.phi && a.label == b.label &&
               a.fiber_degree == b.fiber_degree && a.resolved == b.resolved;
    }
};

enum class Completeness { Full, PartialWithPushforward };

struct C2Divisor {
    std::vector<std::pair<PrimeDescriptor, long>> terms;
    Completeness completeness = Completeness::Full;
    std::optional<InvariantProfile> pushforward;
    std::vector<std::string> notes;

    void add(const PrimeDescriptor& d, long m) {
        require(m >= 0, ErrorKind::InvalidArgument, "negative multiplicity");
        if (m == 0) return;
        for (auto& [e, k] : terms)
            if (e == d) {
                k += m;
                return;
            }
        terms.push_back({d, m});
    }

    bool is_zero() const { return terms.empty(); }

    long total_multiplicity() const {
        long s = 0;
        for (const auto& t : terms) s += t.second;
        return s;
    }

    friend C2Divisor operator+(C2Divisor a, const C2Divisor& b) {
        for (const auto& [d, m] : b.terms) a.add(d, m);
        if (b.completeness == Completeness::PartialWithPushforward) a.completeness = b.completeness;
        a.notes.insert(a.notes.end(), b.notes.begin(), b.notes.end());
        return a;
    }

    std::string to_string() const {
        if (terms.empty()) return "0";
        std::string s;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            if (i) s += " + ";
            s += std::to_string(terms[i].second) + "*" + terms[i].first.to_string();
        }
        return s;
    }
};

namespace detail {

/// (f / p^v) mod p on the box [0, D]^2, with the box shrunk to known coefficients.
struct ReducedSeries {
    long v = 0;
    long D = 0;
    std::vector<std::vector<long>> c;  // c[i][j] for S^i T^j
    bool zero = true;
};

inline ReducedSeries reduce_mod_p(const IwasawaElement2& f) {
    long p = f.prime(), D = f.trunc_degree();
    long v = LONG_MAX;
    for (long i = 0; i <= D; ++i)
        for (long j = 0; j <= D; ++j) {
            const auto& x = f.at(i, j);
            if (!x.is_zero()) v = std::min(v, x.valuation());
        }
    ReducedSeries r;
    if (v == LONG_MAX) return r;
    r.v = v;
    // Largest box on which every coefficient is known modulo p^{v+1}.
    long box = D;
    for (long i = 0; i <= D; ++i)
        for (long j = 0; j <= D; ++j)
            if (f.at(i, j).absolute_precision() <= v) box = std::min(box, std::max(i, j) - 1);
    require(box >= 0, ErrorKind::PrecisionInsufficient, "reduction mod p is not determined");
    r.D = box;
    r.c.assign(static_cast<std::size_t>(box + 1), std::vector<long>(static_cast<std::size_t>(box + 1), 0));
    Integer pv = ipow_big(p, v);
    for (long i = 0; i <= box; ++i)
        for (long j = 0; j <= box; ++j) {
            const auto& x = f.at(i, j);
            if (x.is_zero() || x.valuation() > v) continue;
            Rational q = x.to_rational() / Rational(pv);
            Integer num = q.get_num(), den = q.get_den();
            long val = mod_nonneg(num * inverse_mod(den, Integer(p)), Integer(p)).get_si();
            r.c[i][j] = val;
            if (val) r.zero = false;
        }
    return r;
}

/// Order of vanishing of g along var = phi(other) after var -> phi + Y; nullopt if
/// no Y-coefficient is provably nonzero.
inline std::optional<long> multiplicity_along(const ReducedSeries& g, const PrimeDescriptor& P) {
    long p = P.p, D = g.D;
    // Work with x = main variable, y = other; g[x-power][y-power].
    auto coef = [&](long xi, long yi) { return P.var == 'T' ? g.c[yi][xi] : g.c[xi][yi]; };
    std::vector<long> phi(static_cast<std::size_t>(D + 1), 0);
    for (std::size_t k = 0; k < P.phi.size() && static_cast<long>(k) <= D; ++k) phi[k] = P.phi[k];
    auto mul = [&](const std::vector<long>& a, const std::vector<long>& b) {
        std::vector<long> r(static_cast<std::size_t>(D + 1), 0);
        for (long i = 0; i <= D; ++i) {
            if (!a[i]) continue;
            for (long j = 0; i + j <= D; ++j)
                if (b[j]) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
        }
        return r;
    };
    // phipow[m] = phi^m truncated at y-degree D.
    std::vector<std::vector<long>> phipow{std::vector<long>(static_cast<std::size_t>(D + 1), 0)};
    phipow[0][0] = 1;
    for (long m = 1; m <= D; ++m) phipow.push_back(mul(phipow.back(), phi));
    // Y^k coefficient: sum_{b >= k} C(b, k) phi^{b-k} y^a g[b][a]; reliable below y-degree D + 1 - k.
    for (long k = 0; k <= D; ++k) {
        std::vector<long> gk(static_cast<std::size_t>(D + 1), 0);
        for (long b = k; b <= D; ++b) {
            long binom = mod_nonneg(binomial(b, k), Integer(p)).get_si();
            if (!binom) continue;
            for (long a = 0; a <= D; ++a) {
                long c = coef(b, a);
                if (!c) continue;
                const auto& pw = phipow[b - k];
                for (long t = 0; a + t <= D; ++t)
                    if (pw[t]) gk[a + t] = (gk[a + t] + binom * c % p * pw[t]) % p;
            }
        }
        for (long t = 0; t <= D - k; ++t)
            if (gk[t]) return k;
    }
    return std::nullopt;
}

}  // namespace detail

/// Length of (Z_p[[S,T]]/(f, g)) localized at the vertical prime Q = (p, P).
inline long local_length_vertical(const IwasawaElement2& f, const IwasawaElement2& g, const PrimeDescriptor& Q) {
    require(Q.kind == PrimeKind::Vertical && Q.resolved, ErrorKind::InvalidArgument, "vertical descriptor expected");
    require(Q.p == f.prime() && Q.p == g.prime(), ErrorKind::InvalidArgument, "prime mismatch");
    auto rf = detail::reduce_mod_p(f), rg = detail::reduce_mod_p(g);
    require(!rf.zero && !rg.zero, ErrorKind::PrecisionInsufficient, "a generator is zero within precision");
    if (rf.v > 0 && rg.v > 0) fail(ErrorKind::NotPseudoNull, "both generators are divisible by p");
    auto mf = detail::multiplicity_along(rf, Q), mg = detail::multiplicity_along(rg, Q);
    // Shape f = p^v * (unit at Q): its reduction is prime to P.
    auto attempt = [&](const detail::ReducedSeries& a, std::optional<long> ma,
                       std::optional<long> mb) -> std::optional<long> {
        if (!ma || *ma != 0) return std::nullopt;
        if (a.v == 0) return 0L;  // unit at Q
        require(mb.has_value(), ErrorKind::PrecisionInsufficient, "multiplicity along P not determined");
        return a.v * *mb;
    };
    if (auto r = attempt(rf, mf, mg)) return *r;
    if (auto r = attempt(rg, mg, mf)) return *r;
    if (mf && mg && *mf > 0 && *mg > 0 && rf.v == 0 && rg.v == 0)
        fail(ErrorKind::UnsupportedShape, "neither generator is a p-power times a unit at Q");
    fail(ErrorKind::UnsupportedShape, "generators are not of the form p^v * unit");
}

struct PushforwardResult {
    IwasawaElement1 resultant;
    InvariantProfile profile;
    C2Divisor divisor;
};

/// Res_T(f, g) in Z_p[[S]] and its divisor, the pushforward of c_2 along the S-line.
inline PushforwardResult pushforward_c2(const IwasawaElement2& f, const IwasawaElement2& g) {
    PushforwardResult out;
    out.resultant = resultant_in_T(f, g);
    require(!out.resultant.is_zero_within_precision(), ErrorKind::Inconclusive,
            "common factor within precision: resultant vanishes");
    out.profile = newton_invariants(out.resultant);
    out.divisor.completeness = Completeness::PartialWithPushforward;
    out.divisor.pushforward = out.profile;
    long p = f.prime();
    if (out.profile.mu > 0) {
        PrimeDescriptor v;
        v.p = p;
        v.resolved = false;
        v.label = "vertical part of Res_T";
        out.divisor.add(v, out.profile.mu);
    }
    if (out.profile.lambda > 0)
        out.divisor.add(PrimeDescriptor::horizontal(p, "Res_T lambda " + std::to_string(out.profile.lambda)),
                        out.profile.lambda);
    out.divisor.notes.push_back("fiber degrees are not resolved into individual horizontal primes");
    return out;
}

enum class PlaceStructure { Split, Inert, Ramified };

inline std::string to_string(PlaceStructure s) {
    switch (s) {
        case PlaceStructure::Split: return "split";
        case PlaceStructure::Inert: return "inert";
        case PlaceStructure::Ramified: return "ramified";
    }
    return "?";
}

struct ReductionData {
    std::string curve;
    long ell = 0;
    int place = 0;  // index of eta among the places above ell
    PlaceStructure structure = PlaceStructure::Split;
    long e = 1, f = 1;
    ReductionType type_over_q = ReductionType::Good;
    ReductionType type = ReductionType::Good;  // over K_eta
    std::optional<long> tate_valuation;        // ord_eta(q) when multiplicative over K_eta
    std::vector<std::string> notes;
};

inline PlaceStructure place_structure(long D, long ell) {
    int k = kronecker(D, ell);
    return k == 1 ? PlaceStructure::Split : k == -1 ? PlaceStructure::Inert : PlaceStructure::Ramified;
}

/// Reduction type of E over each completion K_eta, eta | ell, K = Q(sqrt D).
inline std::vector<ReductionData> classify_reduction(const CurveData& E, long ell, long D, long p) {
    require(ell != p, ErrorKind::InvalidArgument, "ell must differ from p");
    require(is_prime(ell), ErrorKind::InvalidArgument, "ell must be prime");
    LocalReduction loc = local_reduction(E, ell);
    const auto& inv = E.invariants();
    ReductionData base;
    base.curve = E.label();
    base.ell = ell;
    base.structure = place_structure(D, ell);
    base.e = base.structure == PlaceStructure::Ramified ? 2 : 1;
    base.f = base.structure == PlaceStructure::Inert ? 2 : 1;
    base.type_over_q = loc.type;
    base.type = loc.type;
    switch (loc.type) {
        case ReductionType::Good: break;
        case ReductionType::SplitMultiplicative:
            base.tate_valuation = base.e * loc.disc_valuation_min;
            break;
        case ReductionType::NonsplitMultiplicative:
            base.tate_valuation = base.e * loc.disc_valuation_min;
            if (base.structure == PlaceStructure::Inert) {
                base.type = ReductionType::SplitMultiplicative;
                base.notes.push_back("nonsplit over Q_l, split over the unramified quadratic extension");
            }
            break;
        case ReductionType::Additive: {
            bool pot_mult = loc.j_valuation != LONG_MAX && loc.j_valuation < 0;
            if (pot_mult && base.structure == PlaceStructure::Ramified) {
                if (ell == 2) {
                    base.notes.push_back("potentially multiplicative at 2 over a ramified place: not refined");
                    break;
                }
                // E is a ramified quadratic twist of a Tate curve by Q_l(sqrt(-c6)); over K_eta the
                // twisting character becomes unramified.
                Integer x = -inv.c6;
                bool square = is_square_qell(x, ell) || is_square_qell(x * D, ell);
                base.type = square ? ReductionType::SplitMultiplicative : ReductionType::NonsplitMultiplicative;
                base.tate_valuation = base.e * (-loc.j_valuation);
                base.notes.push_back("potentially multiplicative: multiplicative over the ramified place");
            } else if (!pot_mult && base.structure == PlaceStructure::Ramified && ell >= 5) {
                // Minimal discriminant valuation over Q_l; good over K_eta iff 12 | 2 * delta.
                long vd = loc.disc_valuation_min;
                long v4 = inv.c4 == 0 ? LONG_MAX : valuation(inv.c4, ell);
                long v6 = inv.c6 == 0 ? LONG_MAX : valuation(inv.c6, ell);
                while (vd >= 12 && v4 >= 4 && v6 >= 6) {
                    vd -= 12;
                    if (v4 != LONG_MAX) v4 -= 4;
                    if (v6 != LONG_MAX) v6 -= 6;
                }
                if ((2 * vd) % 12 == 0) {
                    base.type = ReductionType::Good;
                    base.notes.push_back("potentially good: good over the ramified place");
                }
            } else if (pot_mult) {
                base.notes.push_back("potentially multiplicative: stays additive over an unramified place");
            }
            break;
        }
    }
    std::vector<ReductionData> out;
    int places = base.structure == PlaceStructure::Split ? 2 : 1;
    for (int i = 0; i < places; ++i) {
        ReductionData r = base;
        r.place = i;
        out.push_back(r);
    }
    return out;
}

/// Exponents of kappa~(Frob_eta) in the coordinates gamma_p = 1+S, gamma_q = 1+T.
struct FrobeniusData {
    long ell = 0;
    int place = 0;
    Integer a = 0, b = 0;
};

/// h = (1+S)^{-a} (1+T)^{-b} - 1.
inline IwasawaElement2 frobenius_element(long p, const Integer& a, const Integer& b, long D, long N) {
    IwasawaElement2 h(p, D, N);
    std::vector<Integer> ca, cb;
    for (long k = 0; k <= D; ++k) {
        Integer x, y, na = -a, nb = -b;
        mpz_bin_ui(x.get_mpz_t(), na.get_mpz_t(), static_cast<unsigned long>(k));
        mpz_bin_ui(y.get_mpz_t(), nb.get_mpz_t(), static_cast<unsigned long>(k));
        ca.push_back(x);
        cb.push_back(y);
    }
    for (long i = 0; i <= D; ++i)
        for (long j = 0; j <= D; ++j) {
            Integer c = ca[i] * cb[j] - (i == 0 && j == 0 ? 1 : 0);
            h.set(i, j, padic_abs(p, Rational(c), N));
        }
    return h;
}

/// The prime (p, W - 1), W = (1+S)^{-a'} (1+T)^{-b'}, with (a', b') = (a, b)/p^m not both divisible by p.
inline PrimeDescriptor frobenius_prime(long p, Integer a, Integer b, long D) {
    require(a != 0 || b != 0, ErrorKind::NotPseudoNull, "trivial Frobenius exponents");
    long m = std::min(a == 0 ? LONG_MAX : valuation(a, p), b == 0 ? LONG_MAX : valuation(b, p));
    Integer pm = ipow_big(p, m);
    a /= pm;
    b /= pm;
    // W = 1 along var = (1+other)^c - 1 with c = -a'/b' (or -b'/a') in Z_p.
    bool t_main = b % p != 0;
    Integer num = t_main ? a : b, den = t_main ? b : a;
    long K = 1;
    while (ipow_big(p, K) <= D) ++K;
    Integer mod = ipow_big(p, K);
    Integer c = mod_nonneg(-num * inverse_mod(den, mod), mod);
    std::vector<long> phi(static_cast<std::size_t>(D + 1), 0);
    for (long k = 1; k <= D; ++k) phi[k] = mod_nonneg(binomial_big(c, k), Integer(p)).get_si();
    return PrimeDescriptor::vertical(p, t_main ? 'T' : 'S', phi);
}

struct FudgePlace {
    ReductionData data;
    long contribution = 0;
    std::optional<PrimeDescriptor> prime;
    std::string note;
};

struct FudgeReport {
    long p = 0;
    long D = 0;
    std::vector<FudgePlace> places;
    C2Divisor total;
    bool outside_hypothesis = false;  // p < 5
};

/// Fudge divisor over the places above Sigma \ {p}: only split multiplicative
/// places with p | ord(q) contribute, with multiplicity v_p(ord q) * v_P(h).
inline FudgeReport fudge_c2(const CurveData& E, long Dfield, long p, const std::vector<long>& sigma,
                            const std::vector<FrobeniusData>& frob, bool strict = false, long trunc = 24,
                            long N = 20) {
    FudgeReport rep;
    rep.p = p;
    rep.D = Dfield;
    rep.outside_hypothesis = p < 5;
    if (rep.outside_hypothesis) {
        require(!strict, ErrorKind::UnsupportedHypothesis, "fudge factors are stated for p >= 5");
        rep.total.notes.push_back("p < 5: outside the p >= 5 hypothesis");
    }
    std::vector<long> ells(sigma.begin(), sigma.end());
    std::sort(ells.begin(), ells.end());
    ells.erase(std::unique(ells.begin(), ells.end()), ells.end());
    for (long ell : ells) {
        if (ell == p) continue;
        for (auto& rd : classify_reduction(E, ell, Dfield, p)) {
            FudgePlace fp;
            fp.data = rd;
            if (rd.type != ReductionType::SplitMultiplicative) {
                fp.note = to_string(rd.type) + ": no contribution";
            } else if (*rd.tate_valuation % p != 0) {
                fp.note = "split multiplicative, p does not divide ord(q) = " + std::to_string(*rd.tate_valuation);
            } else {
                long v = valuation(*rd.tate_valuation, p);
                auto it = std::find_if(frob.begin(), frob.end(),
                                       [&](const FrobeniusData& d) { return d.ell == ell && d.place == rd.place; });
                if (it == frob.end()) {
                    PrimeDescriptor d;
                    d.p = p;
                    d.resolved = false;
                    d.label = "Frob at " + std::to_string(ell) + "." + std::to_string(rd.place);
                    fp.prime = d;
                    fp.contribution = v;
                    fp.note = "Frobenius data missing: generator unresolved, multiplicity is a lower bound";
                    rep.total.add(d, v);
                } else {
                    PrimeDescriptor Q = frobenius_prime(p, it->a, it->b, trunc);
                    IwasawaElement2 n = IwasawaElement2::from_terms(p, {{0, 0, Integer(*rd.tate_valuation)}}, trunc, N);
                    IwasawaElement2 h = frobenius_element(p, it->a, it->b, trunc, N);
                    fp.prime = Q;
                    fp.contribution = local_length_vertical(n, h, Q);
                    fp.note = "split multiplicative, p | ord(q)";
                    rep.total.add(Q, fp.contribution);
                }
            }
            rep.places.push_back(fp);
        }
    }
    return rep;
}

struct LedgerEntry {
    std::string side;    // LHS | RHS
    std::string term;
    std::string status;  // verified | conditional | out-of-scope | unavailable
    std::string detail;
};

struct TheoremLedgerInput {
    std::optional<std::string> shadow_verdict;  // coprimality verdict of the cyclotomic shadow
    std::optional<C2Divisor> lhs_pushforward;
    std::optional<C2Divisor> fudge;
};

/// Bookkeeping for c2(R/(theta_I, theta_II)) = c2(Z) + c2(Z*) + fudge: which
/// terms are computed, which are conditional, which are out of scope.
inline std::vector<LedgerEntry> theorem_ledger(const TheoremLedgerInput& in) {
    std::vector<LedgerEntry> out;
    if (!in.shadow_verdict && !in.lhs_pushforward && !in.fudge) return out;
    if (in.lhs_pushforward)
        out.push_back({"LHS", "c2(R/(theta_I, theta_II))", "verified",
                       "pushforward along the S-line: " + in.lhs_pushforward->to_string()});
    else if (in.shadow_verdict)
        out.push_back({"LHS", "c2(R/(theta_I, theta_II))",
                       *in.shadow_verdict == "coprime" ? "conditional" : "unavailable",
                       *in.shadow_verdict == "coprime"
                           ? "pseudo-null via the equivalence of coprimality and pseudo-nullity; cyclotomic shadow coprime"
                           : "cyclotomic shadow " + *in.shadow_verdict});
    else
        out.push_back({"LHS", "c2(R/(theta_I, theta_II))", "unavailable", "no two-variable data"});
    out.push_back({"RHS", "c2(Z)", "out-of-scope", "Galois-cohomological term"});
    out.push_back({"RHS", "c2(Z*)", "out-of-scope", "Galois-cohomological term"});
    if (in.fudge)
        out.push_back({"RHS", "fudge", "verified", in.fudge->to_string()});
    else
        out.push_back({"RHS", "fudge", "unavailable", "no fudge computation supplied"});
    out.push_back({"=", "identity", "conditional", "equality is structural, not asserted numerically"});
    return out;
}

}  // namespace iwb
