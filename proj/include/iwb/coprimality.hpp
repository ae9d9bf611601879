#pragma once

// Coprimality certificates in Z_p[[X]] and the cyclotomic-shadow report for
// the pseudo-nullity deduction.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "iwb/iwasawa.hpp"
#include "iwb/linalg.hpp"
#include "iwb/signed.hpp"

namespace iwb {

enum class CoprimeMethod { SlopeDisjoint, Resultant, Inconclusive };
enum class CoprimeVerdict { Coprime, NotCertified, Inconclusive };

inline std::string to_string(CoprimeMethod m) {
    switch (m) {
        case CoprimeMethod::SlopeDisjoint: return "slope-disjoint";
        case CoprimeMethod::Resultant: return "resultant";
        case CoprimeMethod::Inconclusive: return "inconclusive";
    }
    return "?";
}

inline std::string to_string(CoprimeVerdict v) {
    switch (v) {
        case CoprimeVerdict::Coprime: return "coprime";
        case CoprimeVerdict::NotCertified: return "not-certified";
        case CoprimeVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct CoprimalityCertificate {
    CoprimeMethod method = CoprimeMethod::Inconclusive;
    InvariantProfile f_profile, g_profile;
    std::optional<Rational> resultant_valuation;
    CoprimeVerdict verdict = CoprimeVerdict::Inconclusive;
    std::string reason;
};

inline bool is_unit(const InvariantProfile& prof) {
    require(prof.stabilized, ErrorKind::Inconclusive, "unit test on an unstabilized profile");
    return prof.mu == 0 && prof.lambda == 0;
}

inline bool is_unit(const SignedLSeries& f) { return is_unit(f.profile); }

inline bool is_unit(const IwasawaElement1& f) { return is_unit(newton_invariants(f)); }

inline bool slopes_disjoint(const InvariantProfile& a, const InvariantProfile& b) {
    std::set<Rational> sa;
    for (const auto& s : a.slopes) sa.insert(s.valuation);
    for (const auto& s : b.slopes)
        if (sa.count(s.valuation)) return false;
    return true;
}

namespace detail {

/// Coefficients 0..lambda of a distinguished polynomial.
inline std::vector<PadicScalar> poly_part(const IwasawaElement1& d, long lambda) {
    std::vector<PadicScalar> c;
    for (long i = 0; i <= lambda; ++i) c.push_back(d[i]);
    return c;
}

/// Resultant of two monic p-adic polynomials (coefficient vectors, low degree first).
inline PadicScalar monic_resultant(long p, const std::vector<PadicScalar>& f, const std::vector<PadicScalar>& g) {
    long m = static_cast<long>(f.size()) - 1, n = static_cast<long>(g.size()) - 1;
    PadicScalar zero = PadicScalar::exact_zero(p);
    long prec = 1;
    for (const auto* v : {&f, &g})
        for (const auto& x : *v)
            if (!x.is_exact_zero()) prec = std::max(prec, x.absolute_precision());
    PadicScalar one = PadicScalar::from_unit(p, 1, 0, prec);
    if (m == 0 || n == 0) return one;
    long size = m + n;
    std::vector<std::vector<PadicScalar>> syl(static_cast<std::size_t>(size),
                                              std::vector<PadicScalar>(static_cast<std::size_t>(size), zero));
    for (long r = 0; r < n; ++r)
        for (long j = 0; j <= m; ++j) syl[r][r + j] = f[m - j];
    for (long r = 0; r < m; ++r)
        for (long j = 0; j <= n; ++j) syl[n + r][r + j] = g[n - j];
    return berkowitz_det(syl, zero, one);
}

/// Does monic a divide b within precision?
inline bool monic_divides(const std::vector<PadicScalar>& a, std::vector<PadicScalar> b) {
    long m = static_cast<long>(a.size()) - 1;
    for (long k = static_cast<long>(b.size()) - 1; k >= m; --k) {
        PadicScalar c = b[k];
        for (long j = 0; j <= m; ++j) b[k - m + j] = b[k - m + j] - c * a[j];
    }
    for (long i = 0; i < m && i < static_cast<long>(b.size()); ++i)
        if (!b[i].is_zero()) return false;
    return true;
}

}  // namespace detail

/// Certificate for f and g having no common irreducible factor in Z_p[[X]].
inline CoprimalityCertificate coprime_certificate(const IwasawaElement1& f, const IwasawaElement1& g,
                                                  bool allow_resultant = true) {
    CoprimalityCertificate c;
    c.f_profile = newton_invariants(f);
    c.g_profile = newton_invariants(g);
    if (!c.f_profile.stabilized || !c.g_profile.stabilized) {
        c.reason = "unstabilized profile";
        return c;
    }
    if (c.f_profile.mu > 0 && c.g_profile.mu > 0) {
        c.verdict = CoprimeVerdict::NotCertified;
        c.reason = "shared factor p";
        return c;
    }
    if (slopes_disjoint(c.f_profile, c.g_profile)) {
        c.method = CoprimeMethod::SlopeDisjoint;
        c.verdict = CoprimeVerdict::Coprime;
        c.reason = "root valuations differ: " + c.f_profile.slopes_string() + " vs " + c.g_profile.slopes_string();
        return c;
    }
    if (!allow_resultant) {
        c.reason = "shared slope and no resultant path";
        return c;
    }
    std::optional<WeierstrassFactors> wf, wg;
    try {
        wf = weierstrass_prepare(f);
        wg = weierstrass_prepare(g);
    } catch (const Error& e) {
        c.reason = std::string("Weierstrass preparation failed: ") + e.what();
        return c;
    }
    auto a = detail::poly_part(wf->distinguished, c.f_profile.lambda);
    auto b = detail::poly_part(wg->distinguished, c.g_profile.lambda);
    PadicScalar res = detail::monic_resultant(f.prime(), a, b);
    if (res.is_zero()) {
        bool shared = a.size() <= b.size() ? detail::monic_divides(a, b) : detail::monic_divides(b, a);
        c.verdict = shared ? CoprimeVerdict::NotCertified : CoprimeVerdict::Inconclusive;
        c.reason = shared ? "distinguished parts share a factor within precision"
                          : "resultant is zero within precision";
        return c;
    }
    c.method = CoprimeMethod::Resultant;
    c.verdict = CoprimeVerdict::Coprime;
    c.resultant_valuation = Rational(res.valuation());
    c.reason = "resultant of distinguished parts has valuation " + std::to_string(res.valuation());
    return c;
}

/// For signed series the representative is known only modulo the half-log
/// product, so only profile-level evidence is used.
inline CoprimalityCertificate coprime_certificate(const SignedLSeries& f, const SignedLSeries& g) {
    CoprimalityCertificate c = coprime_certificate(f.series, g.series, false);
    c.f_profile = f.profile;
    c.g_profile = g.profile;
    if (!f.profile.stabilized || !g.profile.stabilized) {
        c.method = CoprimeMethod::Inconclusive;
        c.verdict = CoprimeVerdict::Inconclusive;
        c.reason = "unstabilized profile";
    }
    return c;
}

struct ShadowProducts {
    IwasawaElement1 P_pp, P_mm;
    std::pair<IwasawaElement1, IwasawaElement1> mixed;  // (thE^+ thEK^-, thE^- thEK^+)
    bool zero_within_precision = false;
    bool reduction_applies = false;  // thE^+ is a unit
    InvariantProfile reduced_plus, reduced_minus;
    std::string note;
};

/// P_pp = thE^+ thEK^+ and P_mm; the mixed shadow is known only up to a unit, so
/// when thE^+ is a unit coprimality against P_pp reduces to thEK^+ vs thEK^-.
inline ShadowProducts shadow_products(const SignedLSeries& thE_plus, const SignedLSeries& thE_minus,
                                      const SignedLSeries& thEK_plus, const SignedLSeries& thEK_minus,
                                      long D = -1) {
    auto cut = [&](const IwasawaElement1& x) { return D < 0 ? x : x.truncated(D); };
    ShadowProducts s;
    s.P_pp = cut(thE_plus.series) * cut(thEK_plus.series);
    s.P_mm = cut(thE_minus.series) * cut(thEK_minus.series);
    s.mixed = {cut(thE_plus.series) * cut(thEK_minus.series), cut(thE_minus.series) * cut(thEK_plus.series)};
    for (const auto* x : {&thE_plus, &thE_minus, &thEK_plus, &thEK_minus})
        if (x->series.is_zero_within_precision()) s.zero_within_precision = true;
    if (s.zero_within_precision) {
        s.note = "zero within precision";
        return s;
    }
    s.reduction_applies = thE_plus.profile.stabilized && is_unit(thE_plus.profile);
    s.reduced_plus = thEK_plus.profile;
    s.reduced_minus = thEK_minus.profile;
    s.note = s.reduction_applies ? "theta_E^+ is a unit: compare theta_EK^+ with theta_EK^-"
                                 : "theta_E^+ is not a certified unit";
    return s;
}

/// Galois-image facts are inputs, not computed.
struct GaloisFlags {
    bool cm = false;              // one-variable main conjecture known for E and E_K
    bool surjective_E = false;    // rho_E onto GL_2(Z_p)
    bool surjective_EK = false;
};

struct ConditionStatus {
    std::string status;  // holds | fails | inconclusive
    std::string detail;
};

struct ConjectureBReport {
    std::string curve;
    long D = 0;
    long p = 0;
    ConditionStatus a, b, c;
    CoprimalityCertificate certificate;
    RatioReport ratio;
    std::string route;    // cm | surjective | main-conjectures
    std::string verdict;  // verified-under-stated-route | conditional | not-established | inconclusive
    std::vector<std::string> relies_on;
};

inline ConjectureBReport conjecture_b_report(const std::string& curve, long D, long p, const SignedLSeries& thE_plus,
                                             const SignedLSeries& thE_minus, const SignedLSeries& thEK_plus,
                                             const SignedLSeries& thEK_minus, const GaloisFlags& flags) {
    ConjectureBReport r;
    r.curve = curve;
    r.D = D;
    r.p = p;
    auto unit_status = [](const SignedLSeries& s) -> std::optional<bool> {
        if (!s.profile.stabilized) return std::nullopt;
        return is_unit(s.profile);
    };
    auto ua = unit_status(thE_plus);
    r.ratio = trivial_character_ratio_check(thE_plus, thE_minus);
    if (!ua) r.a = {"inconclusive", "theta_E^+ profile unstabilized"};
    else if (*ua) r.a = {"holds", "lambda = mu = 0; ratio at the trivial character " + r.ratio.status};
    else r.a = {"fails", "theta_E^+ has " + thE_plus.profile.to_string()};

    r.certificate = coprime_certificate(thEK_plus, thEK_minus);
    if (r.certificate.verdict == CoprimeVerdict::Coprime) r.b = {"holds", r.certificate.reason};
    else if (r.certificate.verdict == CoprimeVerdict::NotCertified) r.b = {"fails", r.certificate.reason};
    else r.b = {"inconclusive", r.certificate.reason};

    auto up = unit_status(thEK_plus), um = unit_status(thEK_minus);
    if (!up || !um) r.c = {"inconclusive", "theta_EK profile unstabilized"};
    else if (!*up && !*um)
        r.c = {"holds", "lambda+ = " + std::to_string(thEK_plus.profile.lambda) +
                            ", lambda- = " + std::to_string(thEK_minus.profile.lambda)};
    else r.c = {"fails", "a signed series of E_K is a unit"};

    if (flags.cm) {
        r.route = "cm";
        r.relies_on = {"one-variable main conjecture for CM curves (Pollack-Rubin)", "conditions (a) and (b)"};
    } else if (flags.surjective_E && flags.surjective_EK) {
        r.route = "surjective";
        r.relies_on = {"surjectivity of rho_E and rho_EK (input flags)", "Kobayashi divisibility",
                       "conditions (a) and (b)"};
    } else {
        r.route = "main-conjectures";
        r.relies_on = {"two-variable and one-variable main conjectures (assumed)", "conditions (a) and (b)"};
    }
    if (r.a.status == "inconclusive" || r.b.status == "inconclusive") r.verdict = "inconclusive";
    else if (r.a.status != "holds" || r.b.status != "holds") r.verdict = "not-established";
    else if (r.route == "main-conjectures") r.verdict = "conditional";
    else r.verdict = "verified-under-stated-route";
    return r;
}

}  // namespace iwb
