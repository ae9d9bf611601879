#pragma once

// Elliptic curves over Q in long Weierstrass form: invariants, naive point
// counting, and the local reduction type over Q_ell.

#include <array>
#include <climits>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "iwb/arith.hpp"

namespace iwb {

struct CurveInvariants {
    Integer b2, b4, b6, b8, c4, c6, disc;
};

class CurveData {
   public:
    CurveData(std::string label, std::array<long, 5> a, long conductor, long ap_bound = 100)
        : label_(std::move(label)), a_(a), conductor_(conductor) {
        require(conductor >= 1, ErrorKind::InvalidArgument, "conductor must be positive");
        inv_ = compute_invariants(a_);
        require(inv_.disc != 0, ErrorKind::InvalidArgument, "singular Weierstrass model for " + label_);
        for (long ell : primes_up_to(ap_bound))
            if (conductor_ % ell != 0) ap_cache_[ell] = trace_of_frobenius(ell);
    }

    const std::string& label() const { return label_; }
    const std::array<long, 5>& a_invariants() const { return a_; }
    long conductor() const { return conductor_; }
    const CurveInvariants& invariants() const { return inv_; }
    const std::map<long, long>& ap_cache() const { return ap_cache_; }

    bool has_good_reduction(long ell) const { return conductor_ % ell != 0; }

    /// ell + 1 - #E(F_ell) over all projective points of the reduced model,
    /// including a singular point if there is one.
    long trace_of_frobenius(long ell) const {
        require(is_prime(ell), ErrorKind::InvalidArgument, "ell must be prime");
        require(ell <= 100000, ErrorKind::Resource, "naive point counting is bounded at 1e5");
        long a1 = floor_mod(a_[0], ell), a2 = floor_mod(a_[1], ell), a3 = floor_mod(a_[2], ell);
        long a4 = floor_mod(a_[3], ell), a6 = floor_mod(a_[4], ell);
        long count = 1;  // point at infinity
        if (ell == 2) {
            for (long x = 0; x < 2; ++x)
                for (long y = 0; y < 2; ++y)
                    if (floor_mod(y * y + a1 * x * y + a3 * y - (x * x * x + a2 * x * x + a4 * x + a6), 2) == 0)
                        ++count;
            return ell + 1 - count;
        }
        // Number of square roots of every residue.
        std::vector<int> roots(static_cast<std::size_t>(ell), 0);
        for (long y = 0; y < ell; ++y) ++roots[mul_mod(y, y, ell)];
        for (long x = 0; x < ell; ++x) {
            // (2y + a1 x + a3)^2 = (a1 x + a3)^2 + 4 (x^3 + a2 x^2 + a4 x + a6)
            long lin = floor_mod(a1 * x + a3, ell);
            long rhs = floor_mod(mul_mod(mul_mod(x, x, ell), x, ell) + mul_mod(a2, mul_mod(x, x, ell), ell) +
                                     mul_mod(a4, x, ell) + a6,
                                 ell);
            long d = floor_mod(mul_mod(lin, lin, ell) + 4 * rhs, ell);
            count += roots[d];
        }
        return ell + 1 - count;
    }

    /// a_ell for a prime of good reduction.
    long ap(long ell) const {
        require(has_good_reduction(ell), ErrorKind::BadReduction,
                "a_" + std::to_string(ell) + " requested at a bad prime of " + label_);
        auto it = ap_cache_.find(ell);
        if (it != ap_cache_.end()) return it->second;
        return trace_of_frobenius(ell);
    }

    static CurveInvariants compute_invariants(const std::array<long, 5>& a) {
        Integer a1 = a[0], a2 = a[1], a3 = a[2], a4 = a[3], a6 = a[4];
        CurveInvariants v;
        v.b2 = a1 * a1 + 4 * a2;
        v.b4 = 2 * a4 + a1 * a3;
        v.b6 = a3 * a3 + 4 * a6;
        v.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        v.c4 = v.b2 * v.b2 - 24 * v.b4;
        v.c6 = -v.b2 * v.b2 * v.b2 + 36 * v.b2 * v.b4 - 216 * v.b6;
        v.disc = -v.b2 * v.b2 * v.b8 - 8 * v.b4 * v.b4 * v.b4 - 27 * v.b6 * v.b6 + 9 * v.b2 * v.b4 * v.b6;
        return v;
    }

   private:
    std::string label_;
    std::array<long, 5> a_;
    long conductor_;
    CurveInvariants inv_;
    std::map<long, long> ap_cache_;
};

/// a_ell = ell + 1 - #E(F_ell) for ell of good reduction.
inline long count_points(const CurveData& curve, long ell) {
    require(curve.has_good_reduction(ell), ErrorKind::BadReduction,
            std::to_string(ell) + " divides the conductor of " + curve.label());
    return curve.trace_of_frobenius(ell);
}

enum class ReductionType { Good, SplitMultiplicative, NonsplitMultiplicative, Additive };

inline std::string to_string(ReductionType t) {
    switch (t) {
        case ReductionType::Good: return "good";
        case ReductionType::SplitMultiplicative: return "split-mult";
        case ReductionType::NonsplitMultiplicative: return "nonsplit-mult";
        case ReductionType::Additive: return "additive";
    }
    return "?";
}

/// Is x (nonzero) a square in Q_ell?
inline bool is_square_qell(const Integer& x, long ell) {
    require(x != 0, ErrorKind::InvalidArgument, "square test of zero");
    Integer u = x;
    long v = remove_factor(u, ell);
    if (v % 2) return false;
    if (ell == 2) return mod_nonneg(u, 8) == 1;
    return mpz_legendre(u.get_mpz_t(), Integer(ell).get_mpz_t()) == 1;
}

struct LocalReduction {
    long ell;
    ReductionType type;
    long conductor_exponent;
    long disc_valuation_min;   // v_ell of the minimal discriminant
    long j_valuation;          // v_ell(j), LONG_MAX when j = 0
};

/// Reduction type over Q_ell, read from the conductor exponent; multiplicative
/// reduction is split iff -c6 is a square in Q_ell.
inline LocalReduction local_reduction(const CurveData& curve, long ell) {
    require(is_prime(ell), ErrorKind::InvalidArgument, "ell must be prime");
    const auto& inv = curve.invariants();
    LocalReduction r{ell, ReductionType::Good, 0, 0, 0};
    long n = curve.conductor();
    while (n % ell == 0) {
        n /= ell;
        ++r.conductor_exponent;
    }
    long vd = valuation(inv.disc, ell);
    long vc4 = inv.c4 == 0 ? LONG_MAX : valuation(inv.c4, ell);
    r.j_valuation = inv.c4 == 0 ? LONG_MAX : 3 * vc4 - vd;
    if (r.conductor_exponent == 0) {
        r.type = ReductionType::Good;
        r.disc_valuation_min = 0;
    } else if (r.conductor_exponent == 1) {
        require(vc4 != LONG_MAX && vc4 % 4 == 0, ErrorKind::InvalidArgument,
                "multiplicative model has unexpected c4 valuation");
        r.disc_valuation_min = vd - 12 * (vc4 / 4);
        r.type = is_square_qell(-inv.c6, ell) ? ReductionType::SplitMultiplicative
                                              : ReductionType::NonsplitMultiplicative;
    } else {
        // Not minimized: only the type is used downstream.
        r.type = ReductionType::Additive;
        r.disc_valuation_min = vd;
    }
    return r;
}

}  // namespace iwb
