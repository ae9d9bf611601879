#pragma once

#include <algorithm>
#include <climits>
#include <ostream>
#include <string>

#include "iwb/arith.hpp"

namespace iwb {

/// Element of Q_p with an explicit precision.
///
/// A nonzero scalar is unit * p^valuation with the unit known modulo
/// p^relative_precision. Two kinds of zero exist: the exact zero, and
/// O(p^k) ("zero within precision"), which only bounds the valuation from
/// below. Arithmetic propagates precision and never invents digits.
class PadicScalar {
   public:
    PadicScalar() = default;

    static PadicScalar exact_zero(long p) {
        PadicScalar s;
        s.p_ = p;
        s.kind_ = Kind::ExactZero;
        return s;
    }

    static PadicScalar zero_mod(long p, long absolute_precision) {
        PadicScalar s;
        s.p_ = p;
        s.kind_ = Kind::Inexact;
        s.val_ = absolute_precision;
        s.rel_ = 0;
        return s;
    }

    static PadicScalar from_integer(long p, const Integer& n, long rel_prec) {
        if (n == 0) return exact_zero(p);
        Integer u = n;
        long v = remove_factor(u, p);
        return from_unit(p, u, v, rel_prec);
    }

    static PadicScalar from_rational(long p, const Rational& q, long rel_prec) {
        if (q == 0) return exact_zero(p);
        Integer num = q.get_num(), den = q.get_den();
        long v = remove_factor(num, p) - remove_factor(den, p);
        Integer mod = ipow_big(p, rel_prec);
        Integer u = mod_nonneg(num * inverse_mod(den, mod), mod);
        return from_unit(p, u, v, rel_prec);
    }

    // unit must be prime to p; it is reduced modulo p^rel_prec.
    static PadicScalar from_unit(long p, const Integer& unit, long valuation, long rel_prec) {
        require(rel_prec >= 1, ErrorKind::PrecisionLoss, "scalar with no known digits");
        PadicScalar s;
        s.p_ = p;
        s.kind_ = Kind::Inexact;
        s.val_ = valuation;
        s.rel_ = rel_prec;
        s.unit_ = mod_nonneg(unit, ipow_big(p, rel_prec));
        require(s.unit_ % p != 0, ErrorKind::Internal, "unit part divisible by p");
        return s;
    }

    // Value known modulo p^absolute_precision; value is an integer residue.
    static PadicScalar from_residue(long p, const Integer& value, long absolute_precision) {
        Integer r = mod_nonneg(value, ipow_big(p, absolute_precision));
        if (r == 0) return zero_mod(p, absolute_precision);
        long v = remove_factor(r, p);
        return from_unit(p, r, v, absolute_precision - v);
    }

    long prime() const { return p_; }
    bool is_exact_zero() const { return kind_ == Kind::ExactZero; }
    bool is_zero() const { return kind_ == Kind::ExactZero || rel_ == 0; }

    // For O(p^k) this is the lower bound k.
    long valuation() const { return kind_ == Kind::ExactZero ? LONG_MAX : val_; }
    long relative_precision() const { return kind_ == Kind::ExactZero ? LONG_MAX : rel_; }
    long absolute_precision() const { return kind_ == Kind::ExactZero ? LONG_MAX : val_ + rel_; }
    const Integer& unit() const { return unit_; }

    // True when the valuation is an actual value rather than a lower bound.
    bool valuation_known() const { return !is_zero(); }

    Rational to_rational() const {
        if (is_zero()) return Rational(0);
        Rational r(unit_);
        if (val_ >= 0)
            r *= Rational(ipow_big(p_, val_));
        else
            r /= Rational(ipow_big(p_, -val_));
        return r;
    }

    PadicScalar with_absolute_precision(long abs_prec) const {
        if (kind_ == Kind::ExactZero) return *this;
        if (abs_prec >= absolute_precision()) return *this;
        if (is_zero() || abs_prec <= val_) return zero_mod(p_, std::min(abs_prec, absolute_precision()));
        return from_unit(p_, unit_, val_, abs_prec - val_);
    }

    PadicScalar operator-() const {
        if (is_zero()) return *this;
        PadicScalar s = *this;
        s.unit_ = mod_nonneg(-unit_, ipow_big(p_, rel_));
        return s;
    }

    friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
        if (a.is_exact_zero()) return b;
        if (b.is_exact_zero()) return a;
        check_same_prime(a, b);
        long p = a.p_;
        long abs = std::min(a.absolute_precision(), b.absolute_precision());
        long m = std::min(a.val_, b.val_);
        if (abs <= m) return zero_mod(p, abs);
        Integer s = 0;
        if (!a.is_zero()) s += a.unit_ * ipow_big(p, a.val_ - m);
        if (!b.is_zero()) s += b.unit_ * ipow_big(p, b.val_ - m);
        s = mod_nonneg(s, ipow_big(p, abs - m));
        if (s == 0) return zero_mod(p, abs);
        long v = remove_factor(s, p);
        return from_unit(p, s, m + v, abs - m - v);
    }

    friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) { return a + (-b); }

    friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
        if (a.is_exact_zero() || b.is_exact_zero()) return exact_zero(a.is_exact_zero() ? a.p_ : b.p_);
        check_same_prime(a, b);
        long p = a.p_;
        // v(a) and v(b) are exact or lower bounds; either way their sum bounds the product.
        if (a.is_zero() || b.is_zero()) return zero_mod(p, a.val_ + b.val_);
        long rel = std::min(a.rel_, b.rel_);
        return from_unit(p, a.unit_ * b.unit_, a.val_ + b.val_, rel);
    }

    friend PadicScalar operator/(const PadicScalar& a, const PadicScalar& b) {
        require(!b.is_zero(), ErrorKind::PrecisionLoss, "division by a scalar indistinguishable from zero");
        if (a.is_exact_zero()) return a;
        check_same_prime(a, b);
        long p = a.p_;
        if (a.is_zero()) return zero_mod(p, a.val_ - b.val_);
        long rel = std::min(a.rel_, b.rel_);
        Integer mod = ipow_big(p, rel);
        return from_unit(p, a.unit_ * inverse_mod(b.unit_, mod), a.val_ - b.val_, rel);
    }

    // Product with an exact integer.
    PadicScalar scaled_by(const Integer& m) const {
        if (is_exact_zero() || m == 0) return exact_zero(p_);
        Integer u = m;
        long v = remove_factor(u, p_);
        if (is_zero()) return zero_mod(p_, val_ + v);
        return from_unit(p_, unit_ * u, val_ + v, rel_);
    }

    PadicScalar& operator+=(const PadicScalar& o) { return *this = *this + o; }
    PadicScalar& operator-=(const PadicScalar& o) { return *this = *this - o; }
    PadicScalar& operator*=(const PadicScalar& o) { return *this = *this * o; }

    // Agreement up to the smaller absolute precision of the two operands.
    bool agrees_with(const PadicScalar& o) const { return (*this - o).is_zero(); }

    std::string to_string() const {
        if (is_exact_zero()) return "0";
        if (is_zero()) return "O(" + std::to_string(p_) + "^" + std::to_string(val_) + ")";
        std::string s = unit_.get_str();
        if (val_ != 0) s += "*" + std::to_string(p_) + "^" + std::to_string(val_);
        s += " + O(" + std::to_string(p_) + "^" + std::to_string(absolute_precision()) + ")";
        return s;
    }

    friend std::ostream& operator<<(std::ostream& os, const PadicScalar& s) { return os << s.to_string(); }

   private:
    enum class Kind { ExactZero, Inexact };

    static void check_same_prime(const PadicScalar& a, const PadicScalar& b) {
        require(a.p_ == b.p_, ErrorKind::InvalidArgument, "mixing scalars of different primes");
    }

    long p_ = 0;
    Kind kind_ = Kind::ExactZero;
    long val_ = 0;
    long rel_ = 0;
    Integer unit_ = 0;
};

}  // namespace iwb
