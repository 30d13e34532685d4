#pragma once
#include <gmpxx.h>
#include <string>
#include <iosfwd>

#include "flagforge/errors.hpp"

namespace flagforge::exactring {

/* Arbitrary-precision rational scalar.  Canonical form is maintained by GMP:
 * denominator > 0, gcd(|num|, den) = 1.  Value type, totally ordered. */
class ExactRational {
public:
    ExactRational() : v_(0) {}
    ExactRational(long n) : v_(n) {}           // NOLINT: implicit by design
    ExactRational(long num, long den);
    explicit ExactRational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    /* Accepts "p" or "p/q", optional leading '-'. */
    static ExactRational from_string(const std::string& s);

    ExactRational operator-() const { return ExactRational(mpq_class(-v_)); }
    ExactRational& operator+=(const ExactRational& o) { v_ += o.v_; return *this; }
    ExactRational& operator-=(const ExactRational& o) { v_ -= o.v_; return *this; }
    ExactRational& operator*=(const ExactRational& o) { v_ *= o.v_; return *this; }
    ExactRational& operator/=(const ExactRational& o);

    friend ExactRational operator+(ExactRational a, const ExactRational& b) { return a += b; }
    friend ExactRational operator-(ExactRational a, const ExactRational& b) { return a -= b; }
    friend ExactRational operator*(ExactRational a, const ExactRational& b) { return a *= b; }
    friend ExactRational operator/(ExactRational a, const ExactRational& b) { return a /= b; }

    friend bool operator==(const ExactRational& a, const ExactRational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const ExactRational& a, const ExactRational& b) { return a.v_ != b.v_; }
    friend bool operator<(const ExactRational& a, const ExactRational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const ExactRational& a, const ExactRational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const ExactRational& a, const ExactRational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const ExactRational& a, const ExactRational& b) { return a.v_ >= b.v_; }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    int sign() const { return sgn(v_); }
    ExactRational abs() const { return ExactRational(mpq_class(::abs(v_))); }
    ExactRational inverse() const;

    std::string str() const;              // "p" or "p/q"
    std::string numerator_str() const { return v_.get_num().get_str(); }
    std::string denominator_str() const { return v_.get_den().get_str(); }
    double to_double() const { return v_.get_d(); }
    const mpq_class& raw() const { return v_; }

private:
    mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const ExactRational& r);

} // namespace flagforge::exactring
