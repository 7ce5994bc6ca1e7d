#ifndef GEOFLOW_RATIONAL_HPP
#define GEOFLOW_RATIONAL_HPP

#include <gmpxx.h>

#include <iosfwd>
#include <string>
#include <string_view>

#include "geoflow/errors.hpp"

namespace geoflow {

/// Exact rational number with arbitrary-precision integer parts.
///
/// Invariants: gcd(|num|, den) = 1, den > 0, zero is 0/1. Kept canonical
/// by construction; the GMP mpq type does the heavy lifting.
class BigRational {
public:
    BigRational() : q_(0) {}
    BigRational(long n) : q_(n) {}
    BigRational(long n, long d);
    explicit BigRational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }
    explicit BigRational(const mpz_class& n) : q_(n) {}
    BigRational(const mpz_class& n, const mpz_class& d);

    /// Parse "123", "-7/4" or a decimal literal like "0.25" (exactly 1/4).
    static BigRational from_string(std::string_view text);
    /// Exact conversion; every finite double is a dyadic rational.
    static BigRational from_double(double x);

    const mpz_class numerator() const { return q_.get_num(); }
    const mpz_class denominator() const { return q_.get_den(); }
    const mpq_class& raw() const { return q_; }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_one() const { return q_ == 1; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }

    BigRational operator-() const { return BigRational(mpq_class(-q_)); }
    BigRational abs() const { return BigRational(mpq_class(::abs(q_))); }
    BigRational reciprocal() const;

    BigRational& operator+=(const BigRational& o) { q_ += o.q_; return *this; }
    BigRational& operator-=(const BigRational& o) { q_ -= o.q_; return *this; }
    BigRational& operator*=(const BigRational& o) { q_ *= o.q_; return *this; }
    BigRational& operator/=(const BigRational& o);

    friend BigRational operator+(BigRational a, const BigRational& b) { return a += b; }
    friend BigRational operator-(BigRational a, const BigRational& b) { return a -= b; }
    friend BigRational operator*(BigRational a, const BigRational& b) { return a *= b; }
    friend BigRational operator/(BigRational a, const BigRational& b) { return a /= b; }

    friend bool operator==(const BigRational& a, const BigRational& b) { return a.q_ == b.q_; }
    friend bool operator!=(const BigRational& a, const BigRational& b) { return a.q_ != b.q_; }
    friend bool operator<(const BigRational& a, const BigRational& b) { return a.q_ < b.q_; }
    friend bool operator<=(const BigRational& a, const BigRational& b) { return a.q_ <= b.q_; }
    friend bool operator>(const BigRational& a, const BigRational& b) { return a.q_ > b.q_; }
    friend bool operator>=(const BigRational& a, const BigRational& b) { return a.q_ >= b.q_; }

    /// Round-to-nearest (ties to even) conversion to double.
    double to_double() const;

    /// "p" for integers, "p/q" otherwise; re-parseable.
    std::string str() const;

    friend std::ostream& operator<<(std::ostream& os, const BigRational& r);

private:
    mpq_class q_;
};

} // namespace geoflow

#endif
