#include "geoflow/rational.hpp"

#include <cmath>
#include <ostream>

namespace geoflow {

BigRational::BigRational(long n, long d) {
    if (d == 0) throw ZeroDenominator("rational with zero denominator");
    q_ = mpq_class(n, d);
    q_.canonicalize();
}

BigRational::BigRational(const mpz_class& n, const mpz_class& d) {
    if (d == 0) throw ZeroDenominator("rational with zero denominator");
    q_ = mpq_class(n) / mpq_class(d);
    q_.canonicalize();
}

BigRational BigRational::from_string(std::string_view text) {
    std::string s(text);
    auto dot = s.find('.');
    if (dot == std::string::npos) {
        // integer or p/q
        mpq_class q;
        if (q.set_str(s, 10) != 0) throw ParseError("malformed number '" + s + "'", 0);
        q.canonicalize();
        if (q.get_den() == 0) throw ZeroDenominator("rational with zero denominator");
        return BigRational(q);
    }
    bool neg = false;
    std::string_view body(s);
    if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
        neg = body[0] == '-';
        body.remove_prefix(1);
        dot -= 1;
    }
    std::string digits;
    std::size_t frac_len = 0;
    for (std::size_t i = 0; i < body.size(); ++i) {
        char c = body[i];
        if (c == '.') continue;
        if (c < '0' || c > '9') throw ParseError("malformed number '" + s + "'", i);
        digits.push_back(c);
        if (i > dot) ++frac_len;
    }
    if (digits.empty()) throw ParseError("malformed number '" + s + "'", 0);
    mpz_class num(digits, 10);
    mpz_class den = 1;
    for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
    if (neg) num = -num;
    return BigRational(num, den);
}

BigRational BigRational::from_double(double x) {
    if (!std::isfinite(x)) throw Error("cannot convert non-finite double to rational");
    mpq_class q;
    mpq_set_d(q.get_mpq_t(), x);
    return BigRational(q);
}

BigRational BigRational::reciprocal() const {
    if (is_zero()) throw ZeroDenominator("reciprocal of zero");
    return BigRational(mpq_class(1) / q_);
}

BigRational& BigRational::operator/=(const BigRational& o) {
    if (o.is_zero()) throw ZeroDenominator("division by zero rational");
    q_ /= o.q_;
    return *this;
}

namespace {
std::size_t bit_length(const mpz_class& z) {
    return mpz_sizeinbase(z.get_mpz_t(), 2);
}
} // namespace

double BigRational::to_double() const {
    if (is_zero()) return 0.0;
    mpz_class n = q_.get_num();
    mpz_class d = q_.get_den();
    bool neg = n < 0;
    if (neg) n = -n;

    // Build a 53..55-bit truncated quotient, then round to 53 bits
    // (ties to even, remainder as sticky). ldexp of a <=53-bit integer
    // is exact, so the result is the nearest double.
    long shift = 54 - (static_cast<long>(bit_length(n)) - static_cast<long>(bit_length(d)));
    if (shift > 0)
        n <<= static_cast<unsigned long>(shift);
    else
        d <<= static_cast<unsigned long>(-shift);
    mpz_class quo, rem;
    mpz_fdiv_qr(quo.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    long e2 = -shift;

    long drop = static_cast<long>(bit_length(quo)) - 53;
    if (drop > 0) {
        mpz_class low, high;
        mpz_fdiv_r_2exp(low.get_mpz_t(), quo.get_mpz_t(), static_cast<mp_bitcnt_t>(drop));
        mpz_fdiv_q_2exp(high.get_mpz_t(), quo.get_mpz_t(), static_cast<mp_bitcnt_t>(drop));
        mpz_class half = mpz_class(1) << static_cast<unsigned long>(drop - 1);
        int c = cmp(low, half);
        bool sticky = rem != 0;
        bool up = c > 0 || (c == 0 && (sticky || mpz_odd_p(high.get_mpz_t())));
        if (up) high += 1;
        quo = high;
        e2 += drop;
    } else {
        mpz_class twice = rem << 1;
        int c = cmp(twice, d);
        bool up = c > 0 || (c == 0 && mpz_odd_p(quo.get_mpz_t()));
        if (up) quo += 1;
    }
    if (bit_length(quo) > 53) { // rounding carried into 2^53: still exact
        quo >>= 1;
        e2 += 1;
    }
    double m = quo.get_d();
    double v = std::ldexp(m, static_cast<int>(e2));
    return neg ? -v : v;
}

std::string BigRational::str() const {
    if (is_integer()) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const BigRational& r) {
    return os << r.str();
}

} // namespace geoflow
