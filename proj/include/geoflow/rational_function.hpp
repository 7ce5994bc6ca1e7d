#ifndef GEOFLOW_RATIONAL_FUNCTION_HPP
#define GEOFLOW_RATIONAL_FUNCTION_HPP

#include <string>
#include <vector>

#include "geoflow/polynomial.hpp"

namespace geoflow {

/// Quotient of two polynomials over the same variable set.
///
/// The representation is normalized by cancelling common monomial factors
/// and by a scalar making the denominator a primitive integer polynomial
/// with positive leading coefficient. No full multivariate gcd is taken;
/// `equals` decides equality by cross-multiplication, which never needs it.
class RationalFunction {
public:
    RationalFunction() = default;
    RationalFunction(Polynomial num, Polynomial den);
    explicit RationalFunction(Polynomial num);

    static RationalFunction constant(std::vector<std::string> vars, BigRational c) {
        return RationalFunction(Polynomial::constant(std::move(vars), std::move(c)));
    }
    static RationalFunction variable(std::vector<std::string> vars, const std::string& name) {
        return RationalFunction(Polynomial::variable(std::move(vars), name));
    }
    static RationalFunction zero(std::vector<std::string> vars) {
        return RationalFunction(Polynomial::zero(std::move(vars)));
    }

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    const std::vector<std::string>& variables() const { return num_.variables(); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_constant(); }

    RationalFunction operator-() const;
    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
    RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
    RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
    RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
    RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }
    RationalFunction scaled(const BigRational& c) const;
    RationalFunction pow(std::uint32_t e) const;
    RationalFunction reciprocal() const;

    /// Exact equality as functions: num_a*den_b - num_b*den_a expands to 0.
    bool equals(const RationalFunction& o) const;

    /// Quotient rule, exact.
    RationalFunction differentiate(std::size_t var) const;
    RationalFunction differentiate(const std::string& var) const;

    /// Throws PoleError if the denominator vanishes at the point.
    BigRational evaluate_exact(const std::vector<BigRational>& point) const;
    double evaluate_double(const std::vector<double>& point) const;
    double evaluate_double(const double* point) const;

    /// Simultaneous substitution of every variable by a rational function
    /// over a common target variable set.
    RationalFunction substitute(const std::vector<RationalFunction>& images) const;
    RationalFunction with_variables(const std::vector<std::string>& vars) const;

    /// "num" when the denominator is 1, else "(num)/(den)"; re-parseable.
    std::string str() const;

private:
    void normalize();

    Polynomial num_;
    Polynomial den_;
};

/// Batch exact evaluation, parallel over points; results ordered by input index.
std::vector<BigRational> evaluate_batch(const RationalFunction& f,
                                        const std::vector<std::vector<BigRational>>& points);

} // namespace geoflow

#endif
