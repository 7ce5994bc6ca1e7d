#ifndef GEOFLOW_POLYNOMIAL_HPP
#define GEOFLOW_POLYNOMIAL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geoflow/rational.hpp"

namespace geoflow {

/// Exponent tuple, one entry per variable of the owning polynomial.
using Monomial = std::vector<std::uint32_t>;

/// Graded lexicographic order over the declared variable order.
struct GrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Sparse multivariate polynomial over exact rationals.
///
/// Terms map exponent tuples to nonzero coefficients; the zero polynomial
/// has an empty term map. All arithmetic requires identical variable sets.
class Polynomial {
public:
    using TermMap = std::map<Monomial, BigRational, GrlexLess>;

    Polynomial() = default;
    explicit Polynomial(std::vector<std::string> vars) : vars_(std::move(vars)) {}

    static Polynomial zero(std::vector<std::string> vars) { return Polynomial(std::move(vars)); }
    static Polynomial constant(std::vector<std::string> vars, BigRational c);
    static Polynomial variable(std::vector<std::string> vars, std::size_t index);
    static Polynomial variable(std::vector<std::string> vars, const std::string& name);

    const std::vector<std::string>& variables() const { return vars_; }
    std::size_t nvars() const { return vars_.size(); }
    std::size_t variable_index(const std::string& name) const;
    const TermMap& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    /// Constant value; zero polynomial reports 0.
    BigRational constant_value() const;
    std::uint32_t total_degree() const;
    std::uint32_t degree_in(std::size_t var) const;

    void add_term(const Monomial& m, const BigRational& c);

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    Polynomial& operator*=(const Polynomial& o) { *this = *this * o; return *this; }
    Polynomial scaled(const BigRational& c) const;
    Polynomial pow(std::uint32_t e) const;

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.vars_ == b.vars_ && a.terms_ == b.terms_;
    }

    Polynomial differentiate(std::size_t var) const;
    Polynomial differentiate(const std::string& var) const;

    BigRational evaluate(const std::vector<BigRational>& point) const;
    double evaluate_double(const std::vector<double>& point) const;
    double evaluate_double(const double* point) const;

    /// gcd of coefficient numerators over lcm of denominators; content of
    /// the zero polynomial is 0. poly / content(poly) has coprime integer
    /// coefficients.
    BigRational content() const;
    /// Coefficient of the grlex-leading term (0 for the zero polynomial).
    BigRational leading_coefficient() const;
    /// Componentwise minimum exponent over all terms (all-zero if no terms).
    Monomial min_exponents() const;
    Polynomial divide_by_monomial(const Monomial& m) const;
    /// Exact polynomial division; nullopt if the remainder is nonzero.
    std::optional<Polynomial> divided_exactly_by(const Polynomial& d) const;

    /// Rebuild over a different variable set (a superset, possibly
    /// reordered). Throws VariableError if a used variable is missing.
    Polynomial with_variables(const std::vector<std::string>& vars) const;

    /// Canonical text form: grlex-descending terms, re-parseable.
    std::string str() const;

private:
    void check_same_vars(const Polynomial& o) const;

    std::vector<std::string> vars_;
    TermMap terms_;
};

} // namespace geoflow

#endif
