#ifndef GEOFLOW_EXPRESSION_HPP
#define GEOFLOW_EXPRESSION_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "geoflow/rational_function.hpp"

namespace geoflow {

enum class ExprKind { Variable, Literal, Add, Sub, Mul, Div, Pow, Neg };

/// Parsed expression node. Power exponents are non-negative integers;
/// variable names are drawn from the declared variable set.
struct ExpressionTree {
    ExprKind kind;
    std::size_t var_index = 0;   // Variable
    BigRational literal;         // Literal
    std::uint32_t exponent = 0;  // Pow
    std::vector<std::unique_ptr<ExpressionTree>> children;

    std::size_t arity() const { return children.size(); }
};

/// Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' uint)?
///   base   := name | number | '(' expr ')' | '-' base
/// Numbers are integers or decimal literals; decimals convert exactly.
/// Throws ParseError with byte offset on syntax errors, unknown variable
/// names, and negative or fractional exponents.
std::unique_ptr<ExpressionTree> parse_expression(std::string_view text,
                                                 const std::vector<std::string>& variable_set);

/// Exact flattening; `div` combines via cross-multiplication.
/// Throws ZeroDenominator on division by an identically-zero polynomial.
RationalFunction to_rational_function(const ExpressionTree& tree,
                                      const std::vector<std::string>& variable_set);

/// Convenience: parse + flatten.
RationalFunction parse_rational_function(std::string_view text,
                                         const std::vector<std::string>& variable_set);

/// Canonical text form of the tree (mostly for diagnostics; rational
/// functions print themselves via RationalFunction::str()).
std::string to_string(const ExpressionTree& tree, const std::vector<std::string>& variable_set);

} // namespace geoflow

#endif
