#include "geoflow/expression.hpp"

#include <algorithm>
#include <cctype>

namespace geoflow {

namespace {

class Parser {
public:
    Parser(std::string_view text, const std::vector<std::string>& vars)
        : text_(text), vars_(vars) {}

    std::unique_ptr<ExpressionTree> run() {
        auto e = parse_expr();
        skip_ws();
        if (pos_ != text_.size())
            throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    std::unique_ptr<ExpressionTree> parse_expr() {
        auto left = parse_term();
        for (;;) {
            skip_ws();
            if (eat('+')) {
                left = binary(ExprKind::Add, std::move(left), parse_term());
            } else if (eat('-')) {
                left = binary(ExprKind::Sub, std::move(left), parse_term());
            } else {
                return left;
            }
        }
    }

    std::unique_ptr<ExpressionTree> parse_term() {
        auto left = parse_factor();
        for (;;) {
            skip_ws();
            if (eat('*')) {
                left = binary(ExprKind::Mul, std::move(left), parse_factor());
            } else if (eat('/')) {
                left = binary(ExprKind::Div, std::move(left), parse_factor());
            } else {
                return left;
            }
        }
    }

    std::unique_ptr<ExpressionTree> parse_factor() {
        auto base = parse_base();
        skip_ws();
        if (eat('^')) {
            skip_ws();
            std::size_t at = pos_;
            if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+'))
                throw ParseError("negative or fractional exponents are not allowed", at);
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                throw ParseError("expected a non-negative integer exponent", at);
            std::uint64_t e = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                e = e * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
                if (e > 1u << 20) throw ParseError("exponent too large", at);
                ++pos_;
            }
            if (pos_ < text_.size() && text_[pos_] == '.')
                throw ParseError("negative or fractional exponents are not allowed", at);
            auto node = std::make_unique<ExpressionTree>();
            node->kind = ExprKind::Pow;
            node->exponent = static_cast<std::uint32_t>(e);
            node->children.push_back(std::move(base));
            return node;
        }
        return base;
    }

    std::unique_ptr<ExpressionTree> parse_base() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
        char c = text_[pos_];
        if (c == '-') {
            ++pos_;
            auto node = std::make_unique<ExpressionTree>();
            node->kind = ExprKind::Neg;
            node->children.push_back(parse_base());
            return node;
        }
        if (c == '(') {
            ++pos_;
            auto e = parse_expr();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_name();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    std::unique_ptr<ExpressionTree> parse_number() {
        std::size_t start = pos_;
        bool saw_digit = false, saw_dot = false;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                saw_digit = true;
                ++pos_;
            } else if (c == '.' && !saw_dot) {
                saw_dot = true;
                ++pos_;
            } else {
                break;
            }
        }
        if (!saw_digit) throw ParseError("malformed number", start);
        auto node = std::make_unique<ExpressionTree>();
        node->kind = ExprKind::Literal;
        node->literal = BigRational::from_string(text_.substr(start, pos_ - start));
        return node;
    }

    std::unique_ptr<ExpressionTree> parse_name() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name(text_.substr(start, pos_ - start));
        auto it = std::find(vars_.begin(), vars_.end(), name);
        if (it == vars_.end())
            throw ParseError("unknown variable name '" + name + "'", start);
        auto node = std::make_unique<ExpressionTree>();
        node->kind = ExprKind::Variable;
        node->var_index = static_cast<std::size_t>(it - vars_.begin());
        return node;
    }

    static std::unique_ptr<ExpressionTree> binary(ExprKind kind,
                                                  std::unique_ptr<ExpressionTree> a,
                                                  std::unique_ptr<ExpressionTree> b) {
        auto node = std::make_unique<ExpressionTree>();
        node->kind = kind;
        node->children.push_back(std::move(a));
        node->children.push_back(std::move(b));
        return node;
    }

    std::string_view text_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
};

} // namespace

std::unique_ptr<ExpressionTree> parse_expression(std::string_view text,
                                                 const std::vector<std::string>& variable_set) {
    return Parser(text, variable_set).run();
}

RationalFunction to_rational_function(const ExpressionTree& tree,
                                      const std::vector<std::string>& vars) {
    switch (tree.kind) {
    case ExprKind::Variable:
        return RationalFunction::variable(vars, vars.at(tree.var_index));
    case ExprKind::Literal:
        return RationalFunction::constant(vars, tree.literal);
    case ExprKind::Add:
        return to_rational_function(*tree.children[0], vars) +
               to_rational_function(*tree.children[1], vars);
    case ExprKind::Sub:
        return to_rational_function(*tree.children[0], vars) -
               to_rational_function(*tree.children[1], vars);
    case ExprKind::Mul:
        return to_rational_function(*tree.children[0], vars) *
               to_rational_function(*tree.children[1], vars);
    case ExprKind::Div: {
        RationalFunction d = to_rational_function(*tree.children[1], vars);
        if (d.is_zero())
            throw ZeroDenominator("division by an identically-zero expression");
        return to_rational_function(*tree.children[0], vars) / d;
    }
    case ExprKind::Pow:
        return to_rational_function(*tree.children[0], vars).pow(tree.exponent);
    case ExprKind::Neg:
        return -to_rational_function(*tree.children[0], vars);
    }
    throw Error("corrupt expression tree");
}

RationalFunction parse_rational_function(std::string_view text,
                                         const std::vector<std::string>& variable_set) {
    return to_rational_function(*parse_expression(text, variable_set), variable_set);
}

std::string to_string(const ExpressionTree& t, const std::vector<std::string>& vars) {
    switch (t.kind) {
    case ExprKind::Variable: return vars.at(t.var_index);
    case ExprKind::Literal: return t.literal.str();
    case ExprKind::Add:
        return "(" + to_string(*t.children[0], vars) + " + " + to_string(*t.children[1], vars) + ")";
    case ExprKind::Sub:
        return "(" + to_string(*t.children[0], vars) + " - " + to_string(*t.children[1], vars) + ")";
    case ExprKind::Mul:
        return "(" + to_string(*t.children[0], vars) + "*" + to_string(*t.children[1], vars) + ")";
    case ExprKind::Div:
        return "(" + to_string(*t.children[0], vars) + "/" + to_string(*t.children[1], vars) + ")";
    case ExprKind::Pow:
        return to_string(*t.children[0], vars) + "^" + std::to_string(t.exponent);
    case ExprKind::Neg: return "-" + to_string(*t.children[0], vars);
    }
    return "?";
}

} // namespace geoflow
