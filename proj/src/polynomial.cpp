#include "geoflow/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace geoflow {

bool GrlexLess::operator()(const Monomial& a, const Monomial& b) const {
    std::uint64_t da = std::accumulate(a.begin(), a.end(), std::uint64_t{0});
    std::uint64_t db = std::accumulate(b.begin(), b.end(), std::uint64_t{0});
    if (da != db) return da < db;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Polynomial Polynomial::constant(std::vector<std::string> vars, BigRational c) {
    Polynomial p(std::move(vars));
    if (!c.is_zero()) p.terms_.emplace(Monomial(p.vars_.size(), 0), std::move(c));
    return p;
}

Polynomial Polynomial::variable(std::vector<std::string> vars, std::size_t index) {
    Polynomial p(std::move(vars));
    if (index >= p.vars_.size()) throw VariableError("variable index out of range");
    Monomial m(p.vars_.size(), 0);
    m[index] = 1;
    p.terms_.emplace(std::move(m), BigRational(1));
    return p;
}

Polynomial Polynomial::variable(std::vector<std::string> vars, const std::string& name) {
    Polynomial p(std::move(vars));
    return variable(p.vars_, p.variable_index(name));
}

std::size_t Polynomial::variable_index(const std::string& name) const {
    auto it = std::find(vars_.begin(), vars_.end(), name);
    if (it == vars_.end()) throw VariableError("unknown variable '" + name + "'");
    return static_cast<std::size_t>(it - vars_.begin());
}

bool Polynomial::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    const Monomial& m = terms_.begin()->first;
    return std::all_of(m.begin(), m.end(), [](std::uint32_t e) { return e == 0; });
}

BigRational Polynomial::constant_value() const {
    if (terms_.empty()) return BigRational(0);
    if (!is_constant()) throw Error("polynomial is not constant");
    return terms_.begin()->second;
}

std::uint32_t Polynomial::total_degree() const {
    std::uint32_t d = 0;
    for (const auto& [m, c] : terms_)
        d = std::max<std::uint32_t>(d, std::accumulate(m.begin(), m.end(), std::uint32_t{0}));
    return d;
}

std::uint32_t Polynomial::degree_in(std::size_t var) const {
    std::uint32_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m[var]);
    return d;
}

void Polynomial::add_term(const Monomial& m, const BigRational& c) {
    if (m.size() != vars_.size()) throw VariableError("exponent tuple arity mismatch");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void Polynomial::check_same_vars(const Polynomial& o) const {
    if (vars_ != o.vars_) throw VariableError("polynomial variable sets differ");
}

Polynomial Polynomial::operator-() const {
    Polynomial r(vars_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    check_same_vars(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    check_same_vars(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_same_vars(b);
    Polynomial r(a.vars_);
    Monomial m(a.vars_.size());
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
            r.add_term(m, ca * cb);
        }
    }
    return r;
}

Polynomial Polynomial::scaled(const BigRational& c) const {
    Polynomial r(vars_);
    if (c.is_zero()) return r;
    for (const auto& [m, coef] : terms_) r.terms_.emplace(m, coef * c);
    return r;
}

Polynomial Polynomial::pow(std::uint32_t e) const {
    Polynomial r = constant(vars_, BigRational(1));
    Polynomial base = *this;
    while (e > 0) {
        if (e & 1u) r = r * base;
        e >>= 1u;
        if (e > 0) base = base * base;
    }
    return r;
}

Polynomial Polynomial::differentiate(std::size_t var) const {
    if (var >= vars_.size()) throw VariableError("variable index out of range");
    Polynomial r(vars_);
    for (const auto& [m, c] : terms_) {
        if (m[var] == 0) continue;
        Monomial d = m;
        d[var] -= 1;
        r.add_term(d, c * BigRational(static_cast<long>(m[var])));
    }
    return r;
}

Polynomial Polynomial::differentiate(const std::string& var) const {
    return differentiate(variable_index(var));
}

BigRational Polynomial::evaluate(const std::vector<BigRational>& point) const {
    if (point.size() != vars_.size()) throw VariableError("evaluation point arity mismatch");
    BigRational acc(0);
    for (const auto& [m, c] : terms_) {
        BigRational t = c;
        for (std::size_t i = 0; i < m.size(); ++i) {
            for (std::uint32_t e = 0; e < m[i]; ++e) t *= point[i];
        }
        acc += t;
    }
    return acc;
}

double Polynomial::evaluate_double(const std::vector<double>& point) const {
    if (point.size() != vars_.size()) throw VariableError("evaluation point arity mismatch");
    return evaluate_double(point.data());
}

double Polynomial::evaluate_double(const double* point) const {
    double acc = 0.0;
    for (const auto& [m, c] : terms_) {
        double t = c.to_double();
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] != 0) t *= std::pow(point[i], static_cast<int>(m[i]));
        }
        acc += t;
    }
    return acc;
}

BigRational Polynomial::content() const {
    if (terms_.empty()) return BigRational(0);
    mpz_class num_gcd = 0, den_lcm = 1;
    for (const auto& [m, c] : terms_) {
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.numerator().get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.denominator().get_mpz_t());
    }
    return BigRational(num_gcd, den_lcm);
}

BigRational Polynomial::leading_coefficient() const {
    if (terms_.empty()) return BigRational(0);
    return terms_.rbegin()->second;
}

Monomial Polynomial::min_exponents() const {
    Monomial m(vars_.size(), 0);
    if (terms_.empty()) return m;
    m = terms_.begin()->first;
    for (const auto& [mm, c] : terms_)
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::min(m[i], mm[i]);
    return m;
}

Polynomial Polynomial::divide_by_monomial(const Monomial& m) const {
    Polynomial r(vars_);
    for (const auto& [mm, c] : terms_) {
        Monomial d = mm;
        for (std::size_t i = 0; i < d.size(); ++i) {
            if (d[i] < m[i]) throw Error("monomial does not divide polynomial term");
            d[i] -= m[i];
        }
        r.terms_.emplace(std::move(d), c);
    }
    return r;
}

std::optional<Polynomial> Polynomial::divided_exactly_by(const Polynomial& d) const {
    check_same_vars(d);
    if (d.is_zero()) throw ZeroDenominator("division by zero polynomial");
    Polynomial rem = *this;
    Polynomial quot(vars_);
    const Monomial& dlead = d.terms_.rbegin()->first;
    const BigRational& dcoef = d.terms_.rbegin()->second;
    while (!rem.is_zero()) {
        const Monomial& rlead = rem.terms_.rbegin()->first;
        Monomial q(vars_.size());
        for (std::size_t i = 0; i < q.size(); ++i) {
            if (rlead[i] < dlead[i]) return std::nullopt;
            q[i] = rlead[i] - dlead[i];
        }
        BigRational qc = rem.terms_.rbegin()->second / dcoef;
        Polynomial step(vars_);
        step.terms_.emplace(std::move(q), qc);
        quot += step;
        rem -= step * d;
    }
    return quot;
}

Polynomial Polynomial::with_variables(const std::vector<std::string>& vars) const {
    Polynomial r(vars);
    std::vector<std::size_t> where(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        auto it = std::find(vars.begin(), vars.end(), vars_[i]);
        if (it == vars.end()) {
            if (degree_in(i) > 0)
                throw VariableError("variable '" + vars_[i] + "' missing from target set");
            where[i] = 0;
        } else {
            where[i] = static_cast<std::size_t>(it - vars.begin());
        }
    }
    for (const auto& [m, c] : terms_) {
        Monomial t(vars.size(), 0);
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i] > 0) t[where[i]] += m[i];
        r.add_term(t, c);
    }
    return r;
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // grlex descending for a stable, human-friendly leading term
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const Monomial& m = it->first;
        const BigRational& c = it->second;
        BigRational a = c.abs();
        if (first) {
            if (c.sign() < 0) os << "-";
            first = false;
        } else {
            os << (c.sign() < 0 ? " - " : " + ");
        }
        bool has_vars = std::any_of(m.begin(), m.end(), [](std::uint32_t e) { return e > 0; });
        bool coef_shown = !a.is_one() || !has_vars;
        if (coef_shown) os << a.str();
        bool need_star = coef_shown;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (need_star) os << "*";
            os << vars_[i];
            if (m[i] > 1) os << "^" << m[i];
            need_star = true;
        }
    }
    return os.str();
}

} // namespace geoflow
