#include "geoflow/rational_function.hpp"

#include "geoflow/parallel.hpp"

namespace geoflow {

RationalFunction::RationalFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (num_.variables() != den_.variables())
        throw VariableError("numerator/denominator variable sets differ");
    if (den_.is_zero()) throw ZeroDenominator("rational function with zero denominator");
    normalize();
}

RationalFunction::RationalFunction(Polynomial num)
    : num_(std::move(num)), den_(Polynomial::constant(num_.variables(), BigRational(1))) {}

void RationalFunction::normalize() {
    if (num_.is_zero()) {
        den_ = Polynomial::constant(num_.variables(), BigRational(1));
        return;
    }
    // shared monomial factor
    Monomial mn = num_.min_exponents();
    Monomial md = den_.min_exponents();
    Monomial shared(mn.size());
    bool any = false;
    for (std::size_t i = 0; i < mn.size(); ++i) {
        shared[i] = std::min(mn[i], md[i]);
        any = any || shared[i] > 0;
    }
    if (any) {
        num_ = num_.divide_by_monomial(shared);
        den_ = den_.divide_by_monomial(shared);
    }
    // cheap exact-division cancellations (not a full gcd)
    if (!den_.is_constant()) {
        if (auto q = num_.divided_exactly_by(den_)) {
            num_ = std::move(*q);
            den_ = Polynomial::constant(num_.variables(), BigRational(1));
        } else if (auto r = den_.divided_exactly_by(num_)) {
            den_ = std::move(*r);
            num_ = Polynomial::constant(num_.variables(), BigRational(1));
        }
    }
    // scale both parts so den is primitive-integer with positive lead
    BigRational c = den_.content();
    if (den_.leading_coefficient().sign() < 0) c = -c;
    BigRational inv = c.reciprocal();
    num_ = num_.scaled(inv);
    den_ = den_.scaled(inv);
}

RationalFunction RationalFunction::operator-() const {
    RationalFunction r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw ZeroDenominator("division by the zero rational function");
    return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
}

RationalFunction RationalFunction::scaled(const BigRational& c) const {
    if (c.is_zero()) return zero(variables());
    RationalFunction r;
    r.num_ = num_.scaled(c);
    r.den_ = den_;
    return r;
}

RationalFunction RationalFunction::pow(std::uint32_t e) const {
    return RationalFunction(num_.pow(e), den_.pow(e));
}

RationalFunction RationalFunction::reciprocal() const {
    if (is_zero()) throw ZeroDenominator("reciprocal of the zero rational function");
    return RationalFunction(den_, num_);
}

bool RationalFunction::equals(const RationalFunction& o) const {
    if (variables() != o.variables())
        throw VariableError("equals() requires a common variable set");
    return (num_ * o.den_ - o.num_ * den_).is_zero();
}

RationalFunction RationalFunction::differentiate(std::size_t var) const {
    Polynomial dn = num_.differentiate(var);
    Polynomial dd = den_.differentiate(var);
    if (dd.is_zero()) return RationalFunction(std::move(dn), den_);
    return RationalFunction(dn * den_ - num_ * dd, den_ * den_);
}

RationalFunction RationalFunction::differentiate(const std::string& var) const {
    return differentiate(num_.variable_index(var));
}

BigRational RationalFunction::evaluate_exact(const std::vector<BigRational>& point) const {
    BigRational d = den_.evaluate(point);
    if (d.is_zero())
        throw PoleError("denominator vanishes at evaluation point (outside regular locus)");
    return num_.evaluate(point) / d;
}

double RationalFunction::evaluate_double(const std::vector<double>& point) const {
    return num_.evaluate_double(point) / den_.evaluate_double(point);
}

double RationalFunction::evaluate_double(const double* point) const {
    return num_.evaluate_double(point) / den_.evaluate_double(point);
}

RationalFunction RationalFunction::substitute(const std::vector<RationalFunction>& images) const {
    if (images.size() != variables().size())
        throw VariableError("substitution image count mismatch");
    const std::vector<std::string>& tvars =
        images.empty() ? variables() : images.front().variables();
    for (const auto& im : images)
        if (im.variables() != tvars)
            throw VariableError("substitution images must share one variable set");

    auto subst_poly = [&](const Polynomial& p) {
        RationalFunction acc = RationalFunction::zero(tvars);
        for (const auto& [m, c] : p.terms()) {
            RationalFunction t = RationalFunction::constant(tvars, c);
            for (std::size_t i = 0; i < m.size(); ++i)
                if (m[i] > 0) t = t * images[i].pow(m[i]);
            acc = acc + t;
        }
        return acc;
    };
    RationalFunction d = subst_poly(den_);
    if (d.is_zero())
        throw ZeroDenominator("substitution makes the denominator identically zero");
    return subst_poly(num_) / d;
}

RationalFunction RationalFunction::with_variables(const std::vector<std::string>& vars) const {
    return RationalFunction(num_.with_variables(vars), den_.with_variables(vars));
}

std::string RationalFunction::str() const {
    if (den_.is_constant() && den_.constant_value().is_one()) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

std::vector<BigRational> evaluate_batch(const RationalFunction& f,
                                        const std::vector<std::vector<BigRational>>& points) {
    std::vector<BigRational> out(points.size());
    parallel_for(points.size(), [&](std::size_t i) { out[i] = f.evaluate_exact(points[i]); });
    return out;
}

} // namespace geoflow
