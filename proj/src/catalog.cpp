#include "geoflow/catalog.hpp"

#include "geoflow/expression.hpp"

namespace geoflow::catalog {

namespace {
RfMatrix conformal2(const std::vector<std::string>& vars, const RationalFunction& lambda) {
    RfMatrix g(2, std::vector<RationalFunction>(2, RationalFunction::zero(vars)));
    g[0][0] = lambda;
    g[1][1] = lambda;
    return g;
}
} // namespace

ChartMetric euclidean(std::size_t n) {
    std::vector<std::string> vars;
    if (n <= 3) {
        const char* names[] = {"x", "y", "z"};
        for (std::size_t i = 0; i < n; ++i) vars.push_back(names[i]);
    } else {
        for (std::size_t i = 1; i <= n; ++i) vars.push_back("q" + std::to_string(i));
    }
    return ChartMetric(vars, rf_identity(vars, n));
}

ChartMetric halfplane() {
    std::vector<std::string> vars{"x", "y"};
    RationalFunction lambda = parse_rational_function("1/y^2", vars);
    return ChartMetric(vars, conformal2(vars, lambda));
}

ChartMetric poincare_disk() {
    std::vector<std::string> vars{"x", "y"};
    RationalFunction lambda = parse_rational_function("4/(1 - x^2 - y^2)^2", vars);
    return ChartMetric(vars, conformal2(vars, lambda));
}

ChartMetric stereographic_sphere(const BigRational& r) {
    std::vector<std::string> vars{"u", "v"};
    BigRational r2 = r * r;
    BigRational four_r4 = BigRational(4) * r2 * r2;
    Polynomial den = Polynomial::constant(vars, r2) + Polynomial::variable(vars, std::size_t{0}).pow(2) +
                     Polynomial::variable(vars, std::size_t{1}).pow(2);
    RationalFunction lambda(Polynomial::constant(vars, four_r4), den.pow(2));
    return ChartMetric(vars, conformal2(vars, lambda));
}

ChartMetric mixed2() {
    std::vector<std::string> vars{"x", "y"};
    RfMatrix g(2, std::vector<RationalFunction>(2));
    g[0][0] = parse_rational_function("1", vars);
    g[0][1] = parse_rational_function("x", vars);
    g[1][0] = parse_rational_function("x", vars);
    g[1][1] = parse_rational_function("1 + x^2", vars);
    return ChartMetric(vars, g);
}

ChartMetric flat_torus() {
    std::vector<std::string> vars{"x", "y"};
    std::vector<std::optional<BigRational>> periods{BigRational(1), BigRational(1)};
    return ChartMetric(vars, rf_identity(vars, 2), std::nullopt, periods);
}

EmbeddedVariety unit_sphere() {
    auto vars = default_ambient_names(3);
    Polynomial f = parse_rational_function("x1^2 + x2^2 + x3^2 - 1", vars).num();
    return EmbeddedVariety(3, {f});
}

EmbeddedVariety saddle_graph() {
    auto vars = default_ambient_names(3);
    Polynomial f = parse_rational_function("x3 - x1*x2", vars).num();
    return EmbeddedVariety(3, {f});
}

EmbeddedVariety flat_plane() {
    auto vars = default_ambient_names(3);
    Polynomial f = parse_rational_function("x3", vars).num();
    return EmbeddedVariety(3, {f});
}

} // namespace geoflow::catalog
