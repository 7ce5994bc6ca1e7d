#include "geoflow/symplectic.hpp"

namespace geoflow {

bool TwoForm::is_antisymmetric() const {
    for (std::size_t a = 0; a < matrix.size(); ++a)
        for (std::size_t b = a; b < matrix.size(); ++b)
            if (!matrix[a][b].equals(-matrix[b][a])) return false;
    return true;
}

std::vector<std::string> phase_variables(const std::vector<std::string>& config_vars) {
    std::vector<std::string> v = config_vars;
    for (const auto& name : config_vars) v.push_back("p_" + name);
    return v;
}

std::pair<OneForm, TwoForm> canonical_structure(std::size_t n) {
    if (n < 1) throw Error("canonical structure needs n >= 1");
    std::vector<std::string> config;
    for (std::size_t i = 1; i <= n; ++i) config.push_back("x" + std::to_string(i));
    std::vector<std::string> vars = phase_variables(config);

    OneForm theta;
    theta.vars = vars;
    theta.coeff.assign(2 * n, RationalFunction::zero(vars));
    for (std::size_t i = 0; i < n; ++i)
        theta.coeff[i] = RationalFunction::variable(vars, vars[n + i]); // p_i on dx_i

    TwoForm omega = exterior_derivative(theta);
    return {std::move(theta), std::move(omega)};
}

TwoForm exterior_derivative(const OneForm& theta) {
    std::size_t d = theta.coeff.size();
    TwoForm omega;
    omega.vars = theta.vars;
    omega.matrix.assign(d, std::vector<RationalFunction>(d, RationalFunction::zero(theta.vars)));
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
            omega.matrix[a][b] = theta.coeff[b].differentiate(a) - theta.coeff[a].differentiate(b);
    return omega;
}

HamiltonianSystem::HamiltonianSystem(std::size_t n, std::vector<std::string> phase_vars,
                                     RationalFunction h, SignConvention convention,
                                     std::optional<Polynomial> guard)
    : n_(n), vars_(std::move(phase_vars)), h_(std::move(h)), convention_(convention),
      guard_(std::move(guard)) {
    if (vars_.size() != 2 * n_)
        throw VariableError("phase variable count must be 2n");
    if (h_.variables() != vars_)
        throw VariableError("Hamiltonian must be declared over the 2n phase variables");
    field_.reserve(2 * n_);
    for (std::size_t i = 0; i < n_; ++i) field_.push_back(h_.differentiate(n_ + i));
    for (std::size_t i = 0; i < n_; ++i) field_.push_back(-h_.differentiate(i));
    if (convention_ == SignConvention::PaperLiteral)
        for (auto& c : field_) c = -c;
}

RationalFunction HamiltonianSystem::hamiltonian_derivative() const {
    RationalFunction acc = RationalFunction::zero(vars_);
    for (std::size_t a = 0; a < 2 * n_; ++a) acc += h_.differentiate(a) * field_[a];
    return acc;
}

bool HamiltonianSystem::is_fiberwise_quadratic() const {
    std::vector<std::string> ext = vars_;
    ext.push_back("_t");
    RationalFunction t = RationalFunction::variable(ext, "_t");
    std::vector<RationalFunction> images;
    for (std::size_t a = 0; a < 2 * n_; ++a) {
        RationalFunction za = RationalFunction::variable(ext, vars_[a]);
        images.push_back(a < n_ ? za : za * t);
    }
    RationalFunction lhs = h_.substitute(images);
    RationalFunction rhs = h_.with_variables(ext) * t * t;
    return lhs.equals(rhs);
}

HamiltonianSystem hamiltonian_vector_field(const RationalFunction& h, std::size_t n,
                                           SignConvention convention) {
    if (h.variables().size() != 2 * n)
        throw VariableError("Hamiltonian variable count does not match 2n");
    return HamiltonianSystem(n, h.variables(), h, convention);
}

HamiltonianSystem geodesic_hamiltonian(const ChartMetric& m,
                                       const std::optional<RationalFunction>& potential,
                                       SignConvention convention) {
    std::size_t n = m.dim();
    std::vector<std::string> vars = phase_variables(m.variables());
    RationalFunction h = RationalFunction::zero(vars);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            RationalFunction gij = m.inverse()[i][j].with_variables(vars);
            RationalFunction pi = RationalFunction::variable(vars, vars[n + i]);
            RationalFunction pj = RationalFunction::variable(vars, vars[n + j]);
            h += gij * pi * pj;
        }
    }
    h = h.scaled(BigRational(1, 2));
    if (potential) {
        for (const auto& pv : potential->variables()) {
            bool known = false;
            for (const auto& cv : m.variables()) known = known || cv == pv;
            if (!known)
                throw VariableError("potential must depend only on chart variables");
        }
        h += potential->with_variables(vars);
    }
    Polynomial guard = m.guard().with_variables(vars);
    HamiltonianSystem sys(n, vars, h, convention, guard);
    sys.attach_chart(std::make_shared<ChartMetric>(m));
    if (potential) sys.set_potential_tag(*potential);
    return sys;
}

RescalingReport fiber_rescaling(const HamiltonianSystem& sys, const BigRational& b) {
    if (b.is_zero()) throw Error("fiber rescaling requires b != 0");
    if (!sys.is_fiberwise_quadratic())
        throw Error("Hamiltonian is not fiberwise homogeneous of degree 2 "
                    "(potentials break the rescaling law)");
    std::size_t n = sys.config_dim();
    const auto& vars = sys.variables();

    std::vector<RationalFunction> psi;
    for (std::size_t a = 0; a < 2 * n; ++a) {
        RationalFunction za = RationalFunction::variable(vars, vars[a]);
        psi.push_back(a < n ? za : za.scaled(b));
    }

    RescalingReport rep;
    rep.b = b;
    rep.hamiltonian_scales = sys.hamiltonian().substitute(psi).equals(
        sys.hamiltonian().scaled(b * b));

    rep.field_pullback_matches = true;
    for (std::size_t a = 0; a < 2 * n; ++a) {
        BigRational scale = (a < n) ? b : b * b;
        if (!sys.field()[a].substitute(psi).equals(sys.field()[a].scaled(scale))) {
            rep.field_pullback_matches = false;
            break;
        }
    }
    return rep;
}

std::vector<double> apply_fiber_scaling(const std::vector<double>& state, std::size_t n,
                                        double b) {
    std::vector<double> out = state;
    for (std::size_t i = n; i < 2 * n && i < out.size(); ++i) out[i] *= b;
    return out;
}

RationalFunction sphere_bundle_constraint(const ChartMetric& m) {
    HamiltonianSystem sys = geodesic_hamiltonian(m);
    return sys.hamiltonian().scaled(BigRational(2)) -
           RationalFunction::constant(sys.variables(), BigRational(1));
}

SecondOrderField second_order_geodesic_field(const ChartMetric& m) {
    std::size_t n = m.dim();
    std::vector<std::string> vars = m.variables();
    for (const auto& name : m.variables()) vars.push_back("v_" + name);

    ChristoffelField gamma = christoffel(m);
    SecondOrderField f;
    f.vars = vars;
    f.components.assign(2 * n, RationalFunction::zero(vars));
    for (std::size_t i = 0; i < n; ++i)
        f.components[i] = RationalFunction::variable(vars, vars[n + i]);
    for (std::size_t k = 0; k < n; ++k) {
        RationalFunction acc = RationalFunction::zero(vars);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                RationalFunction gk = gamma.at(k, i, j).with_variables(vars);
                acc += gk * RationalFunction::variable(vars, vars[n + i]) *
                       RationalFunction::variable(vars, vars[n + j]);
            }
        f.components[n + k] = -acc;
    }
    return f;
}

bool legendre_consistency(const ChartMetric& m) {
    std::size_t n = m.dim();
    HamiltonianSystem ham = geodesic_hamiltonian(m);
    SecondOrderField so = second_order_geodesic_field(m);
    const auto& tvars = so.vars;

    // Legendre substitution p_i = g_ij v^j as images of the phase variables
    std::vector<RationalFunction> legendre;
    for (std::size_t i = 0; i < n; ++i)
        legendre.push_back(RationalFunction::variable(tvars, tvars[i]));
    for (std::size_t i = 0; i < n; ++i) {
        RationalFunction p = RationalFunction::zero(tvars);
        for (std::size_t j = 0; j < n; ++j)
            p += m.metric(i, j).with_variables(tvars) *
                 RationalFunction::variable(tvars, tvars[n + j]);
        legendre.push_back(p);
    }

    // xdot components must agree with v
    for (std::size_t i = 0; i < n; ++i) {
        if (!ham.field()[i].substitute(legendre).equals(so.components[i])) return false;
    }
    // pdot_i = d/dt (g_ij v^j) = dg_ij/dx_k v^k v^j + g_ij vdot^j
    for (std::size_t i = 0; i < n; ++i) {
        RationalFunction rhs = RationalFunction::zero(tvars);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k)
                rhs += m.metric(i, j).differentiate(k).with_variables(tvars) *
                       RationalFunction::variable(tvars, tvars[n + k]) *
                       RationalFunction::variable(tvars, tvars[n + j]);
            rhs += m.metric(i, j).with_variables(tvars) * so.components[n + j];
        }
        if (!ham.field()[n + i].substitute(legendre).equals(rhs)) return false;
    }
    return true;
}

} // namespace geoflow
