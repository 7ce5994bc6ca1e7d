#ifndef GEOFLOW_SYMPLECTIC_HPP
#define GEOFLOW_SYMPLECTIC_HPP

#include <memory>
#include <optional>
#include <utility>

#include "geoflow/geometry.hpp"

namespace geoflow {

/// Sign convention for the Hamiltonian vector field.
///
/// Mechanics (default): xdot_i = dH/dp_i, pdot_i = -dH/dx_i, matching the
/// classical geodesic flow. PaperLiteral flips every sign (the field dual
/// to dH under omega(v, .) with omega = sum dp_i ^ dx_i); orbit-level
/// results coincide for geodesic Hamiltonians by time reversibility.
enum class SignConvention { Mechanics, PaperLiteral };

/// 1-form with rational-function coefficients over the 2n phase variables.
struct OneForm {
    std::vector<std::string> vars;
    std::vector<RationalFunction> coeff; // coefficient on dz_a
};

/// Antisymmetric 2-form: omega(e_a, e_b) = matrix[a][b].
struct TwoForm {
    std::vector<std::string> vars;
    RfMatrix matrix;

    bool is_antisymmetric() const;
};

/// Phase variable names (x..., p...) for an n-dim configuration space.
std::vector<std::string> phase_variables(const std::vector<std::string>& config_vars);

/// theta = sum p_i dx_i and omega = d theta = sum dp_i ^ dx_i on the
/// canonical phase variables x1..xn, p_x1..p_xn.
std::pair<OneForm, TwoForm> canonical_structure(std::size_t n);

/// (d theta)_{ab} = d_a theta_b - d_b theta_a.
TwoForm exterior_derivative(const OneForm& theta);

/// Hamiltonian system on 2n phase variables with its derived vector field.
class HamiltonianSystem {
public:
    HamiltonianSystem(std::size_t n, std::vector<std::string> phase_vars, RationalFunction h,
                      SignConvention convention, std::optional<Polynomial> guard = std::nullopt);

    std::size_t config_dim() const { return n_; }
    std::size_t phase_dim() const { return 2 * n_; }
    const std::vector<std::string>& variables() const { return vars_; }
    const RationalFunction& hamiltonian() const { return h_; }
    /// 2n components ordered (xdot..., pdot...).
    const std::vector<RationalFunction>& field() const { return field_; }
    SignConvention convention() const { return convention_; }
    const std::optional<Polynomial>& guard() const { return guard_; }

    /// X_H(H); identically zero for every well-formed system (exact).
    RationalFunction hamiltonian_derivative() const;

    /// Exact check H(x, t p) = t^2 H(x, p) as an identity in 2n+1 variables.
    bool is_fiberwise_quadratic() const;

    /// Set for geodesic systems; used for phase-metric norms and distances.
    std::shared_ptr<const ChartMetric> chart() const { return chart_; }
    void attach_chart(std::shared_ptr<const ChartMetric> c) { chart_ = std::move(c); }

    const std::optional<RationalFunction>& potential() const { return potential_; }
    void set_potential_tag(RationalFunction v) { potential_ = std::move(v); }

private:
    std::size_t n_;
    std::vector<std::string> vars_;
    RationalFunction h_;
    SignConvention convention_;
    std::optional<Polynomial> guard_;
    std::vector<RationalFunction> field_;
    std::shared_ptr<const ChartMetric> chart_;
    std::optional<RationalFunction> potential_;
};

/// Build the Hamiltonian field of H over 2n declared variables.
HamiltonianSystem hamiltonian_vector_field(const RationalFunction& h, std::size_t n,
                                           SignConvention convention = SignConvention::Mechanics);

/// H = 1/2 sum g^{ij}(x) p_i p_j + V(x) in cotangent coordinates via the
/// musical isomorphism; V (if given) must depend only on chart variables.
HamiltonianSystem geodesic_hamiltonian(const ChartMetric& m,
                                       const std::optional<RationalFunction>& potential = std::nullopt,
                                       SignConvention convention = SignConvention::Mechanics);

/// Verification record for the fiber rescaling psi_b : (x, p) -> (x, b p).
struct RescalingReport {
    BigRational b;
    bool hamiltonian_scales = false;    // H o psi_b = b^2 H
    bool field_pullback_matches = false; // psi_b^* X_g = b X_g componentwise
    bool verified() const { return hamiltonian_scales && field_pullback_matches; }
};

/// Requires a fiberwise degree-2 homogeneous H (potential-free geodesic
/// system) and b != 0; throws Error otherwise. Verifies exactly that
/// H o psi_b = b^2 H and that the x-components of X_g compose to b X_g and
/// the p-components to b^2 X_g, i.e. psi_b^* X_g = b X_g.
RescalingReport fiber_rescaling(const HamiltonianSystem& sys, const BigRational& b);

/// psi_b on a numeric phase state (x unchanged, p scaled by b).
std::vector<double> apply_fiber_scaling(const std::vector<double>& state, std::size_t n, double b);

/// C(x, p) = sum g^{ij} p_i p_j - 1 = 2 H_g - 1; vanishes on the unitary
/// bundle and is conserved exactly by the geodesic field.
RationalFunction sphere_bundle_constraint(const ChartMetric& m);

/// Second-order geodesic field over (x, v): xdot = v, vdot^k = -G^k_{ij} v^i v^j.
struct SecondOrderField {
    std::vector<std::string> vars; // (x..., v...)
    std::vector<RationalFunction> components;
};

SecondOrderField second_order_geodesic_field(const ChartMetric& m);

/// Exact identity between the Hamiltonian field and the second-order field
/// under the Legendre substitution p = g v.
bool legendre_consistency(const ChartMetric& m);

} // namespace geoflow

#endif
