#ifndef GEOFLOW_INTEGRATE_HPP
#define GEOFLOW_INTEGRATE_HPP

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <optional>

#include "geoflow/embedded.hpp"
#include "geoflow/numeric_eval.hpp"
#include "geoflow/symplectic.hpp"

namespace geoflow {

enum class Method { ImplicitMidpoint, RK4, ConstrainedProjection };
enum class StopReason { Horizon, GuardExit, Divergence };

const char* method_name(Method m);
const char* stop_reason_name(StopReason r);

struct IntegratorConfig {
    Method method = Method::ImplicitMidpoint;
    double step = 1e-3;
    double horizon = 1.0;
    /// componentwise relative residual for the implicit fixed point
    double fixed_point_tol = 1e-14;
    int max_fixed_point_iters = 100;
    double constraint_tol = 1e-12;
    int max_projection_iters = 50;

    void validate() const;
};

/// Time-stamped phase states with conserved-quantity traces.
struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    std::vector<double> energy;     // H along the orbit (empty if unavailable)
    std::vector<double> constraint; // sphere-bundle / embedded residual trace
    StopReason reason = StopReason::Horizon;
    std::string method;
    double step = 0;

    std::size_t size() const { return times.size(); }
    const std::vector<double>& back_state() const { return states.back(); }
    double energy_drift() const;
    double constraint_drift() const;
};

/// Compiled double-precision view of a chart Hamiltonian system.
class NumericSystem {
public:
    explicit NumericSystem(const HamiltonianSystem& sys);

    std::size_t dim() const { return 2 * n_; }
    std::size_t config_dim() const { return n_; }
    void field(const double* z, double* dz) const;
    double energy(const double* z) const { return h_.eval(z); }
    bool has_constraint() const { return constraint_.has_value(); }
    double constraint(const double* z) const { return constraint_->eval(z); }
    bool has_guard() const { return guard_.has_value(); }
    double guard(const double* z) const { return guard_->eval(z); }
    bool guard_ok(const double* z) const;

    bool has_chart() const { return !g_.empty(); }
    /// Phase inner-product matrix blockdiag(g(x), g^{-1}(x)); identity
    /// when the system carries no chart metric.
    void metric_matrix(const double* z, Eigen::MatrixXd& M) const;
    double phase_norm(const double* z, const double* u) const;

    /// Quotient distance: periodic coordinates compare through the minimal
    /// representative, momenta directly.
    double distance(const double* a, const double* b) const;
    void displacement(const double* a, const double* b, double* out) const;

private:
    std::size_t n_;
    std::vector<CompiledRF> field_;
    CompiledRF h_;
    std::optional<CompiledRF> constraint_;
    std::optional<CompiledPoly> guard_;
    std::vector<CompiledRF> g_, gi_; // n*n row-major, when a chart is attached
    std::vector<double> periods_;    // 0 = aperiodic coordinate
};

/// Integrate the Hamiltonian flow from z0 for cfg.horizon. Records every
/// step with H and (for geodesic systems) the sphere-bundle constraint.
/// Stops early on guard exit (|guard| < 1e-12 (1 + |z|^2)) or divergence.
/// Throws GeometryError if z0 starts outside the guard region and
/// NumericError if the implicit solver fails to converge.
Trajectory flow_chart(const HamiltonianSystem& sys, const std::vector<double>& z0,
                      const IntegratorConfig& cfg);

/// Streaming variant; observer sees (t, z) after every accepted step,
/// including the initial state, and may return false to stop early
/// (reported as Horizon). Signed step allowed. Returns the stop reason.
StopReason integrate_observe(const NumericSystem& sys, std::vector<double>& z, double horizon,
                             double step, const IntegratorConfig& cfg,
                             const std::function<bool(double, const double*)>& observer);

/// One implicit-midpoint step: advances z and writes the midpoint state
/// (where the variational Jacobian should be evaluated). Returns false if
/// the iteration left the finite range; throws NumericError on
/// non-convergence.
bool midpoint_step_with_state(const NumericSystem& sys, std::vector<double>& z, double h,
                              const IntegratorConfig& cfg, std::size_t step_index,
                              std::vector<double>& midpoint_out);

/// Steppers over an arbitrary field callable, for systems whose field is
/// not rational in the chart sense (the n-body cover chart). Same
/// fixed-point policy and error reporting as the chart steppers.
using FieldFn = std::function<void(const double*, double*)>;
bool generic_midpoint_step(const FieldFn& field, std::size_t dim, std::vector<double>& z,
                           double h, const IntegratorConfig& cfg, std::size_t step_index);
bool generic_rk4_step(const FieldFn& field, std::size_t dim, std::vector<double>& z, double h);

/// Frictionless particle on an embedded variety: position Verlet with
/// Lagrange-multiplier constraint forces, followed by projection of (x, v)
/// back onto {F = 0, dF v = 0}. State layout (x..., v...). Kinetic energy
/// and the max constraint residual are recorded.
Trajectory flow_embedded(const EmbeddedVariety& v, const Eigen::VectorXd& x0,
                         const Eigen::VectorXd& v0, const IntegratorConfig& cfg);

/// Compiled Jacobian of the field, for linearized flows.
class VariationalSystem {
public:
    explicit VariationalSystem(const HamiltonianSystem& sys);
    const NumericSystem& base() const { return base_; }
    std::size_t dim() const { return dim_; }
    void jacobian(const double* z, Eigen::MatrixXd& J) const;

private:
    NumericSystem base_;
    std::size_t dim_;
    std::vector<CompiledRF> dfield_; // row-major dim x dim
};

struct VariationalTrajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;   // z
    std::vector<std::vector<double>> tangents; // u = d phi_t (u0)
    std::vector<double> tangent_norms;         // chart-metric phase norms
    StopReason reason = StopReason::Horizon;
};

/// Integrates zdot = X(z), udot = DX(z) u with the exact symbolic Jacobian
/// evaluated along the orbit.
VariationalTrajectory variational_flow(const HamiltonianSystem& sys, const std::vector<double>& z0,
                                       const std::vector<double>& u0, const IntegratorConfig& cfg);

/// max_t |phi_t(psi_b z0) - psi_b(phi_{b t} z0)| over the step grid of
/// [0, T]; numerically realizes the fiber-rescaling conjugacy. Requires a
/// potential-free geodesic system.
double rescaling_conjugacy_check(const HamiltonianSystem& sys, const std::vector<double>& z0,
                                 double b, double horizon, const IntegratorConfig& cfg);

/// CSV export: header t, x..., p..., H, C; 17 significant digits.
void write_trajectory_csv(const Trajectory& tr, const std::vector<std::string>& phase_vars,
                          std::ostream& os);

} // namespace geoflow

#endif
