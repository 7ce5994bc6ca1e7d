#ifndef GEOFLOW_NBODY_HPP
#define GEOFLOW_NBODY_HPP

#include <Eigen/Dense>

#include "geoflow/integrate.hpp"

namespace geoflow {

/// Kinetic metric of the n-body chart. MassWeighted is the classical
/// system (kinetic energy sum m_i |qdot_i|^2 / 2); PaperLiteral uses the
/// plain Euclidean metric with unit masses in the kinetic term while
/// keeping the massive potential.
enum class KineticMode { MassWeighted, PaperLiteral };

struct Body {
    double mass = 1.0;
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
};

struct NBodyConfig {
    std::vector<Body> bodies;
    double gravity = 1.0;
    /// sign sheet sigma_ij = +-1 per pair: the branch of the distance cover
    /// z_ij = sigma_ij |q_i - q_j|. Empty = all-plus.
    Eigen::MatrixXi signs;
    KineticMode mode = KineticMode::MassWeighted;
    /// minimum-separation guard; 0 picks 1e-3 x initial minimum separation
    double delta_min = 0;
};

/// Flow-ready n-body system in the sign-resolved cover chart: the z_ij are
/// eliminated (recomputed from q with the fixed sign sheet), which makes
/// the cover constraint z_ij^2 = |q_i - q_j|^2 exact by construction.
/// State layout: (q_1 ... q_n, p_1 ... p_n), 6n doubles.
class NBodySystem {
public:
    explicit NBodySystem(NBodyConfig cfg);

    std::size_t n_bodies() const { return cfg_.bodies.size(); }
    std::size_t dim() const { return 6 * n_bodies(); }
    const NBodyConfig& config() const { return cfg_; }
    double delta_min() const { return delta_min_; }

    std::vector<double> initial_state() const;
    void field(const double* z, double* dz) const;
    double hamiltonian(const double* z) const;
    Eigen::Vector3d linear_momentum(const double* z) const;
    Eigen::Vector3d angular_momentum(const double* z) const;
    double min_separation(const double* z) const;
    /// z_ij through the sign sheet (i < j).
    double cover_value(const double* z, std::size_t i, std::size_t j) const;
    int sign(std::size_t i, std::size_t j) const;

private:
    NBodyConfig cfg_;
    double delta_min_ = 0;
};

/// Snapshot of the cover chart at a state: positions plus the auxiliary
/// values z_ij = sigma_ij |q_i - q_j| for i < j (row-major over pairs).
/// z_ij^2 = |q_i - q_j|^2 holds exactly by construction here.
struct CoverState {
    std::vector<Eigen::Vector3d> positions;
    std::vector<double> z;
};

CoverState cover_state(const NBodySystem& sys, const double* state);

struct NBodyTrajectory {
    Trajectory base; // states + energy trace; constraint column unused
    std::vector<Eigen::Vector3d> linear_momentum;
    std::vector<Eigen::Vector3d> angular_momentum;
};

/// Integrates with energy/momentum monitors; stops with guard-exit when
/// any pairwise separation falls below delta_min (partial trajectory, no
/// non-finite states recorded).
NBodyTrajectory simulate_nbody(const NBodySystem& sys, const IntegratorConfig& cfg);

/// max over recorded states and pairs of |z_ij^2 - |q_i - q_j|^2| with z
/// recomputed through the sign sheet. Zero to round-off in the eliminated
/// chart; kept as a monitor for any future extended-coordinate mode.
double cover_consistency(const NBodySystem& sys, const Trajectory& tr);

} // namespace geoflow

#endif
