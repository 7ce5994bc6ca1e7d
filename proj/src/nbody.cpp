#include "geoflow/nbody.hpp"

#include <cmath>

namespace geoflow {

NBodySystem::NBodySystem(NBodyConfig cfg) : cfg_(std::move(cfg)) {
    std::size_t n = cfg_.bodies.size();
    if (n == 0) throw Error("n-body system needs at least one body");
    for (const auto& b : cfg_.bodies)
        if (!(b.mass > 0)) throw Error("masses must be positive");
    if (!(cfg_.gravity > 0)) throw Error("gravitational constant must be positive");

    if (cfg_.signs.size() == 0) {
        cfg_.signs = Eigen::MatrixXi::Ones(static_cast<Eigen::Index>(n),
                                           static_cast<Eigen::Index>(n));
    } else {
        if (cfg_.signs.rows() != static_cast<Eigen::Index>(n) ||
            cfg_.signs.cols() != static_cast<Eigen::Index>(n))
            throw Error("sign sheet must be n x n");
        for (Eigen::Index i = 0; i < cfg_.signs.rows(); ++i)
            for (Eigen::Index j = 0; j < cfg_.signs.cols(); ++j) {
                int s = cfg_.signs(i, j);
                if (s != 1 && s != -1) throw Error("sign sheet entries must be +-1");
                if (cfg_.signs(j, i) != s) throw Error("sign sheet must be symmetric");
            }
    }

    double min_sep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            min_sep = std::min(min_sep,
                               (cfg_.bodies[i].position - cfg_.bodies[j].position).norm());
    delta_min_ = cfg_.delta_min > 0 ? cfg_.delta_min : 1e-3 * min_sep;
    if (n > 1 && !(min_sep >= delta_min_))
        throw Error("initial separation below the minimum-separation guard");
}

int NBodySystem::sign(std::size_t i, std::size_t j) const {
    return cfg_.signs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

std::vector<double> NBodySystem::initial_state() const {
    std::size_t n = n_bodies();
    std::vector<double> z(6 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const Body& b = cfg_.bodies[i];
        double pm = cfg_.mode == KineticMode::MassWeighted ? b.mass : 1.0;
        for (int a = 0; a < 3; ++a) {
            z[3 * i + static_cast<std::size_t>(a)] = b.position[a];
            z[3 * (n + i) + static_cast<std::size_t>(a)] = pm * b.velocity[a];
        }
    }
    return z;
}

void NBodySystem::field(const double* z, double* dz) const {
    std::size_t n = n_bodies();
    const double* q = z;
    const double* p = z + 3 * n;
    double* qdot = dz;
    double* pdot = dz + 3 * n;

    for (std::size_t i = 0; i < n; ++i) {
        double inv_m = cfg_.mode == KineticMode::MassWeighted ? 1.0 / cfg_.bodies[i].mass : 1.0;
        for (int a = 0; a < 3; ++a) qdot[3 * i + static_cast<std::size_t>(a)] =
            inv_m * p[3 * i + static_cast<std::size_t>(a)];
        for (int a = 0; a < 3; ++a) pdot[3 * i + static_cast<std::size_t>(a)] = 0;
    }
    // pair forces through the cover chart: V = -G m_i m_j / z_ij with
    // z_ij = sigma_ij d_ij, so the force flips sign on the minus branch
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double dx[3];
            double d2 = 0;
            for (int a = 0; a < 3; ++a) {
                dx[a] = q[3 * i + static_cast<std::size_t>(a)] -
                        q[3 * j + static_cast<std::size_t>(a)];
                d2 += dx[a] * dx[a];
            }
            double d = std::sqrt(d2);
            double coeff = cfg_.gravity * cfg_.bodies[i].mass * cfg_.bodies[j].mass *
                           static_cast<double>(sign(i, j)) / (d2 * d);
            for (int a = 0; a < 3; ++a) {
                double f = -coeff * dx[a];
                pdot[3 * i + static_cast<std::size_t>(a)] += f;
                pdot[3 * j + static_cast<std::size_t>(a)] -= f;
            }
        }
    }
}

double NBodySystem::hamiltonian(const double* z) const {
    std::size_t n = n_bodies();
    const double* p = z + 3 * n;
    double h = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double p2 = 0;
        for (int a = 0; a < 3; ++a) {
            double c = p[3 * i + static_cast<std::size_t>(a)];
            p2 += c * c;
        }
        h += cfg_.mode == KineticMode::MassWeighted ? p2 / (2 * cfg_.bodies[i].mass) : p2 / 2;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            h -= cfg_.gravity * cfg_.bodies[i].mass * cfg_.bodies[j].mass /
                 cover_value(z, i, j);
    return h;
}

Eigen::Vector3d NBodySystem::linear_momentum(const double* z) const {
    std::size_t n = n_bodies();
    Eigen::Vector3d total = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < n; ++i)
        for (int a = 0; a < 3; ++a) total[a] += z[3 * (n + i) + static_cast<std::size_t>(a)];
    return total;
}

Eigen::Vector3d NBodySystem::angular_momentum(const double* z) const {
    std::size_t n = n_bodies();
    Eigen::Vector3d total = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
        Eigen::Vector3d q(z[3 * i], z[3 * i + 1], z[3 * i + 2]);
        Eigen::Vector3d p(z[3 * (n + i)], z[3 * (n + i) + 1], z[3 * (n + i) + 2]);
        total += q.cross(p);
    }
    return total;
}

double NBodySystem::min_separation(const double* z) const {
    std::size_t n = n_bodies();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double d2 = 0;
            for (int a = 0; a < 3; ++a) {
                double dx = z[3 * i + static_cast<std::size_t>(a)] -
                            z[3 * j + static_cast<std::size_t>(a)];
                d2 += dx * dx;
            }
            best = std::min(best, std::sqrt(d2));
        }
    return best;
}

double NBodySystem::cover_value(const double* z, std::size_t i, std::size_t j) const {
    double d2 = 0;
    for (int a = 0; a < 3; ++a) {
        double dx =
            z[3 * i + static_cast<std::size_t>(a)] - z[3 * j + static_cast<std::size_t>(a)];
        d2 += dx * dx;
    }
    return static_cast<double>(sign(i, j)) * std::sqrt(d2);
}

CoverState cover_state(const NBodySystem& sys, const double* state) {
    std::size_t n = sys.n_bodies();
    CoverState cs;
    for (std::size_t i = 0; i < n; ++i)
        cs.positions.emplace_back(state[3 * i], state[3 * i + 1], state[3 * i + 2]);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) cs.z.push_back(sys.cover_value(state, i, j));
    return cs;
}

NBodyTrajectory simulate_nbody(const NBodySystem& sys, const IntegratorConfig& cfg) {
    cfg.validate();
    std::size_t d = sys.dim();
    FieldFn field = [&sys](const double* z, double* dz) { sys.field(z, dz); };

    NBodyTrajectory out;
    out.base.method = method_name(cfg.method);
    out.base.step = cfg.step;
    std::vector<double> z = sys.initial_state();
    if (sys.n_bodies() > 1 && sys.min_separation(z.data()) < sys.delta_min())
        throw Error("initial separation below the minimum-separation guard");

    auto record = [&](double t) {
        out.base.times.push_back(t);
        out.base.states.push_back(z);
        out.base.energy.push_back(sys.hamiltonian(z.data()));
        out.linear_momentum.push_back(sys.linear_momentum(z.data()));
        out.angular_momentum.push_back(sys.angular_momentum(z.data()));
    };
    record(0.0);

    long long nsteps = std::llround(cfg.horizon / cfg.step);
    std::vector<double> prev(d);
    for (long long k = 1; k <= nsteps; ++k) {
        prev = z;
        bool ok = cfg.method == Method::RK4
                      ? generic_rk4_step(field, d, z, cfg.step)
                      : generic_midpoint_step(field, d, z, cfg.step, cfg,
                                              static_cast<std::size_t>(k));
        bool finite = ok;
        for (double c : z) finite = finite && std::isfinite(c);
        if (!finite) {
            z = prev;
            out.base.reason = StopReason::Divergence;
            return out;
        }
        if (sys.n_bodies() > 1 && sys.min_separation(z.data()) < sys.delta_min()) {
            z = prev;
            out.base.reason = StopReason::GuardExit;
            return out;
        }
        record(static_cast<double>(k) * cfg.step);
    }
    out.base.reason = StopReason::Horizon;
    return out;
}

double cover_consistency(const NBodySystem& sys, const Trajectory& tr) {
    std::size_t n = sys.n_bodies();
    double worst = 0;
    for (const auto& z : tr.states) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                double zij = sys.cover_value(z.data(), i, j);
                double d2 = 0;
                for (int a = 0; a < 3; ++a) {
                    double dx = z[3 * i + static_cast<std::size_t>(a)] -
                                z[3 * j + static_cast<std::size_t>(a)];
                    d2 += dx * dx;
                }
                worst = std::max(worst, std::abs(zij * zij - d2));
            }
    }
    return worst;
}

} // namespace geoflow
