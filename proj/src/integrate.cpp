#include "geoflow/integrate.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace geoflow {

const char* method_name(Method m) {
    switch (m) {
    case Method::ImplicitMidpoint: return "implicit-midpoint";
    case Method::RK4: return "rk4";
    case Method::ConstrainedProjection: return "constrained-projection";
    }
    return "?";
}

const char* stop_reason_name(StopReason r) {
    switch (r) {
    case StopReason::Horizon: return "horizon";
    case StopReason::GuardExit: return "guard-exit";
    case StopReason::Divergence: return "divergence";
    }
    return "?";
}

void IntegratorConfig::validate() const {
    if (!(step > 0)) throw Error("integrator step must be positive");
    if (!(horizon >= 0)) throw Error("integrator horizon must be non-negative");
    if (!(fixed_point_tol > 0) || !(constraint_tol > 0))
        throw Error("integrator tolerances must be positive");
    if (max_fixed_point_iters <= 0 || max_projection_iters <= 0)
        throw Error("integrator iteration caps must be positive");
}

double Trajectory::energy_drift() const {
    if (energy.empty()) return 0;
    double d = 0;
    for (double e : energy) d = std::max(d, std::abs(e - energy.front()));
    return d;
}

double Trajectory::constraint_drift() const {
    if (constraint.empty()) return 0;
    double d = 0;
    for (double c : constraint) d = std::max(d, std::abs(c - constraint.front()));
    return d;
}

NumericSystem::NumericSystem(const HamiltonianSystem& sys)
    : n_(sys.config_dim()), h_(CompiledRF::from(sys.hamiltonian())) {
    for (const auto& c : sys.field()) field_.push_back(CompiledRF::from(c));
    if (sys.guard()) guard_ = CompiledPoly::from(*sys.guard());
    periods_.assign(2 * n_, 0.0);
    if (auto chart = sys.chart()) {
        if (!sys.potential())
            constraint_ = CompiledRF::from(sphere_bundle_constraint(*chart));
        const auto& pvars = sys.variables();
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) {
                g_.push_back(CompiledRF::from(chart->metric(i, j).with_variables(pvars)));
                gi_.push_back(CompiledRF::from(chart->inverse()[i][j].with_variables(pvars)));
            }
        for (std::size_t i = 0; i < n_; ++i)
            if (chart->periods()[i]) periods_[i] = chart->periods()[i]->to_double();
    }
}

void NumericSystem::field(const double* z, double* dz) const {
    for (std::size_t a = 0; a < field_.size(); ++a) dz[a] = field_[a].eval(z);
}

bool NumericSystem::guard_ok(const double* z) const {
    if (!guard_) return true;
    double norm2 = 0;
    for (std::size_t a = 0; a < 2 * n_; ++a) norm2 += z[a] * z[a];
    return std::abs(guard_->eval(z)) >= 1e-12 * (1.0 + norm2);
}

void NumericSystem::metric_matrix(const double* z, Eigen::MatrixXd& M) const {
    Eigen::Index d = static_cast<Eigen::Index>(2 * n_);
    M.setZero(d, d);
    if (!has_chart()) {
        M.setIdentity(d, d);
        return;
    }
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                g_[i * n_ + j].eval(z);
            M(static_cast<Eigen::Index>(n_ + i), static_cast<Eigen::Index>(n_ + j)) =
                gi_[i * n_ + j].eval(z);
        }
}

double NumericSystem::phase_norm(const double* z, const double* u) const {
    if (!has_chart()) {
        double s = 0;
        for (std::size_t a = 0; a < 2 * n_; ++a) s += u[a] * u[a];
        return std::sqrt(s);
    }
    double s = 0;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
            s += g_[i * n_ + j].eval(z) * u[i] * u[j];
            s += gi_[i * n_ + j].eval(z) * u[n_ + i] * u[n_ + j];
        }
    return std::sqrt(std::max(0.0, s));
}

void NumericSystem::displacement(const double* a, const double* b, double* out) const {
    for (std::size_t i = 0; i < 2 * n_; ++i) {
        double d = a[i] - b[i];
        if (periods_[i] > 0) d -= periods_[i] * std::round(d / periods_[i]);
        out[i] = d;
    }
}

double NumericSystem::distance(const double* a, const double* b) const {
    double s = 0;
    for (std::size_t i = 0; i < 2 * n_; ++i) {
        double d = a[i] - b[i];
        if (periods_[i] > 0) d -= periods_[i] * std::round(d / periods_[i]);
        s += d * d;
    }
    return std::sqrt(s);
}

namespace {

bool finite_state(const std::vector<double>& z) {
    for (double x : z)
        if (!std::isfinite(x) || std::abs(x) > 1e150) return false;
    return true;
}

/// Fixed steps of |step| covering the horizon, with one shorter final step
/// when the horizon is not an exact multiple.
struct StepSchedule {
    long long full_steps;
    double last_step; // 0 when the horizon is an exact multiple
};

StepSchedule step_schedule(double horizon, double step) {
    double x = horizon / std::abs(step);
    auto full = static_cast<long long>(std::floor(x + 1e-9));
    double rem = horizon - static_cast<double>(full) * std::abs(step);
    if (rem < 1e-9 * std::abs(step)) rem = 0;
    return {full, rem};
}

enum class StepStatus { Ok, NonFinite };

StepStatus midpoint_step(const NumericSystem& sys, std::vector<double>& z, double h,
                         const IntegratorConfig& cfg, std::size_t step_index) {
    std::vector<double> mid(sys.dim());
    return midpoint_step_with_state(sys, z, h, cfg, step_index, mid) ? StepStatus::Ok
                                                                     : StepStatus::NonFinite;
}

StepStatus rk4_step(const NumericSystem& sys, std::vector<double>& z, double h) {
    std::size_t d = sys.dim();
    std::vector<double> k1(d), k2(d), k3(d), k4(d), tmp(d);
    sys.field(z.data(), k1.data());
    for (std::size_t a = 0; a < d; ++a) tmp[a] = z[a] + 0.5 * h * k1[a];
    sys.field(tmp.data(), k2.data());
    for (std::size_t a = 0; a < d; ++a) tmp[a] = z[a] + 0.5 * h * k2[a];
    sys.field(tmp.data(), k3.data());
    for (std::size_t a = 0; a < d; ++a) tmp[a] = z[a] + h * k3[a];
    sys.field(tmp.data(), k4.data());
    for (std::size_t a = 0; a < d; ++a) {
        z[a] += h / 6.0 * (k1[a] + 2 * k2[a] + 2 * k3[a] + k4[a]);
        if (!std::isfinite(z[a])) return StepStatus::NonFinite;
    }
    return StepStatus::Ok;
}

} // namespace

bool midpoint_step_with_state(const NumericSystem& sys, std::vector<double>& z, double h,
                              const IntegratorConfig& cfg, std::size_t step_index,
                              std::vector<double>& midpoint_out) {
    std::size_t d = sys.dim();
    std::vector<double> y(d), ynew(d), f(d);
    sys.field(z.data(), f.data());
    for (std::size_t a = 0; a < d; ++a) y[a] = z[a] + 0.5 * h * f[a];
    bool converged = false;
    for (int it = 0; it < cfg.max_fixed_point_iters; ++it) {
        sys.field(y.data(), f.data());
        double worst = 0;
        for (std::size_t a = 0; a < d; ++a) {
            ynew[a] = z[a] + 0.5 * h * f[a];
            if (!std::isfinite(ynew[a])) return false;
            worst = std::max(worst, std::abs(ynew[a] - y[a]) / (1.0 + std::abs(ynew[a])));
        }
        y.swap(ynew);
        if (worst <= cfg.fixed_point_tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NumericError("implicit midpoint fixed point did not converge at step " +
                           std::to_string(step_index));
    midpoint_out = y;
    for (std::size_t a = 0; a < d; ++a) z[a] = 2.0 * y[a] - z[a];
    return true;
}

bool generic_midpoint_step(const FieldFn& field, std::size_t dim, std::vector<double>& z,
                           double h, const IntegratorConfig& cfg, std::size_t step_index) {
    std::vector<double> y(dim), ynew(dim), f(dim);
    field(z.data(), f.data());
    for (std::size_t a = 0; a < dim; ++a) y[a] = z[a] + 0.5 * h * f[a];
    bool converged = false;
    for (int it = 0; it < cfg.max_fixed_point_iters; ++it) {
        field(y.data(), f.data());
        double worst = 0;
        for (std::size_t a = 0; a < dim; ++a) {
            ynew[a] = z[a] + 0.5 * h * f[a];
            if (!std::isfinite(ynew[a])) return false;
            worst = std::max(worst, std::abs(ynew[a] - y[a]) / (1.0 + std::abs(ynew[a])));
        }
        y.swap(ynew);
        if (worst <= cfg.fixed_point_tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NumericError("implicit midpoint fixed point did not converge at step " +
                           std::to_string(step_index));
    for (std::size_t a = 0; a < dim; ++a) z[a] = 2.0 * y[a] - z[a];
    return true;
}

bool generic_rk4_step(const FieldFn& field, std::size_t dim, std::vector<double>& z, double h) {
    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    field(z.data(), k1.data());
    for (std::size_t a = 0; a < dim; ++a) tmp[a] = z[a] + 0.5 * h * k1[a];
    field(tmp.data(), k2.data());
    for (std::size_t a = 0; a < dim; ++a) tmp[a] = z[a] + 0.5 * h * k2[a];
    field(tmp.data(), k3.data());
    for (std::size_t a = 0; a < dim; ++a) tmp[a] = z[a] + h * k3[a];
    field(tmp.data(), k4.data());
    for (std::size_t a = 0; a < dim; ++a) {
        z[a] += h / 6.0 * (k1[a] + 2 * k2[a] + 2 * k3[a] + k4[a]);
        if (!std::isfinite(z[a])) return false;
    }
    return true;
}

StopReason integrate_observe(const NumericSystem& sys, std::vector<double>& z, double horizon,
                             double step, const IntegratorConfig& cfg,
                             const std::function<bool(double, const double*)>& observer) {
    if (step == 0) throw Error("zero step");
    if (z.size() != sys.dim()) throw Error("state size does not match the system");
    if (!sys.guard_ok(z.data()))
        throw GeometryError("initial point outside the chart guard region");

    StepSchedule sched = step_schedule(horizon, step);
    double sign = step < 0 ? -1.0 : 1.0;
    if (!observer(0.0, z.data())) return StopReason::Horizon;
    std::vector<double> prev(z.size());
    for (long long k = 1; k <= sched.full_steps + (sched.last_step > 0 ? 1 : 0); ++k) {
        bool final_partial = k > sched.full_steps;
        double h = final_partial ? sign * sched.last_step : step;
        double t = final_partial ? sign * horizon : static_cast<double>(k) * step;
        prev = z;
        StepStatus st;
        if (cfg.method == Method::RK4)
            st = rk4_step(sys, z, h);
        else
            st = midpoint_step(sys, z, h, cfg, static_cast<std::size_t>(k));
        if (st == StepStatus::NonFinite || !finite_state(z)) {
            z = prev;
            return sys.has_guard() && std::abs(sys.guard(z.data())) < 1.0
                       ? StopReason::GuardExit
                       : StopReason::Divergence;
        }
        if (!sys.guard_ok(z.data())) {
            z = prev;
            return StopReason::GuardExit;
        }
        if (!observer(t, z.data())) return StopReason::Horizon;
    }
    return StopReason::Horizon;
}

Trajectory flow_chart(const HamiltonianSystem& sys, const std::vector<double>& z0,
                      const IntegratorConfig& cfg) {
    cfg.validate();
    if (cfg.method == Method::ConstrainedProjection)
        throw Error("constrained-projection integrates embedded varieties, not charts");
    NumericSystem num(sys);
    Trajectory tr;
    tr.method = method_name(cfg.method);
    tr.step = cfg.step;
    std::vector<double> z = z0;
    double h0 = num.energy(z.data());
    if (!std::isfinite(h0)) throw GeometryError("Hamiltonian not finite at the initial point");
    tr.reason = integrate_observe(num, z, cfg.horizon, cfg.step, cfg,
                                  [&](double t, const double* state) {
                                      tr.times.push_back(t);
                                      tr.states.emplace_back(state, state + num.dim());
                                      tr.energy.push_back(num.energy(state));
                                      if (num.has_constraint())
                                          tr.constraint.push_back(num.constraint(state));
                                      return true;
                                  });
    return tr;
}

Trajectory flow_embedded(const EmbeddedVariety& v, const Eigen::VectorXd& x0,
                         const Eigen::VectorXd& v0, const IntegratorConfig& cfg) {
    cfg.validate();
    std::size_t m = v.ambient_dim();
    if (x0.size() != static_cast<Eigen::Index>(m) || v0.size() != static_cast<Eigen::Index>(m))
        throw Error("state size does not match the ambient dimension");
    if (v.constraint_values(x0).lpNorm<Eigen::Infinity>() > 1e-4)
        throw GeometryError("initial point too far from the variety");

    const Eigen::MatrixXd& G = v.ambient_form();
    Eigen::MatrixXd Ginv = G.inverse();

    Eigen::VectorXd x = v.project_point(x0, cfg.constraint_tol, cfg.max_projection_iters);
    Eigen::VectorXd vel = v.project_velocity(x, v0);

    auto accel = [&](const Eigen::VectorXd& xx, const Eigen::VectorXd& vv) {
        Eigen::MatrixXd J = v.jacobian(xx);
        Eigen::MatrixXd JGJ = J * Ginv * J.transpose();
        Eigen::VectorXd rhs(static_cast<Eigen::Index>(v.n_constraints()));
        for (std::size_t a = 0; a < v.n_constraints(); ++a)
            rhs[static_cast<Eigen::Index>(a)] = v.hessian_quad(a, xx, vv);
        Eigen::VectorXd lambda = JGJ.ldlt().solve(rhs);
        if ((JGJ * lambda - rhs).lpNorm<Eigen::Infinity>() >
            1e-8 * (1.0 + rhs.lpNorm<Eigen::Infinity>()))
            throw GeometryError("rank-deficient constraint Jacobian during integration");
        return Eigen::VectorXd(-Ginv * J.transpose() * lambda);
    };

    Trajectory tr;
    tr.method = method_name(Method::ConstrainedProjection);
    tr.step = cfg.step;
    auto record = [&](double t) {
        tr.times.push_back(t);
        std::vector<double> s(2 * m);
        for (std::size_t i = 0; i < m; ++i) {
            s[i] = x[static_cast<Eigen::Index>(i)];
            s[m + i] = vel[static_cast<Eigen::Index>(i)];
        }
        tr.states.push_back(std::move(s));
        tr.energy.push_back(0.5 * vel.dot(G * vel));
        double c = v.constraint_values(x).lpNorm<Eigen::Infinity>();
        c = std::max(c, (v.jacobian(x) * vel).lpNorm<Eigen::Infinity>());
        tr.constraint.push_back(c);
    };

    record(0.0);
    StepSchedule sched = step_schedule(cfg.horizon, cfg.step);
    for (long long k = 1; k <= sched.full_steps + (sched.last_step > 0 ? 1 : 0); ++k) {
        bool final_partial = k > sched.full_steps;
        double h = final_partial ? sched.last_step : cfg.step;
        double t = final_partial ? cfg.horizon : static_cast<double>(k) * cfg.step;
        Eigen::VectorXd a0 = accel(x, vel);
        Eigen::VectorXd xn = x + h * vel + 0.5 * h * h * a0;
        xn = v.project_point(xn, cfg.constraint_tol, cfg.max_projection_iters);
        Eigen::VectorXd vp = vel + h * a0;
        Eigen::VectorXd a1 = accel(xn, vp);
        Eigen::VectorXd vn = vel + 0.5 * h * (a0 + a1);
        vn = v.project_velocity(xn, vn);
        x = xn;
        vel = vn;
        if (!x.allFinite() || !vel.allFinite()) {
            tr.reason = StopReason::Divergence;
            return tr;
        }
        record(t);
    }
    tr.reason = StopReason::Horizon;
    return tr;
}

VariationalSystem::VariationalSystem(const HamiltonianSystem& sys)
    : base_(sys), dim_(sys.phase_dim()) {
    for (std::size_t a = 0; a < dim_; ++a)
        for (std::size_t b = 0; b < dim_; ++b)
            dfield_.push_back(CompiledRF::from(sys.field()[a].differentiate(b)));
}

void VariationalSystem::jacobian(const double* z, Eigen::MatrixXd& J) const {
    J.resize(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
    for (std::size_t a = 0; a < dim_; ++a)
        for (std::size_t b = 0; b < dim_; ++b)
            J(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                dfield_[a * dim_ + b].eval(z);
}

namespace {

/// Fixed-point implicit midpoint on the extended (z, u) system.
StepStatus extended_midpoint_step(const VariationalSystem& var, std::vector<double>& z,
                                  std::vector<double>& u, double h, const IntegratorConfig& cfg,
                                  std::size_t step_index) {
    std::size_t d = var.dim();
    std::vector<double> zy(d), zy_new(d), uy(d), uy_new(d), f(d);
    Eigen::MatrixXd J;
    var.base().field(z.data(), f.data());
    for (std::size_t a = 0; a < d; ++a) zy[a] = z[a] + 0.5 * h * f[a];
    var.jacobian(z.data(), J);
    Eigen::Map<const Eigen::VectorXd> u0(u.data(), static_cast<Eigen::Index>(d));
    Eigen::VectorXd ju = J * u0;
    for (std::size_t a = 0; a < d; ++a)
        uy[a] = u[a] + 0.5 * h * ju[static_cast<Eigen::Index>(a)];

    bool converged = false;
    for (int it = 0; it < cfg.max_fixed_point_iters; ++it) {
        var.base().field(zy.data(), f.data());
        var.jacobian(zy.data(), J);
        Eigen::Map<const Eigen::VectorXd> um(uy.data(), static_cast<Eigen::Index>(d));
        ju = J * um;
        double worst = 0;
        for (std::size_t a = 0; a < d; ++a) {
            zy_new[a] = z[a] + 0.5 * h * f[a];
            uy_new[a] = u[a] + 0.5 * h * ju[static_cast<Eigen::Index>(a)];
            if (!std::isfinite(zy_new[a]) || !std::isfinite(uy_new[a]))
                return StepStatus::NonFinite;
            worst = std::max(worst, std::abs(zy_new[a] - zy[a]) / (1.0 + std::abs(zy_new[a])));
            worst = std::max(worst, std::abs(uy_new[a] - uy[a]) / (1.0 + std::abs(uy_new[a])));
        }
        zy.swap(zy_new);
        uy.swap(uy_new);
        if (worst <= cfg.fixed_point_tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NumericError("variational midpoint fixed point did not converge at step " +
                           std::to_string(step_index));
    for (std::size_t a = 0; a < d; ++a) {
        z[a] = 2.0 * zy[a] - z[a];
        u[a] = 2.0 * uy[a] - u[a];
    }
    return StepStatus::Ok;
}

} // namespace

VariationalTrajectory variational_flow(const HamiltonianSystem& sys,
                                       const std::vector<double>& z0,
                                       const std::vector<double>& u0,
                                       const IntegratorConfig& cfg) {
    cfg.validate();
    VariationalSystem var(sys);
    std::size_t d = var.dim();
    if (z0.size() != d || u0.size() != d) throw Error("state/perturbation size mismatch");
    bool zero = true;
    for (double x : u0) zero = zero && x == 0;
    if (zero) throw Error("tangent perturbation must be nonzero");
    if (!var.base().guard_ok(z0.data()))
        throw GeometryError("initial point outside the chart guard region");

    VariationalTrajectory out;
    std::vector<double> z = z0, u = u0;
    auto record = [&](double t) {
        out.times.push_back(t);
        out.states.push_back(z);
        out.tangents.push_back(u);
        out.tangent_norms.push_back(var.base().phase_norm(z.data(), u.data()));
    };
    record(0.0);
    StepSchedule sched = step_schedule(cfg.horizon, cfg.step);
    for (long long k = 1; k <= sched.full_steps + (sched.last_step > 0 ? 1 : 0); ++k) {
        bool final_partial = k > sched.full_steps;
        double h = final_partial ? sched.last_step : cfg.step;
        StepStatus st =
            extended_midpoint_step(var, z, u, h, cfg, static_cast<std::size_t>(k));
        if (st == StepStatus::NonFinite || !finite_state(z) || !finite_state(u)) {
            out.reason = StopReason::Divergence;
            return out;
        }
        if (!var.base().guard_ok(z.data())) {
            out.reason = StopReason::GuardExit;
            return out;
        }
        record(final_partial ? cfg.horizon : static_cast<double>(k) * cfg.step);
    }
    out.reason = StopReason::Horizon;
    return out;
}

double rescaling_conjugacy_check(const HamiltonianSystem& sys, const std::vector<double>& z0,
                                 double b, double horizon, const IntegratorConfig& cfg) {
    cfg.validate();
    if (b == 0) throw Error("fiber rescaling requires b != 0");
    if (!sys.is_fiberwise_quadratic())
        throw Error("conjugacy check requires a potential-free geodesic system");
    NumericSystem num(sys);
    std::size_t n = sys.config_dim();

    std::vector<std::vector<double>> run_a;
    std::vector<double> za = apply_fiber_scaling(z0, n, b);
    integrate_observe(num, za, horizon, cfg.step, cfg, [&](double, const double* s) {
        run_a.emplace_back(s, s + num.dim());
        return true;
    });

    std::vector<std::vector<double>> run_b;
    std::vector<double> zb = z0;
    integrate_observe(num, zb, horizon * std::abs(b), b * cfg.step, cfg,
                      [&](double, const double* s) {
                          run_b.emplace_back(s, s + num.dim());
                          return true;
                      });

    std::size_t k = std::min(run_a.size(), run_b.size());
    double worst = 0;
    std::vector<double> diff(num.dim());
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<double> mapped = apply_fiber_scaling(run_b[i], n, b);
        num.displacement(run_a[i].data(), mapped.data(), diff.data());
        for (double dcomp : diff) worst = std::max(worst, std::abs(dcomp));
    }
    return worst;
}

void write_trajectory_csv(const Trajectory& tr, const std::vector<std::string>& phase_vars,
                          std::ostream& os) {
    os << "t";
    for (const auto& v : phase_vars) os << "," << v;
    os << ",H,C\n";
    os << std::setprecision(17);
    for (std::size_t k = 0; k < tr.size(); ++k) {
        os << tr.times[k];
        for (double x : tr.states[k]) os << "," << x;
        os << "," << (k < tr.energy.size() ? tr.energy[k] : 0.0);
        os << "," << (k < tr.constraint.size() ? tr.constraint[k] : 0.0);
        os << "\n";
    }
}

} // namespace geoflow
