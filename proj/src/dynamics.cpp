#include "geoflow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "geoflow/parallel.hpp"

namespace geoflow {

namespace {

/// QR-renormalize an already metric-scaled frame; returns the log of the
/// positive diagonal of R and replaces V by Q.
std::vector<double> scaled_qr(Eigen::MatrixXd& V) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(V);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(V.rows(), V.cols());
    Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
    std::vector<double> logs(static_cast<std::size_t>(R.rows()));
    for (Eigen::Index i = 0; i < R.rows(); ++i) {
        double d = R(i, i);
        if (d < 0) {
            Q.col(i) = -Q.col(i);
            d = -d;
        }
        logs[static_cast<std::size_t>(i)] = std::log(std::max(d, 1e-300));
    }
    V = Q;
    return logs;
}

/// Upper Cholesky factor S = L^T of the phase metric at z: scaled frame
/// coordinates are v_scaled = S v, in which M-orthonormality is Euclidean
/// orthonormality and hyperbolic tangent dynamics stays O(1)-conditioned
/// even when metric entries overflow per-coordinate scales.
Eigen::MatrixXd metric_scaler(const NumericSystem& num, const double* z) {
    Eigen::MatrixXd M;
    num.metric_matrix(z, M);
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success)
        throw NumericError("phase metric not positive definite along the orbit");
    return llt.matrixU();
}

} // namespace

SplittingEstimate lyapunov_spectrum(const HamiltonianSystem& sys, const std::vector<double>& z0,
                                    const IntegratorConfig& cfg, double horizon,
                                    double renorm_interval) {
    cfg.validate();
    if (renorm_interval <= 0) throw Error("renormalization interval must be positive");
    VariationalSystem var(sys);
    const NumericSystem& num = var.base();
    std::size_t d = num.dim();
    if (z0.size() != d) throw Error("state size does not match the system");
    if (!num.guard_ok(z0.data()))
        throw GeometryError("initial point outside the chart guard region");

    std::vector<double> z = z0;
    Eigen::Index dd = static_cast<Eigen::Index>(d);
    // Generic frame (fixed seed, deterministic): the descending QR
    // filtration is then the attractor of the renormalization dynamics, so
    // roundoff cannot flip column roles on hyperbolic orbits.
    std::mt19937_64 frame_rng(0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> gauss01(0.0, 1.0);
    Eigen::MatrixXd U(dd, dd);
    for (Eigen::Index i = 0; i < dd; ++i)
        for (Eigen::Index j = 0; j < dd; ++j) U(i, j) = gauss01(frame_rng);
    Eigen::MatrixXd S = metric_scaler(num, z.data());
    Eigen::MatrixXd V = S * U; // frame in metric-scaled coordinates
    scaled_qr(V);

    long long steps_per_renorm = std::max<long long>(1, std::llround(renorm_interval / cfg.step));
    long long total_steps = std::llround(horizon / cfg.step);

    std::vector<double> log_first(d, 0.0), log_second(d, 0.0);
    double t_first = 0, t_second = 0;
    double elapsed = 0;
    bool complete = true;

    std::vector<double> mid(d);
    Eigen::MatrixXd J(dd, dd);
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(dd, dd);
    long long k = 0;
    while (k < total_steps) {
        long long burst = std::min(steps_per_renorm, total_steps - k);
        long long done = 0;
        for (; done < burst; ++done) {
            if (!midpoint_step_with_state(num, z, cfg.step, cfg, static_cast<std::size_t>(k + done),
                                          mid) ||
                !num.guard_ok(z.data())) {
                complete = false;
                break;
            }
            // midpoint tangent update in scaled coordinates:
            // (I - h/2 Jh) V' = (I + h/2 Jh) V with Jh = S J S^{-1}
            var.jacobian(mid.data(), J);
            Eigen::MatrixXd Sinv = S.triangularView<Eigen::Upper>().solve(I);
            Eigen::MatrixXd Jh = S * J * Sinv;
            Eigen::MatrixXd A = I - 0.5 * cfg.step * Jh;
            Eigen::MatrixXd B = I + 0.5 * cfg.step * Jh;
            V = A.partialPivLu().solve(B * V);
            // transition to the new point's scaling
            Eigen::MatrixXd Snew = metric_scaler(num, z.data());
            V = Snew * (S.triangularView<Eigen::Upper>().solve(V));
            S = std::move(Snew);
        }
        elapsed += static_cast<double>(done) * cfg.step;
        k += done;
        if (done > 0) {
            std::vector<double> logs = scaled_qr(V);
            bool second_half = elapsed > 0.5 * horizon;
            for (std::size_t i = 0; i < d; ++i)
                (second_half ? log_second[i] : log_first[i]) += logs[i];
            if (second_half)
                t_second += static_cast<double>(done) * cfg.step;
            else
                t_first += static_cast<double>(done) * cfg.step;
        }
        if (!complete) break;
    }

    SplittingEstimate est;
    est.complete = complete;
    est.horizon_used = elapsed;
    std::vector<std::pair<double, double>> pairs(d); // (exponent, residual)
    for (std::size_t i = 0; i < d; ++i) {
        double total = log_first[i] + log_second[i];
        double t_total = t_first + t_second;
        double rate = t_total > 0 ? total / t_total : 0.0;
        double r1 = t_first > 0 ? log_first[i] / t_first : rate;
        double r2 = t_second > 0 ? log_second[i] / t_second : rate;
        // second-half rate: the first half is burn-in for the neutral
        // directions, whose transients decay like log(t)/t
        pairs[i] = {t_second > 0 ? r2 : rate, std::abs(r2 - r1)};
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& [rate, res] : pairs) {
        est.exponents.push_back(rate);
        est.residuals.push_back(res);
    }
    est.flow_direction_index = 0;
    for (std::size_t i = 1; i < d; ++i)
        if (std::abs(est.exponents[i]) < std::abs(est.exponents[est.flow_direction_index]))
            est.flow_direction_index = i;
    return est;
}

RecurrenceResult recurrence_statistics(const HamiltonianSystem& sys,
                                       const std::vector<std::vector<double>>& seeds, double eps,
                                       double min_time, double horizon,
                                       const IntegratorConfig& cfg) {
    cfg.validate();
    if (!(eps > 0) || !(horizon > min_time) || !(min_time > 0))
        throw Error("recurrence needs eps > 0 and horizon > min_time > 0");
    NumericSystem num(sys);
    RecurrenceResult out;
    out.first_return_times.assign(seeds.size(), std::numeric_limits<double>::quiet_NaN());
    out.recurrent.assign(seeds.size(), false);
    out.guard_exited.assign(seeds.size(), false);

    parallel_for(seeds.size(), [&](std::size_t s) {
        std::vector<double> z = seeds[s];
        const std::vector<double>& ref = seeds[s];
        double hit_time = std::numeric_limits<double>::quiet_NaN();
        StopReason reason =
            integrate_observe(num, z, horizon, cfg.step, cfg, [&](double t, const double* state) {
                if (t >= min_time && num.distance(state, ref.data()) <= eps) {
                    hit_time = t;
                    return false;
                }
                return true;
            });
        if (!std::isnan(hit_time)) {
            out.recurrent[s] = true;
            out.first_return_times[s] = hit_time;
        } else if (reason == StopReason::GuardExit || reason == StopReason::Divergence) {
            out.guard_exited[s] = true;
        }
    });
    std::size_t count = 0;
    for (bool r : out.recurrent) count += r ? 1 : 0;
    out.fraction = seeds.empty() ? 0.0 : static_cast<double>(count) / seeds.size();
    return out;
}

bool stable_set_probe(const HamiltonianSystem& sys, const std::vector<double>& p,
                      const std::vector<double>& q, double eps, double horizon,
                      const IntegratorConfig& cfg) {
    cfg.validate();
    if (!(eps > 0) || !(horizon > 0)) throw Error("stable-set probe needs eps, horizon > 0");
    NumericSystem num(sys);
    if (p.size() != num.dim() || q.size() != num.dim())
        throw Error("state size does not match the system");

    std::vector<double> zp = p, zq = q;
    long long nsteps = std::llround(horizon / cfg.step);
    if (num.distance(zp.data(), zq.data()) > eps) return false;
    for (long long k = 1; k <= nsteps; ++k) {
        std::vector<double> mid(num.dim());
        if (!midpoint_step_with_state(num, zp, cfg.step, cfg, static_cast<std::size_t>(k), mid) ||
            !midpoint_step_with_state(num, zq, cfg.step, cfg, static_cast<std::size_t>(k), mid))
            return false; // one orbit left the finite range
        if (!num.guard_ok(zp.data()) || !num.guard_ok(zq.data())) return false;
        if (num.distance(zp.data(), zq.data()) > eps) return false;
    }
    return true;
}

OrbitModel make_orbit_model(const HamiltonianSystem& sys, const IntegratorConfig& cfg) {
    auto num = std::make_shared<NumericSystem>(sys);
    auto cfg_copy = std::make_shared<IntegratorConfig>(cfg);
    OrbitModel m;
    m.dim = num->dim();
    m.energy = [num](const std::vector<double>& z) { return num->energy(z.data()); };
    m.advance = [num, cfg_copy](const std::vector<double>& z0, double T) {
        std::vector<double> z = z0;
        if (T != 0)
            integrate_observe(*num, z, std::abs(T), T < 0 ? -cfg_copy->step : cfg_copy->step,
                              *cfg_copy, [](double, const double*) { return true; });
        return z;
    };
    m.field = [num](const std::vector<double>& z) {
        std::vector<double> f(num->dim());
        num->field(z.data(), f.data());
        return f;
    };
    m.distance = [num](const double* a, const double* b) { return num->distance(a, b); };
    m.displacement = [num](const double* a, const double* b, double* out) {
        num->displacement(a, b, out);
    };
    return m;
}

OrbitModel make_orbit_model(const EmbeddedVariety& v, const IntegratorConfig& cfg) {
    auto var = std::make_shared<EmbeddedVariety>(v);
    auto cfg_copy = std::make_shared<IntegratorConfig>(cfg);
    cfg_copy->method = Method::ConstrainedProjection;
    std::size_t m_amb = v.ambient_dim();
    OrbitModel m;
    m.dim = 2 * m_amb;
    {
        Eigen::MatrixXd G = v.ambient_form();
        m.energy = [G, m_amb](const std::vector<double>& z) {
            Eigen::VectorXd vel(static_cast<Eigen::Index>(m_amb));
            for (std::size_t i = 0; i < m_amb; ++i)
                vel[static_cast<Eigen::Index>(i)] = z[m_amb + i];
            return 0.5 * vel.dot(G * vel);
        };
    }
    m.advance = [var, cfg_copy, m_amb](const std::vector<double>& z0, double T) {
        Eigen::VectorXd x(static_cast<Eigen::Index>(m_amb)), vel(static_cast<Eigen::Index>(m_amb));
        for (std::size_t i = 0; i < m_amb; ++i) {
            x[static_cast<Eigen::Index>(i)] = z0[i];
            vel[static_cast<Eigen::Index>(i)] = z0[m_amb + i];
        }
        if (T < 0) vel = -vel; // time reversal of the frictionless flow
        IntegratorConfig c = *cfg_copy;
        c.horizon = std::abs(T);
        if (c.horizon == 0) return z0;
        Trajectory tr = flow_embedded(*var, x, vel, c);
        std::vector<double> out = tr.back_state();
        if (T < 0)
            for (std::size_t i = 0; i < m_amb; ++i) out[m_amb + i] = -out[m_amb + i];
        return out;
    };
    m.field = [var, m_amb](const std::vector<double>& z) {
        // (xdot, vdot) with vdot from the constraint forces
        Eigen::VectorXd x(static_cast<Eigen::Index>(m_amb)), vel(static_cast<Eigen::Index>(m_amb));
        for (std::size_t i = 0; i < m_amb; ++i) {
            x[static_cast<Eigen::Index>(i)] = z[i];
            vel[static_cast<Eigen::Index>(i)] = z[m_amb + i];
        }
        Eigen::MatrixXd J = var->jacobian(x);
        Eigen::MatrixXd G = var->ambient_form();
        Eigen::MatrixXd Ginv = G.inverse();
        Eigen::MatrixXd JGJ = J * Ginv * J.transpose();
        Eigen::VectorXd rhs(static_cast<Eigen::Index>(var->n_constraints()));
        for (std::size_t a = 0; a < var->n_constraints(); ++a)
            rhs[static_cast<Eigen::Index>(a)] = var->hessian_quad(a, x, vel);
        Eigen::VectorXd lambda = JGJ.ldlt().solve(rhs);
        Eigen::VectorXd acc = -Ginv * J.transpose() * lambda;
        std::vector<double> f(2 * m_amb);
        for (std::size_t i = 0; i < m_amb; ++i) {
            f[i] = vel[static_cast<Eigen::Index>(i)];
            f[m_amb + i] = acc[static_cast<Eigen::Index>(i)];
        }
        return f;
    };
    m.displacement = [dim = m.dim](const double* a, const double* b, double* out) {
        for (std::size_t i = 0; i < dim; ++i) out[i] = a[i] - b[i];
    };
    m.distance = [dim = m.dim](const double* a, const double* b) {
        double s = 0;
        for (std::size_t i = 0; i < dim; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
        return std::sqrt(s);
    };
    return m;
}

namespace {

struct Candidate {
    std::vector<double> point;
    double period;
};

/// Damped least-squares Newton on (z, T) for phi_T(z) = z with a
/// transversal-section row pinning the flow direction.
std::optional<PeriodEntry> refine_candidate(const OrbitModel& model, const Candidate& cand,
                                            double refine_tol) {
    std::size_t d = model.dim;
    std::vector<double> z = cand.point;
    double T = cand.period;
    std::vector<double> anchor = cand.point;
    std::vector<double> x_dir = model.field(anchor);
    double e_target = model.energy ? model.energy(anchor) : 0.0;
    std::size_t rows = d + (model.energy ? 2 : 1);

    auto residual = [&](const std::vector<double>& zz, double TT) {
        std::vector<double> zT = model.advance(zz, TT);
        Eigen::VectorXd r(static_cast<Eigen::Index>(rows));
        std::vector<double> diff(d);
        model.displacement(zT.data(), zz.data(), diff.data());
        for (std::size_t i = 0; i < d; ++i) r[static_cast<Eigen::Index>(i)] = diff[i];
        double sec = 0;
        std::vector<double> off(d);
        model.displacement(zz.data(), anchor.data(), off.data());
        for (std::size_t i = 0; i < d; ++i) sec += x_dir[i] * off[i];
        r[static_cast<Eigen::Index>(d)] = sec;
        if (model.energy) r[static_cast<Eigen::Index>(d + 1)] = model.energy(zz) - e_target;
        return r;
    };

    Eigen::VectorXd r = residual(z, T);
    for (int it = 0; it < 25; ++it) {
        double closure = r.head(static_cast<Eigen::Index>(d)).lpNorm<Eigen::Infinity>();
        if (closure <= refine_tol && std::abs(r[static_cast<Eigen::Index>(d)]) <= refine_tol) {
            PeriodEntry entry;
            entry.period = T;
            entry.uncertainty = std::max(refine_tol, closure);
            entry.orbit_seed = z;
            return entry;
        }
        // finite-difference Jacobian in (z, T)
        Eigen::MatrixXd Jm(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(d + 1));
        for (std::size_t j = 0; j < d; ++j) {
            double delta = 1e-6 * (1.0 + std::abs(z[j]));
            std::vector<double> zp = z, zm = z;
            zp[j] += delta;
            zm[j] -= delta;
            Eigen::VectorXd rp = residual(zp, T);
            Eigen::VectorXd rm = residual(zm, T);
            Jm.col(static_cast<Eigen::Index>(j)) = (rp - rm) / (2 * delta);
        }
        {
            double delta = 1e-6 * (1.0 + std::abs(T));
            Eigen::VectorXd rp = residual(z, T + delta);
            Eigen::VectorXd rm = residual(z, T - delta);
            Jm.col(static_cast<Eigen::Index>(d)) = (rp - rm) / (2 * delta);
        }
        // minimal-norm least squares; degenerate orbit families (all great
        // circles, torus translates) make the monodromy block rank-deficient
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(Jm, Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd.setThreshold(1e-4);
        Eigen::VectorXd step = svd.solve(-r);
        if (!step.allFinite()) return std::nullopt;

        double scale = 1.0;
        bool accepted = false;
        for (int damp = 0; damp < 8; ++damp) {
            std::vector<double> zn = z;
            for (std::size_t i = 0; i < d; ++i)
                zn[i] += scale * step[static_cast<Eigen::Index>(i)];
            double Tn = T + scale * step[static_cast<Eigen::Index>(d)];
            if (Tn > 0) {
                Eigen::VectorXd rn = residual(zn, Tn);
                if (rn.norm() < r.norm()) {
                    z = zn;
                    T = Tn;
                    r = rn;
                    accepted = true;
                    break;
                }
            }
            scale *= 0.5;
        }
        if (!accepted) return std::nullopt; // Newton stalled; drop candidate
    }
    double closure = r.head(static_cast<Eigen::Index>(d)).lpNorm<Eigen::Infinity>();
    if (closure <= refine_tol) {
        PeriodEntry entry;
        entry.period = T;
        entry.uncertainty = std::max(refine_tol, closure);
        entry.orbit_seed = z;
        return entry;
    }
    return std::nullopt;
}

} // namespace

SpectrumSample periodic_orbit_search(const OrbitModel& model,
                                     const std::vector<std::vector<double>>& seeds,
                                     double horizon, double near_return_threshold,
                                     double refine_tol) {
    if (!(near_return_threshold > 0) || !(refine_tol > 0))
        throw Error("orbit search thresholds must be positive");
    std::vector<std::optional<Candidate>> found(seeds.size());

    // scan each seed for its first armed near-return (coarse sampling)
    parallel_for(seeds.size(), [&](std::size_t s) {
        const std::vector<double>& seed = seeds[s];
        double dt = horizon / 4096.0;
        std::vector<double> z = seed;
        bool armed = false;
        double best_t = 0, best_d = std::numeric_limits<double>::infinity();
        bool tracking = false;
        for (long k = 1; k <= 4096; ++k) {
            z = model.advance(z, dt);
            double t = static_cast<double>(k) * dt;
            double dist = model.distance(z.data(), seed.data());
            if (!armed) {
                if (dist > 2 * near_return_threshold) armed = true;
                continue;
            }
            if (dist <= near_return_threshold) {
                tracking = true;
                if (dist < best_d) {
                    best_d = dist;
                    best_t = t;
                }
            } else if (tracking) {
                break; // passed through the near-return window
            }
        }
        if (tracking) found[s] = Candidate{seed, best_t};
    });

    SpectrumSample sample;
    std::vector<PeriodEntry> entries;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        if (!found[s]) continue;
        auto refined = refine_candidate(model, *found[s], refine_tol);
        if (refined)
            entries.push_back(std::move(*refined));
        else
            ++sample.dropped_candidates;
    }
    std::sort(entries.begin(), entries.end(),
              [](const PeriodEntry& a, const PeriodEntry& b) { return a.period < b.period; });
    for (const auto& e : entries) {
        bool dup = false;
        for (const auto& kept : sample.entries)
            if (std::abs(e.period - kept.period) <= e.uncertainty + kept.uncertainty) dup = true;
        if (!dup) sample.entries.push_back(e);
    }
    return sample;
}

ArithmeticityVerdict arithmeticity_test(const SpectrumSample& sample, double tolerance,
                                        int max_multiple) {
    if (sample.entries.empty()) throw Error("arithmeticity test needs at least one period");
    if (!(tolerance > 0) || max_multiple < 1)
        throw Error("arithmeticity test needs tolerance > 0 and max_multiple >= 1");

    double cutoff = 0;
    for (const auto& e : sample.entries) cutoff = std::max(cutoff, e.uncertainty);
    cutoff = std::max(cutoff, 1e-15 * sample.entries.front().period);

    auto real_gcd = [&](double a, double b) {
        while (b > cutoff) {
            double r = std::fmod(a, b);
            if (r > b - cutoff) r = 0; // landed on a multiple within noise
            a = b;
            b = r;
        }
        return a;
    };

    double g = sample.entries.front().period;
    for (std::size_t i = 1; i < sample.entries.size(); ++i)
        g = real_gcd(std::max(g, sample.entries[i].period),
                     std::min(g, sample.entries[i].period));

    ArithmeticityVerdict v;
    v.residual = g;
    if (g >= tolerance) {
        bool all_multiples = true;
        for (const auto& e : sample.entries) {
            double k = std::round(e.period / g);
            if (k < 1 || k > max_multiple ||
                std::abs(e.period - k * g) > e.uncertainty + tolerance) {
                all_multiples = false;
                break;
            }
        }
        if (all_multiples) {
            v.kind = ArithmeticityKind::Arithmetic;
            v.generator = g;
            v.note = "all periods are integer multiples of the common divisor";
            return v;
        }
        v.kind = ArithmeticityKind::Inconclusive;
        v.note = "Euclid cascade stabilized but multiples check failed";
        return v;
    }
    double max_unc = 0;
    for (const auto& e : sample.entries) max_unc = std::max(max_unc, e.uncertainty);
    if (max_unc * 10 <= tolerance) {
        v.kind = ArithmeticityKind::NonArithmetic;
        v.note = "Euclid cascade fell below tolerance with a 10x noise margin";
    } else {
        v.kind = ArithmeticityKind::Inconclusive;
        v.note = "cascade fell below tolerance but uncertainties are too large to decide";
    }
    return v;
}

std::vector<std::vector<double>> lattice_orbit_seeds(const HamiltonianSystem& sys, int count) {
    std::size_t n = sys.config_dim();
    NumericSystem num(sys);
    static const int dirs[][2] = {{1, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 1}, {1, 3}};
    std::vector<std::vector<double>> seeds;
    for (int k = 0; k < count && k < 6; ++k) {
        std::vector<double> z(2 * n, 0.0);
        z[0] = 0.15;
        if (n > 1) z[1] = 0.4;
        z[n] = dirs[k][0];
        if (n > 1) z[n + 1] = dirs[k][1];
        double h = num.energy(z.data());
        if (!(h > 0)) continue;
        double scale = 1.0 / std::sqrt(2 * h);
        for (std::size_t i = 0; i < n; ++i) z[n + i] *= scale;
        seeds.push_back(std::move(z));
    }
    return seeds;
}

std::vector<std::vector<double>> sample_unit_speed_seeds(const HamiltonianSystem& sys, int count,
                                                         unsigned rng_seed, double box_halfwidth) {
    std::mt19937_64 rng(rng_seed);
    NumericSystem num(sys);
    std::size_t n = sys.config_dim();
    auto chart = sys.chart();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<std::vector<double>> seeds;
    seeds.reserve(static_cast<std::size_t>(count));
    while (seeds.size() < static_cast<std::size_t>(count)) {
        std::vector<double> z(2 * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double period = 0;
            if (chart && chart->periods()[i]) period = chart->periods()[i]->to_double();
            z[i] = period > 0 ? unit(rng) * period : (2 * unit(rng) - 1) * box_halfwidth;
        }
        for (std::size_t i = 0; i < n; ++i) z[n + i] = gauss(rng);
        if (!num.guard_ok(z.data())) continue;
        double h = num.energy(z.data());
        if (!(h > 1e-12) || !std::isfinite(h)) continue;
        double scale = 1.0 / std::sqrt(2 * h); // H is quadratic in p
        for (std::size_t i = 0; i < n; ++i) z[n + i] *= scale;
        seeds.push_back(std::move(z));
    }
    return seeds;
}

MixingReport mixing_report(const HamiltonianSystem& sys, const IntegratorConfig& cfg,
                           const MixingOptions& opts) {
    cfg.validate();
    MixingReport rep;
    rep.disclaimer = "numerical evidence, not proof";
    rep.assumed_hypotheses = {"local product structure", "Anosov closing lemma"};

    auto chart = sys.chart();
    bool all_periodic = chart != nullptr;
    if (chart)
        for (const auto& p : chart->periods()) all_periodic = all_periodic && p.has_value();
    rep.compact_type = all_periodic;

    if (!rep.compact_type)
        rep.notes.push_back("model is not compact-type (no full periodic identifications); "
                            "recurrence and orbit-harvest items skipped");

    if (rep.compact_type) {
        auto seeds = sample_unit_speed_seeds(sys, opts.recurrence_seeds, opts.rng_seed);
        rep.recurrence = recurrence_statistics(sys, seeds, opts.recurrence_eps,
                                               opts.recurrence_min_time, opts.recurrence_horizon,
                                               cfg);
        rep.recurrence_done = true;
    }

    if (opts.supplied_spectrum) {
        rep.spectrum = *opts.supplied_spectrum;
        rep.spectrum_done = true;
        rep.notes.push_back("length spectrum supplied externally");
    } else if (rep.compact_type) {
        auto seeds = lattice_orbit_seeds(sys, opts.orbit_seeds);
        OrbitModel model = make_orbit_model(sys, cfg);
        rep.spectrum = periodic_orbit_search(model, seeds, opts.orbit_horizon,
                                             opts.near_return_threshold, opts.refine_tol);
        rep.spectrum_done = true;
    }

    if (rep.spectrum_done && !rep.spectrum.entries.empty()) {
        rep.verdict = arithmeticity_test(rep.spectrum, opts.arithmeticity_tol, opts.max_multiple);
    } else if (rep.spectrum_done) {
        rep.verdict.kind = ArithmeticityKind::Inconclusive;
        rep.verdict.note = "insufficient periodic orbits found";
    }

    if (rep.compact_type && chart) {
        // Birkhoff correlation of two fixed smooth observables along one orbit
        auto seeds = sample_unit_speed_seeds(sys, 1, opts.rng_seed + 2);
        NumericSystem num(sys);
        std::vector<double> z = seeds.front();
        double p0 = chart->periods()[0] ? chart->periods()[0]->to_double() : 1.0;
        double p1 = (sys.config_dim() > 1 && chart->periods()[1])
                        ? chart->periods()[1]->to_double()
                        : p0;
        // overlapping frequency content: a mixing flow decorrelates these,
        // a quasi-periodic one cannot
        bool has_y = sys.config_dim() > 1;
        auto obs_f = [p0, p1, has_y](const double* s) {
            return std::cos(2 * M_PI * s[0] / p0) +
                   (has_y ? std::cos(2 * M_PI * s[1] / p1) : 0.0);
        };
        auto obs_g = [p0, p1, has_y](const double* s) {
            return std::sin(2 * M_PI * s[0] / p0) +
                   (has_y ? std::sin(2 * M_PI * s[1] / p1) : 0.0);
        };
        std::vector<double> fs, gs;
        integrate_observe(num, z, opts.correlation_horizon, cfg.step, cfg,
                          [&](double, const double* s) {
                              fs.push_back(obs_f(s));
                              gs.push_back(obs_g(s));
                              return true;
                          });
        double fbar = 0, gbar = 0;
        for (double x : fs) fbar += x;
        for (double x : gs) gbar += x;
        fbar /= static_cast<double>(fs.size());
        gbar /= static_cast<double>(gs.size());
        for (double lag = 0; lag <= opts.correlation_max_lag + 1e-12;
             lag += opts.correlation_lag_step) {
            auto shift = static_cast<std::size_t>(std::llround(lag / cfg.step));
            if (shift >= fs.size()) break;
            double acc = 0;
            std::size_t m = fs.size() - shift;
            for (std::size_t k = 0; k < m; ++k) acc += fs[k] * gs[k + shift];
            rep.correlation.emplace_back(lag, std::abs(acc / static_cast<double>(m) - fbar * gbar));
        }
        rep.correlation_done = true;
    }
    return rep;
}

} // namespace geoflow
