#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "geoflow/nbody.hpp"

using namespace geoflow;

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Equal-mass circular binary: G = 1, masses 1, separation 1, speed
/// 1/sqrt(2) tangential. Kepler: omega^2 = G(m1+m2)/d^3 = 2, period
/// pi sqrt(2).
NBodyConfig circular_binary() {
    NBodyConfig cfg;
    double speed = 1.0 / std::sqrt(2.0);
    cfg.bodies.push_back({1.0, {0.5, 0, 0}, {0, speed, 0}});
    cfg.bodies.push_back({1.0, {-0.5, 0, 0}, {0, -speed, 0}});
    return cfg;
}

IntegratorConfig cfg_mid(double step, double horizon) {
    IntegratorConfig c;
    c.step = step;
    c.horizon = horizon;
    return c;
}

} // namespace

TEST_CASE("pair force: magnitude, direction, branch sign") {
    NBodyConfig cfg;
    cfg.bodies.push_back({2.0, {0, 0, 0}, {0, 0, 0}});
    cfg.bodies.push_back({3.0, {2, 0, 0}, {0, 0, 0}});
    NBodySystem sys(cfg);
    std::vector<double> z = sys.initial_state();
    std::vector<double> dz(sys.dim());
    sys.field(z.data(), dz.data());
    // force on body 1 along +x (attractive), G m1 m2 / d^2 = 6/4
    CHECK(dz[6] == doctest::Approx(1.5));
    CHECK(dz[7] == 0.0);
    CHECK(dz[9] == doctest::Approx(-1.5));

    // minus branch of the cover flips the force sign
    cfg.signs = Eigen::MatrixXi::Ones(2, 2);
    cfg.signs(0, 1) = cfg.signs(1, 0) = -1;
    NBodySystem repulsive(cfg);
    repulsive.field(z.data(), dz.data());
    CHECK(dz[6] == doctest::Approx(-1.5));

    // single body: free particle
    NBodyConfig solo;
    solo.bodies.push_back({1.0, {0, 0, 0}, {1, 0, 0}});
    NBodySystem free_sys(solo);
    std::vector<double> zs = free_sys.initial_state();
    std::vector<double> ds(free_sys.dim());
    free_sys.field(zs.data(), ds.data());
    CHECK(ds[3] == 0.0);
    CHECK(ds[4] == 0.0);
    CHECK(ds[5] == 0.0);
}

TEST_CASE("config validation") {
    NBodyConfig bad = circular_binary();
    bad.bodies[0].mass = -1;
    CHECK_THROWS_AS(NBodySystem{bad}, Error);

    NBodyConfig close = circular_binary();
    close.delta_min = 2.0; // initial separation is 1
    CHECK_THROWS_AS(NBodySystem{close}, Error);

    NBodyConfig badsign = circular_binary();
    badsign.signs = Eigen::MatrixXi::Zero(2, 2);
    CHECK_THROWS_AS(NBodySystem{badsign}, Error);
}

TEST_CASE("two-body circular orbit: period and energy") {
    NBodySystem sys(circular_binary());
    double period = kPi * std::sqrt(2.0);
    NBodyTrajectory tr = simulate_nbody(sys, cfg_mid(1e-3, 4.6));
    REQUIRE(tr.base.reason == StopReason::Horizon);

    CHECK(tr.base.energy.front() == doctest::Approx(-0.5).epsilon(1e-10));

    // measured period: first return of body 1 to its initial position
    const auto& z0 = tr.base.states.front();
    double best_t = 0, best_d = 1e18;
    for (std::size_t k = 1; k < tr.base.size(); ++k) {
        if (tr.base.times[k] < 2.0) continue;
        double d = std::hypot(tr.base.states[k][0] - z0[0], tr.base.states[k][1] - z0[1]);
        if (d < best_d) {
            best_d = d;
            best_t = tr.base.times[k];
        }
    }
    CHECK(std::abs(best_t - period) < 1e-3);
}

TEST_CASE("conservation over ten periods") {
    NBodySystem sys(circular_binary());
    double period = kPi * std::sqrt(2.0);
    NBodyTrajectory tr = simulate_nbody(sys, cfg_mid(1e-3, 10 * period));
    REQUIRE(tr.base.reason == StopReason::Horizon);

    CHECK(tr.base.energy_drift() < 1e-8);
    Eigen::Vector3d p0 = tr.linear_momentum.front();
    Eigen::Vector3d l0 = tr.angular_momentum.front();
    double pdrift = 0, ldrift = 0;
    for (std::size_t k = 0; k < tr.base.size(); ++k) {
        pdrift = std::max(pdrift, (tr.linear_momentum[k] - p0).lpNorm<Eigen::Infinity>());
        ldrift = std::max(ldrift, (tr.angular_momentum[k] - l0).lpNorm<Eigen::Infinity>());
    }
    CHECK(pdrift < 1e-10);
    CHECK(ldrift < 1e-8);
}

TEST_CASE("all-plus branch matches an independent direct-force rk4 oracle") {
    // unequal-mass binary so the mass-weighted chart is exercised
    NBodyConfig cfg;
    cfg.bodies.push_back({1.0, {0.75, 0, 0}, {0, 1.5, 0}});
    cfg.bodies.push_back({3.0, {-0.25, 0, 0}, {0, -0.5, 0}});
    NBodySystem sys(cfg);

    IntegratorConfig icfg = cfg_mid(1e-3, 5.0);
    icfg.method = Method::RK4;
    NBodyTrajectory tr = simulate_nbody(sys, icfg);
    REQUIRE(tr.base.reason == StopReason::Horizon);

    // oracle: classical accelerations a_i = sum G m_j (q_j - q_i)/d^3 on
    // (q, v), integrated with a plain rk4 written from scratch
    std::size_t n = 2;
    std::vector<double> q{0.75, 0, 0, -0.25, 0, 0};
    std::vector<double> v{0, 1.5, 0, 0, -0.5, 0};
    std::vector<double> mass{1.0, 3.0};
    auto accel = [&](const std::vector<double>& qq) {
        std::vector<double> a(3 * n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                double dx[3];
                double d2 = 0;
                for (int c = 0; c < 3; ++c) {
                    dx[c] = qq[3 * j + static_cast<std::size_t>(c)] -
                            qq[3 * i + static_cast<std::size_t>(c)];
                    d2 += dx[c] * dx[c];
                }
                double inv = 1.0 / (d2 * std::sqrt(d2));
                for (int c = 0; c < 3; ++c)
                    a[3 * i + static_cast<std::size_t>(c)] += mass[j] * dx[c] * inv;
            }
        return a;
    };
    double h = 1e-3;
    long steps = std::lround(5.0 / h);
    for (long s = 0; s < steps; ++s) {
        auto step_rhs = [&](const std::vector<double>& qq, const std::vector<double>& vv) {
            return std::make_pair(vv, accel(qq));
        };
        auto [k1q, k1v] = step_rhs(q, v);
        std::vector<double> q2(6), v2(6);
        for (int i = 0; i < 6; ++i) {
            q2[i] = q[i] + 0.5 * h * k1q[i];
            v2[i] = v[i] + 0.5 * h * k1v[i];
        }
        auto [k2q, k2v] = step_rhs(q2, v2);
        for (int i = 0; i < 6; ++i) {
            q2[i] = q[i] + 0.5 * h * k2q[i];
            v2[i] = v[i] + 0.5 * h * k2v[i];
        }
        auto [k3q, k3v] = step_rhs(q2, v2);
        for (int i = 0; i < 6; ++i) {
            q2[i] = q[i] + h * k3q[i];
            v2[i] = v[i] + h * k3v[i];
        }
        auto [k4q, k4v] = step_rhs(q2, v2);
        for (int i = 0; i < 6; ++i) {
            q[i] += h / 6.0 * (k1q[i] + 2 * k2q[i] + 2 * k3q[i] + k4q[i]);
            v[i] += h / 6.0 * (k1v[i] + 2 * k2v[i] + 2 * k3v[i] + k4v[i]);
        }
    }
    const auto& zf = tr.base.back_state();
    for (int i = 0; i < 6; ++i) CHECK(std::abs(zf[static_cast<std::size_t>(i)] - q[i]) < 1e-6);
}

TEST_CASE("head-on collision stops at the guard with finite states") {
    NBodyConfig cfg;
    cfg.bodies.push_back({1.0, {0.5, 0, 0}, {-1, 0, 0}});
    cfg.bodies.push_back({1.0, {-0.5, 0, 0}, {1, 0, 0}});
    cfg.delta_min = 0.05; // large enough for the implicit step to stay solvable
    NBodySystem sys(cfg);
    NBodyTrajectory tr = simulate_nbody(sys, cfg_mid(1e-4, 10.0));
    CHECK(tr.base.reason == StopReason::GuardExit);
    for (const auto& z : tr.base.states)
        for (double c : z) CHECK(std::isfinite(c));
    CHECK(sys.min_separation(tr.base.back_state().data()) >= sys.delta_min());
    CHECK(cover_consistency(sys, tr.base) < 1e-14);
}

TEST_CASE("cover consistency and sign sheet") {
    NBodySystem sys(circular_binary());
    NBodyTrajectory tr = simulate_nbody(sys, cfg_mid(1e-3, 3.0));
    CHECK(cover_consistency(sys, tr.base) < 1e-14);
    // the sign sheet is fixed along the run: z_ij keeps the branch sign
    for (const auto& z : tr.base.states) CHECK(sys.cover_value(z.data(), 0, 1) > 0);

    CoverState cs = cover_state(sys, tr.base.back_state().data());
    REQUIRE(cs.z.size() == 1);
    double d = (cs.positions[0] - cs.positions[1]).norm();
    CHECK(cs.z[0] * cs.z[0] == d * d);
}

TEST_CASE("time reversal returns to the initial state") {
    NBodySystem sys(circular_binary());
    IntegratorConfig cfg = cfg_mid(1e-3, 3.0);
    NBodyTrajectory fwd = simulate_nbody(sys, cfg);
    REQUIRE(fwd.base.reason == StopReason::Horizon);

    NBodyConfig back_cfg = sys.config();
    const auto& zf = fwd.base.back_state();
    std::size_t n = 2;
    for (std::size_t i = 0; i < n; ++i) {
        double pm = 1.0; // masses are 1 here
        for (int a = 0; a < 3; ++a) {
            back_cfg.bodies[i].position[a] = zf[3 * i + static_cast<std::size_t>(a)];
            back_cfg.bodies[i].velocity[a] =
                -zf[3 * (n + i) + static_cast<std::size_t>(a)] / pm;
        }
    }
    NBodySystem back(back_cfg);
    NBodyTrajectory rev = simulate_nbody(back, cfg);
    const auto& z0 = fwd.base.states.front();
    const auto& zr = rev.base.back_state();
    for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(zr[i] - z0[i]) < 1e-6);
}

TEST_CASE("paper-literal kinetic mode") {
    NBodyConfig cfg = circular_binary();
    cfg.mode = KineticMode::PaperLiteral;
    NBodySystem sys(cfg);
    std::vector<double> z = sys.initial_state();
    // unit-mass kinetic term: p = v regardless of mass, H = sum |p|^2/2 + V
    CHECK(sys.hamiltonian(z.data()) == doctest::Approx(-0.5).epsilon(1e-12));
    NBodyTrajectory tr = simulate_nbody(sys, cfg_mid(1e-3, 2.0));
    CHECK(tr.base.energy_drift() < 1e-8);
}
