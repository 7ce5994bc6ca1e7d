#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "geoflow/catalog.hpp"
#include "geoflow/expression.hpp"
#include "geoflow/integrate.hpp"

using namespace geoflow;

namespace {

constexpr double kPi = 3.14159265358979323846;

HamiltonianSystem harmonic_oscillator() {
    std::vector<std::string> vars{"x", "p_x"};
    RationalFunction h = parse_rational_function("1/2*(p_x^2 + x^2)", vars);
    return hamiltonian_vector_field(h, 1);
}

IntegratorConfig cfg_mid(double step, double horizon) {
    IntegratorConfig c;
    c.method = Method::ImplicitMidpoint;
    c.step = step;
    c.horizon = horizon;
    return c;
}

} // namespace

TEST_CASE("harmonic oscillator closes a period") {
    Trajectory tr = flow_chart(harmonic_oscillator(), {1.0, 0.0}, cfg_mid(1e-3, 2 * kPi));
    REQUIRE(tr.reason == StopReason::Horizon);
    CHECK(tr.times.back() == doctest::Approx(2 * kPi).epsilon(1e-14));
    CHECK(std::abs(tr.back_state()[0] - 1.0) < 1e-6);
    CHECK(std::abs(tr.back_state()[1] - 0.0) < 1e-6);
    // exact solution (cos t, -sin t) along the way
    for (std::size_t k = 0; k < tr.size(); k += 500) {
        double t = tr.times[k];
        CHECK(std::abs(tr.states[k][0] - std::cos(t)) < 1e-6);
        CHECK(std::abs(tr.states[k][1] + std::sin(t)) < 1e-6);
    }
}

TEST_CASE("half-plane vertical geodesic grows like e^t") {
    HamiltonianSystem sys = geodesic_hamiltonian(catalog::halfplane());
    Trajectory tr = flow_chart(sys, {0.0, 1.0, 0.0, 1.0}, cfg_mid(1e-3, 1.0));
    REQUIRE(tr.reason == StopReason::Horizon);
    CHECK(std::abs(tr.back_state()[1] - std::exp(1.0)) < 1e-5);
    CHECK(std::abs(tr.back_state()[0]) < 1e-12);
}

TEST_CASE("euclidean free flow is a straight line with exact energy") {
    HamiltonianSystem sys = geodesic_hamiltonian(catalog::euclidean(2));
    Trajectory tr = flow_chart(sys, {0.0, 0.0, 0.6, 0.8}, cfg_mid(1e-2, 10.0));
    REQUIRE(tr.reason == StopReason::Horizon);
    CHECK(std::abs(tr.back_state()[0] - 6.0) < 1e-10);
    CHECK(std::abs(tr.back_state()[1] - 8.0) < 1e-10);
    CHECK(tr.energy_drift() < 1e-14);
    CHECK(tr.constraint_drift() < 1e-13); // C = |p|^2 - 1 = 0 along the run
}

TEST_CASE("guard handling") {
    HamiltonianSystem sys = geodesic_hamiltonian(catalog::halfplane());
    CHECK_THROWS_AS(flow_chart(sys, {0.0, 0.0, 0.0, 1.0}, cfg_mid(1e-3, 1.0)), GeometryError);

    // downward vertical geodesic approaches y = 0 and must stop cleanly
    Trajectory tr = flow_chart(sys, {0.0, 1.0, 0.0, -1.0}, cfg_mid(1e-3, 50.0));
    CHECK(tr.reason == StopReason::GuardExit);
    for (const auto& s : tr.states) CHECK(s[1] > 0);
}

TEST_CASE("fixed-point non-convergence reports the step") {
    // (h/2) * Lipschitz > 1: iteration stays finite but cannot contract
    CHECK_THROWS_AS(flow_chart(harmonic_oscillator(), {1.0, 0.0}, cfg_mid(2.5, 5.0)),
                    NumericError);
}

TEST_CASE("energy and sphere-bundle drift on bundled systems") {
    struct Case {
        ChartMetric m;
        std::vector<double> z0;
        double horizon;
    };
    std::vector<Case> cases;
    cases.push_back({catalog::euclidean(2), {0, 0, 0.6, 0.8}, 100.0});
    cases.push_back({catalog::halfplane(), {0, 1, 0, 1}, 100.0});
    cases.push_back({catalog::flat_torus(), {0.1, 0.2, 0.6, 0.8}, 100.0});
    cases.push_back({catalog::stereographic_sphere(BigRational(1)), {1, 0, 0, 1}, 100.0});
    for (const auto& c : cases) {
        HamiltonianSystem sys = geodesic_hamiltonian(c.m);
        Trajectory tr = flow_chart(sys, c.z0, cfg_mid(1e-3, c.horizon));
        REQUIRE(tr.reason == StopReason::Horizon);
        CHECK(tr.energy_drift() <= 1e-8);
        CHECK(tr.constraint_drift() <= 1e-8);
    }
}

TEST_CASE("reversibility of the symmetric method") {
    HamiltonianSystem sys = geodesic_hamiltonian(catalog::halfplane());
    NumericSystem num(sys);
    std::vector<double> z{0.3, 1.2, 0.4, 0.5};
    std::vector<double> z0 = z;
    IntegratorConfig cfg = cfg_mid(1e-3, 1.0);
    integrate_observe(num, z, 1.0, cfg.step, cfg, [](double, const double*) { return true; });
    integrate_observe(num, z, 1.0, -cfg.step, cfg, [](double, const double*) { return true; });
    for (std::size_t a = 0; a < 4; ++a) CHECK(std::abs(z[a] - z0[a]) < 1e-7);
}

TEST_CASE("rk4 order on the harmonic oscillator") {
    auto global_error = [&](double h) {
        IntegratorConfig c = cfg_mid(h, 1.0);
        c.method = Method::RK4;
        Trajectory tr = flow_chart(harmonic_oscillator(), {1.0, 0.0}, c);
        double ex = std::cos(1.0), ep = -std::sin(1.0);
        return std::hypot(tr.back_state()[0] - ex, tr.back_state()[1] - ep);
    };
    double e1 = global_error(1e-2);
    double e2 = global_error(5e-3);
    double e3 = global_error(2.5e-3);
    double order12 = std::log2(e1 / e2);
    double order23 = std::log2(e2 / e3);
    CHECK(order12 >= 3.8);
    CHECK(order23 >= 3.8);
}

TEST_CASE("embedded sphere great circle") {
    EmbeddedVariety sphere = catalog::unit_sphere();
    Eigen::Vector3d x0(1, 0, 0), v0(0, 1, 0);

    IntegratorConfig cfg = cfg_mid(1e-4, kPi);
    cfg.method = Method::ConstrainedProjection;
    Trajectory tr = flow_embedded(sphere, x0, v0, cfg);
    REQUIRE(tr.reason == StopReason::Horizon);
    CHECK(std::abs(tr.back_state()[0] + 1.0) < 1e-6);
    CHECK(std::abs(tr.back_state()[1]) < 1e-6);
    CHECK(std::abs(tr.back_state()[2]) < 1e-6);

    cfg.horizon = kPi / 2;
    Trajectory half = flow_embedded(sphere, x0, v0, cfg);
    CHECK(std::abs(half.back_state()[0]) < 1e-6);
    CHECK(std::abs(half.back_state()[1] - 1.0) < 1e-6);

    // kinetic energy and constraints hold along the run
    CHECK(tr.energy_drift() < 1e-10);
    for (double c : tr.constraint) CHECK(std::abs(c) < 1e-9);
}

TEST_CASE("embedded plane keeps straight lines exactly") {
    EmbeddedVariety plane = catalog::flat_plane();
    Eigen::Vector3d x0(0.1, -0.2, 0), v0(1, 2, 0);
    IntegratorConfig cfg = cfg_mid(1e-3, 2.0);
    cfg.method = Method::ConstrainedProjection;
    Trajectory tr = flow_embedded(plane, x0, v0, cfg);
    CHECK(std::abs(tr.back_state()[0] - 2.1) < 1e-10);
    CHECK(std::abs(tr.back_state()[1] - 3.8) < 1e-10);
    for (double c : tr.constraint) CHECK(std::abs(c) < 1e-12);
}

TEST_CASE("embedded flow rejects bad initial data") {
    EmbeddedVariety sphere = catalog::unit_sphere();
    IntegratorConfig cfg = cfg_mid(1e-3, 1.0);
    cfg.method = Method::ConstrainedProjection;
    CHECK_THROWS_AS(flow_embedded(sphere, Eigen::Vector3d(2, 0, 0), Eigen::Vector3d(0, 1, 0), cfg),
                    GeometryError);
}

TEST_CASE("variational flow: flat growth is at most linear") {
    HamiltonianSystem sys = geodesic_hamiltonian(catalog::euclidean(2));
    VariationalTrajectory vt =
        variational_flow(sys, {0, 0, 1, 0}, {0, 0, 1, 1}, cfg_mid(1e-2, 20.0));
    REQUIRE(vt.reason == StopReason::Horizon);
    double n0 = vt.tangent_norms.front();
    double nT = vt.tangent_norms.back();
    CHECK(nT <= n0 * (1.0 + 20.0) * 1.5);
}

TEST_CASE("variational flow on the half-plane: Jacobi growth rate 1") {
    HamiltonianSystem sys = geodesic_hamiltonian(catalog::halfplane());
    std::vector<double> z0{0, 1, 0, 1};
    // generic perturbation picks up the unstable e^t direction
    VariationalTrajectory vt = variational_flow(sys, z0, {1, 0, 0.5, 0}, cfg_mid(1e-3, 30.0));
    REQUIRE(vt.reason == StopReason::Horizon);
    double rate = std::log(vt.tangent_norms.back() / vt.tangent_norms.front()) / 30.0;
    CHECK(std::abs(rate - 1.0) < 0.05);

    // flow-direction perturbation stays neutral
    NumericSystem num(sys);
    std::vector<double> u0(4);
    num.field(z0.data(), u0.data());
    VariationalTrajectory flowdir = variational_flow(sys, z0, u0, cfg_mid(1e-3, 30.0));
    double drift =
        std::log(flowdir.tangent_norms.back() / flowdir.tangent_norms.front()) / 30.0;
    CHECK(std::abs(drift) < 0.02);
}

TEST_CASE("rescaling conjugacy") {
    HamiltonianSystem hp = geodesic_hamiltonian(catalog::halfplane());
    IntegratorConfig cfg = cfg_mid(1e-4, 1.0);
    CHECK(rescaling_conjugacy_check(hp, {0, 1, 0, 1}, 2.0, 1.0, cfg) < 1e-6);
    CHECK(rescaling_conjugacy_check(hp, {0, 1, 0, 1}, 1.0, 1.0, cfg) == 0.0);
    CHECK(rescaling_conjugacy_check(hp, {0.2, 1.0, 0.3, 0.9}, -1.0, 1.0, cfg) < 1e-6);

    HamiltonianSystem sp = geodesic_hamiltonian(catalog::stereographic_sphere(BigRational(1)));
    CHECK(rescaling_conjugacy_check(sp, {1, 0, 0, 1}, 2.0, 1.0, cfg) < 1e-6);

    ChartMetric eu = catalog::euclidean(2);
    HamiltonianSystem withv =
        geodesic_hamiltonian(eu, parse_rational_function("x^2", eu.variables()));
    CHECK_THROWS_AS(rescaling_conjugacy_check(withv, {0, 0, 1, 0}, 2.0, 1.0, cfg), Error);
}

TEST_CASE("embedded and chart sphere flows agree through stereographic projection") {
    ChartMetric chart = catalog::stereographic_sphere(BigRational(1));
    HamiltonianSystem chart_sys = geodesic_hamiltonian(chart);
    Trajectory chart_tr = flow_chart(chart_sys, {1.0, 0.0, 0.0, 1.0}, cfg_mid(1e-4, 1.0));

    auto to_ambient = [](double u, double v) {
        double r2 = u * u + v * v;
        return Eigen::Vector3d(2 * u / (1 + r2), 2 * v / (1 + r2), (r2 - 1) / (1 + r2));
    };
    EmbeddedVariety sphere = catalog::unit_sphere();
    // ambient velocity = d(projection)/dt at t=0 for the chart initial data
    Eigen::Vector3d x0 = to_ambient(1.0, 0.0);
    double fd = 1e-7;
    // chart velocity from the field: xdot = g^{-1} p = (0, 1) at (1, 0)
    Eigen::Vector3d v0 = (to_ambient(1.0, fd) - to_ambient(1.0, -fd)) / (2 * fd);
    v0 = sphere.project_velocity(x0, v0);

    IntegratorConfig ecfg = cfg_mid(1e-4, 1.0);
    ecfg.method = Method::ConstrainedProjection;
    Trajectory emb_tr = flow_embedded(sphere, x0, v0, ecfg);

    REQUIRE(chart_tr.size() == emb_tr.size());
    double worst = 0;
    for (std::size_t k = 0; k < chart_tr.size(); k += 100) {
        Eigen::Vector3d mapped = to_ambient(chart_tr.states[k][0], chart_tr.states[k][1]);
        Eigen::Vector3d actual(emb_tr.states[k][0], emb_tr.states[k][1], emb_tr.states[k][2]);
        worst = std::max(worst, (mapped - actual).lpNorm<Eigen::Infinity>());
    }
    CHECK(worst < 1e-5);
}

TEST_CASE("csv export shape") {
    HamiltonianSystem sys = geodesic_hamiltonian(catalog::euclidean(2));
    Trajectory tr = flow_chart(sys, {0, 0, 1, 0}, cfg_mid(0.1, 0.5));
    std::ostringstream os;
    write_trajectory_csv(tr, sys.variables(), os);
    std::string text = os.str();
    CHECK(text.substr(0, text.find('\n')) == "t,x,y,p_x,p_y,H,C");
    std::size_t lines = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
    CHECK(lines == tr.size() + 1);
}
