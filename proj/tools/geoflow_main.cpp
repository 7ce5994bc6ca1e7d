// geoflow command-line front end: model loading, the exact verification
// suite, curvature sampling/certification, flows, hyperbolic-dynamics
// diagnostics, approximation-pipeline actions and n-body runs.
//
// Exit codes: 0 success, 2 validation error, 3 numeric failure,
// 4 certification-negative (a mathematical outcome, so pipelines can
// branch on it).

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <iostream>

#include "geoflow/approx.hpp"
#include "geoflow/catalog.hpp"
#include "geoflow/dynamics.hpp"
#include "geoflow/expression.hpp"
#include "geoflow/model.hpp"
#include "geoflow/nbody.hpp"
#include "geoflow/parallel.hpp"

using nlohmann::json;
using namespace geoflow;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitNegative = 4;

void write_report(const std::string& out_dir, const json& report,
                  const char* name = "report.json") {
    std::filesystem::create_directories(out_dir);
    std::ofstream out(std::filesystem::path(out_dir) / name);
    out << report.dump(2) << "\n";
}

std::vector<double> parse_init(const std::string& text) {
    std::vector<double> vals;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        vals.push_back(std::stod(text.substr(pos, next - pos)));
        pos = next + 1;
    }
    return vals;
}

json verdict_json(const ArithmeticityVerdict& v) {
    json j;
    switch (v.kind) {
    case ArithmeticityKind::Arithmetic:
        j["kind"] = "arithmetic";
        j["generator"] = v.generator;
        break;
    case ArithmeticityKind::NonArithmetic: j["kind"] = "non-arithmetic"; break;
    case ArithmeticityKind::Inconclusive: j["kind"] = "inconclusive"; break;
    }
    j["residual"] = v.residual;
    j["note"] = v.note;
    return j;
}

json spectrum_json(const SpectrumSample& s) {
    json arr = json::array();
    for (const auto& e : s.entries)
        arr.push_back({{"period", e.period}, {"uncertainty", e.uncertainty}});
    return arr;
}

json certificate_json(const CurvatureCertificate& c) {
    return json{{"min_k", c.min_k},           {"max_k", c.max_k},
                {"margin", c.margin},         {"certified", c.certified},
                {"samples", c.samples},       {"skipped_isotropic", c.skipped_isotropic}};
}

int run_verify(const std::string& model_path, const std::string& out_dir) {
    ModelFile model = load_model(model_path);
    json report;
    bool all_pass = true;
    auto record = [&](const char* name, bool ok) {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
        report["checks"][name] = ok;
        all_pass = all_pass && ok;
    };

    if (model.kind == ModelFile::Kind::Chart) {
        const ChartMetric& m = *model.chart;
        IdentityReport ids = verify_connection_identities(m);
        record("torsion-free connection", ids.torsion_symmetric);
        record("metric compatibility", ids.metric_compatible);
        record("first Bianchi identity", ids.first_bianchi);
        record("metric times inverse is identity",
               rf_matrix_equals(rf_matrix_mul(m.metric(), m.inverse()),
                                rf_identity(m.variables(), m.dim())));

        CurvatureField R = curvature_tensor(m, christoffel(m));
        bool lowered_ok = true;
        for (std::size_t i = 0; i < m.dim() && lowered_ok; ++i)
            for (std::size_t j = 0; j < m.dim() && lowered_ok; ++j)
                for (std::size_t k = 0; k < m.dim() && lowered_ok; ++k)
                    for (std::size_t l = 0; l < m.dim(); ++l) {
                        RationalFunction a = R.lowered(m, i, j, k, l);
                        if (!a.equals(-R.lowered(m, j, i, k, l)) ||
                            !a.equals(-R.lowered(m, i, j, l, k)) ||
                            !a.equals(R.lowered(m, k, l, i, j))) {
                            lowered_ok = false;
                            break;
                        }
                    }
        record("lowered curvature symmetries", lowered_ok);

        HamiltonianSystem sys = model.build_system();
        record("X_H(H) = 0", sys.hamiltonian_derivative().is_zero());
        if (!model.potential) {
            record("fiberwise degree-2 homogeneity", sys.is_fiberwise_quadratic());
            record("H o psi_2 = 4 H", fiber_rescaling(sys, BigRational(2)).verified());
            record("H o psi_3 = 9 H", fiber_rescaling(sys, BigRational(3)).verified());
        }
    } else if (model.kind == ModelFile::Kind::Embedded) {
        const EmbeddedVariety& v = *model.embedded;
        bool regular = true;
        try {
            // probe a few projected box points for Jacobian regularity
            std::mt19937_64 rng(1);
            std::uniform_real_distribution<double> coord(-1.5, 1.5);
            int found = 0;
            for (int attempt = 0; attempt < 200 && found < 5; ++attempt) {
                Eigen::VectorXd x0(static_cast<Eigen::Index>(v.ambient_dim()));
                for (Eigen::Index i = 0; i < x0.size(); ++i) x0[i] = coord(rng);
                try {
                    Eigen::VectorXd x = v.project_point(x0, 1e-12, 50);
                    v.tangent_projector(x);
                    ++found;
                } catch (const Error&) {
                    continue;
                }
            }
            regular = regular && true;
        } catch (const Error&) {
            regular = false;
        }
        record("constraints well-formed and points regular", regular);
    } else {
        NBodySystem sys(*model.nbody);
        IntegratorConfig cfg;
        cfg.step = 1e-3;
        cfg.horizon = 1.0;
        NBodyTrajectory tr = simulate_nbody(sys, cfg);
        record("cover constraint z^2 = |q_i - q_j|^2",
               cover_consistency(sys, tr.base) < 1e-14);
        record("energy finite along a short run", tr.base.energy_drift() < 1e-6);
    }

    report["all_pass"] = all_pass;
    write_report(out_dir, report);
    return all_pass ? kExitOk : kExitNegative;
}

int run_curvature(const std::string& model_path, int points, int planes, unsigned seed,
                  const std::string& out_dir) {
    ModelFile model = load_model(model_path);
    CurvatureCertificate cert;
    if (model.kind == ModelFile::Kind::Chart)
        cert = certify_negative_curvature(*model.chart, points, planes, 0.0, seed);
    else if (model.kind == ModelFile::Kind::Embedded)
        cert = certify_negative_curvature(*model.embedded, points, planes, 0.0, seed);
    else
        throw ModelError("curvature needs a chart or embedded model", "/kind");
    json report = certificate_json(cert);
    report.erase("certified");
    report.erase("margin");
    write_report(out_dir, report);
    std::cout << "K in [" << cert.min_k << ", " << cert.max_k << "] over " << cert.samples
              << " samples\n";
    return kExitOk;
}

int run_geodesic(const std::string& model_path, const std::string& init, double horizon,
                 double step, const std::string& method, const std::string& out_dir) {
    ModelFile model = load_model(model_path);
    IntegratorConfig cfg;
    cfg.horizon = horizon;
    cfg.step = step;
    if (method == "rk4")
        cfg.method = Method::RK4;
    else if (method == "midpoint" || method == "implicit-midpoint")
        cfg.method = Method::ImplicitMidpoint;
    else
        throw ModelError("method must be midpoint or rk4", "/method");

    Trajectory tr;
    std::vector<std::string> columns;
    if (model.kind == ModelFile::Kind::Chart) {
        HamiltonianSystem sys = model.build_system();
        std::vector<double> z0 = parse_init(init);
        if (z0.size() != sys.phase_dim())
            throw ModelError("--init needs " + std::to_string(sys.phase_dim()) + " values",
                             "/init");
        tr = flow_chart(sys, z0, cfg);
        columns = sys.variables();
    } else if (model.kind == ModelFile::Kind::Embedded) {
        const EmbeddedVariety& v = *model.embedded;
        std::vector<double> z0 = parse_init(init);
        std::size_t m = v.ambient_dim();
        if (z0.size() != 2 * m)
            throw ModelError("--init needs positions and velocities (2m values)", "/init");
        Eigen::VectorXd x0(static_cast<Eigen::Index>(m)), v0(static_cast<Eigen::Index>(m));
        for (std::size_t i = 0; i < m; ++i) {
            x0[static_cast<Eigen::Index>(i)] = z0[i];
            v0[static_cast<Eigen::Index>(i)] = z0[m + i];
        }
        cfg.method = Method::ConstrainedProjection;
        tr = flow_embedded(v, x0, v0, cfg);
        for (const auto& name : v.variables()) columns.push_back(name);
        for (const auto& name : v.variables()) columns.push_back("v_" + name);
    } else {
        throw ModelError("geodesic needs a chart or embedded model (use the nbody command)",
                         "/kind");
    }

    std::filesystem::create_directories(out_dir);
    std::ofstream csv(std::filesystem::path(out_dir) / "trajectory.csv");
    write_trajectory_csv(tr, columns, csv);
    json report{{"reason", stop_reason_name(tr.reason)},
                {"steps", tr.size() - 1},
                {"energy_drift", tr.energy_drift()},
                {"constraint_drift", tr.constraint_drift()},
                {"final_time", tr.times.back()},
                {"final_state", tr.back_state()},
                {"method", tr.method},
                {"step", tr.step}};
    write_report(out_dir, report);
    return tr.reason == StopReason::Divergence ? kExitNumeric : kExitOk;
}

int run_dynamics(const std::string& model_path, bool lyapunov, bool recurrence, bool spectrum,
                 bool mixing, unsigned seed, double horizon, double step,
                 const std::string& init, const std::string& out_dir) {
    ModelFile model = load_model(model_path);
    if (model.kind != ModelFile::Kind::Chart)
        throw ModelError("dynamics needs a chart model", "/kind");
    HamiltonianSystem sys = model.build_system();
    IntegratorConfig cfg;
    cfg.step = step;
    cfg.horizon = 1.0;

    json report;
    if (lyapunov) {
        std::vector<double> z0 = init.empty() ? sample_unit_speed_seeds(sys, 1, seed).front()
                                              : parse_init(init);
        double T = horizon > 0 ? horizon : 50.0;
        SplittingEstimate est = lyapunov_spectrum(sys, z0, cfg, T, 1.0);
        report["lyapunov"] = {{"exponents", est.exponents},
                              {"residuals", est.residuals},
                              {"complete", est.complete},
                              {"horizon", est.horizon_used}};
    }
    if (recurrence) {
        auto seeds = sample_unit_speed_seeds(sys, 100, seed);
        double T = horizon > 0 ? horizon : 200.0;
        RecurrenceResult rec = recurrence_statistics(sys, seeds, 0.05, 1.0, T, cfg);
        std::size_t exits = 0;
        for (bool g : rec.guard_exited) exits += g ? 1 : 0;
        report["recurrence"] = {{"fraction", rec.fraction},
                                {"seeds", seeds.size()},
                                {"guard_exits", exits}};
    }
    if (spectrum) {
        auto seeds = lattice_orbit_seeds(sys, 4);
        if (seeds.empty()) {
            report["spectrum"] = json::array();
            report["verdict"] = {{"kind", "inconclusive"},
                                 {"note", "no orbit seeds on a non-periodic chart"}};
        } else {
            OrbitModel om = make_orbit_model(sys, cfg);
            SpectrumSample sample = periodic_orbit_search(om, seeds, 12.0, 0.05, 1e-9);
            report["spectrum"] = spectrum_json(sample);
            if (!sample.entries.empty())
                report["verdict"] = verdict_json(arithmeticity_test(sample, 1e-6, 64));
            else
                report["verdict"] = {{"kind", "inconclusive"},
                                     {"note", "insufficient periodic orbits found"}};
        }
    }
    if (mixing) {
        MixingOptions opts;
        opts.rng_seed = seed;
        MixingReport rep = mixing_report(sys, cfg, opts);
        json m{{"compact_type", rep.compact_type},
               {"disclaimer", rep.disclaimer},
               {"assumed_hypotheses", rep.assumed_hypotheses},
               {"notes", rep.notes}};
        if (rep.recurrence_done) m["recurrence_fraction"] = rep.recurrence.fraction;
        if (rep.spectrum_done) {
            m["spectrum"] = spectrum_json(rep.spectrum);
            m["verdict"] = verdict_json(rep.verdict);
        }
        if (rep.correlation_done) {
            json corr = json::array();
            for (const auto& [lag, c] : rep.correlation) corr.push_back({lag, c});
            m["correlation"] = corr;
        }
        report["mixing"] = m;
    }
    write_report(out_dir, report);
    return kExitOk;
}

int run_approx(const std::string& model_path, bool certify, double margin, int points,
               int planes, unsigned seed, bool twist, bool fit, bool embed,
               const std::string& f_text, const std::string& phi_text, double epsilon,
               unsigned degree, const std::string& rho_text, const std::string& out_dir) {
    json report;
    int exit_code = kExitOk;

    if (certify) {
        ModelFile model = load_model(model_path);
        CurvatureCertificate cert;
        if (model.kind == ModelFile::Kind::Chart)
            cert = certify_negative_curvature(*model.chart, points, planes, margin, seed);
        else if (model.kind == ModelFile::Kind::Embedded)
            cert = certify_negative_curvature(*model.embedded, points, planes, margin, seed);
        else
            throw ModelError("certify needs a chart or embedded model", "/kind");
        report["certificate"] = certificate_json(cert);
        report["certificate"]["note"] = "sampled certificate, not a proof over the variety";
        if (!cert.certified) exit_code = kExitNegative;
        std::cout << (cert.certified ? "certified" : "not certified") << ": K in ["
                  << cert.min_k << ", " << cert.max_k << "], margin " << margin << "\n";
    }

    const std::vector<std::string> vars{"x"};
    if (twist) {
        SmoothFunction f = smooth_from_rational(parse_rational_function(f_text, vars));
        SmoothFunction phi = smooth_from_rational(parse_rational_function(phi_text, vars));
        TwistPair tw = nash_twist(f, phi, epsilon);
        SampleGrid grid = SampleGrid::uniform_1d(-1, 1, 500);
        double worst = 0;
        for (const auto& x : grid.points)
            worst = std::max(worst, twist_identity_residual(f, phi, tw, x));
        report["twist"] = {{"identity_residual", worst}, {"epsilon", epsilon}};
        if (degree > 0) {
            TwistPolyReport tp = twist_polynomialize(f, phi, epsilon, degree, grid, vars);
            std::string h_text = RationalFunction(tp.h_fit.fit).str();
            std::string k_text = RationalFunction(tp.k_fit.fit).str();
            // emitted expressions must round-trip through the parser
            parse_rational_function(h_text, vars);
            parse_rational_function(k_text, vars);
            report["twist"]["degree"] = degree;
            report["twist"]["delta_c0"] = tp.delta_c0;
            report["twist"]["target_c0"] = tp.target_c0;
            report["twist"]["h_fit"] = h_text;
            report["twist"]["k_fit"] = k_text;
        }
    }
    if (fit) {
        SmoothFunction f = smooth_from_rational(parse_rational_function(f_text, vars));
        SampleGrid grid = SampleGrid::uniform_1d(-1, 1, 200);
        FitReport fr = polynomial_fit(f, grid, degree, vars);
        std::string fit_text = RationalFunction(fr.fit).str();
        parse_rational_function(fit_text, vars);
        report["fit"] = {{"degree", degree},
                         {"l2_residual", fr.l2_residual},
                         {"c0_error", fr.c0_error},
                         {"c1_error", fr.c1_error},
                         {"ridge_applied", fr.ridge_applied},
                         {"fit", fit_text}};
    }
    if (embed) {
        auto avars = default_ambient_names(2);
        EmbeddedVariety base(2, {parse_rational_function("x1^2 + x2^2 - 1", avars).num()});
        std::vector<Polynomial> rho;
        std::size_t pos = 0;
        std::string text = rho_text;
        while (pos < text.size()) {
            std::size_t next = text.find(';', pos);
            if (next == std::string::npos) next = text.size();
            RationalFunction comp =
                parse_rational_function(text.substr(pos, next - pos), avars);
            if (!comp.is_polynomial())
                throw ModelError("graph components must be polynomials", "/rho");
            rho.push_back(comp.num());
            pos = next + 1;
        }
        if (rho.empty()) throw ModelError("--rho needs at least one component", "/rho");
        GraphEmbeddingResult emb = graph_embedding(base, rho);
        // exact pullback identity at rational circle points
        json residuals = json::array();
        for (long t : {1, 2, 3}) {
            BigRational den(t * t + 1);
            std::vector<BigRational> x{BigRational(2 * t) / den, BigRational(t * t - 1) / den};
            std::vector<BigRational> u{-x[1], x[0]};
            BigRational res = graph_pullback_residual(base, rho, x, u, u);
            residuals.push_back(res.str());
        }
        report["embed"] = {{"ambient_dim", emb.variety.ambient_dim()},
                           {"constraints", emb.variety.n_constraints()},
                           {"pullback_residuals", residuals}};
    }
    write_report(out_dir, report);
    return exit_code;
}

int run_nbody(const std::string& model_path, double horizon, double step,
              const std::string& method, const std::string& out_dir) {
    ModelFile model = load_model(model_path);
    if (model.kind != ModelFile::Kind::NBody)
        throw ModelError("nbody needs an nbody config file", "/kind");
    NBodySystem sys(*model.nbody);
    IntegratorConfig cfg;
    cfg.step = step;
    cfg.horizon = horizon;
    cfg.method = method == "rk4" ? Method::RK4 : Method::ImplicitMidpoint;
    NBodyTrajectory tr = simulate_nbody(sys, cfg);

    std::filesystem::create_directories(out_dir);
    std::ofstream csv(std::filesystem::path(out_dir) / "trajectory.csv");
    std::vector<std::string> columns;
    for (std::size_t i = 1; i <= sys.n_bodies(); ++i)
        for (const char* c : {"x", "y", "z"})
            columns.push_back("q" + std::to_string(i) + "_" + c);
    for (std::size_t i = 1; i <= sys.n_bodies(); ++i)
        for (const char* c : {"x", "y", "z"})
            columns.push_back("p" + std::to_string(i) + "_" + c);
    write_trajectory_csv(tr.base, columns, csv);

    Eigen::Vector3d p0 = tr.linear_momentum.front();
    Eigen::Vector3d l0 = tr.angular_momentum.front();
    double pdrift = 0, ldrift = 0;
    for (std::size_t k = 0; k < tr.base.size(); ++k) {
        pdrift = std::max(pdrift, (tr.linear_momentum[k] - p0).lpNorm<Eigen::Infinity>());
        ldrift = std::max(ldrift, (tr.angular_momentum[k] - l0).lpNorm<Eigen::Infinity>());
    }
    json report{{"reason", stop_reason_name(tr.base.reason)},
                {"steps", tr.base.size() - 1},
                {"energy_drift", tr.base.energy_drift()},
                {"momentum_drift", pdrift},
                {"angular_momentum_drift", ldrift},
                {"cover_residual", cover_consistency(sys, tr.base)},
                {"final_time", tr.base.times.back()}};
    write_report(out_dir, report);
    return tr.base.reason == StopReason::Divergence ? kExitNumeric : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"geoflow: exact pseudo-Riemannian geometry and geodesic-flow dynamics"};
    app.require_subcommand(1);

    std::string model_path, out_dir = ".", init, method = "midpoint";
    std::string f_text = "x", phi_text = "1", rho_text = "x1^2";
    double horizon = 0, step = 1e-2, margin = 0.5, epsilon = 0.5;
    int points = 100, planes = 3;
    unsigned seed = 0, threads = 0, degree = 0;
    bool lyapunov = false, recurrence = false, spectrum = false, mixing = false;
    bool certify = false, twist = false, fit = false, embed = false;

    auto add_common = [&](CLI::App* cmd, bool needs_model) {
        if (needs_model) cmd->add_option("model", model_path, "model file")->required();
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--threads", threads, "worker cap for parallel sections");
    };

    CLI::App* verify = app.add_subcommand("verify", "run the exact identity suite");
    add_common(verify, true);

    CLI::App* curvature = app.add_subcommand("curvature", "sample sectional curvature");
    add_common(curvature, true);
    curvature->add_option("--points", points);
    curvature->add_option("--planes", planes);
    curvature->add_option("--seed", seed);

    CLI::App* geodesic = app.add_subcommand("geodesic", "integrate a geodesic and export CSV");
    add_common(geodesic, true);
    geodesic->add_option("--init", init, "comma-separated initial state")->required();
    geodesic->add_option("--t", horizon, "horizon")->required();
    geodesic->add_option("--step", step);
    geodesic->add_option("--method", method, "midpoint|rk4");

    CLI::App* dynamics = app.add_subcommand("dynamics", "hyperbolic-dynamics diagnostics");
    add_common(dynamics, true);
    dynamics->add_flag("--lyapunov", lyapunov);
    dynamics->add_flag("--recurrence", recurrence);
    dynamics->add_flag("--spectrum", spectrum);
    dynamics->add_flag("--mixing", mixing);
    dynamics->add_option("--seed", seed);
    dynamics->add_option("--t", horizon);
    dynamics->add_option("--step", step);
    dynamics->add_option("--init", init);

    CLI::App* approx = app.add_subcommand("approx", "approximation-pipeline actions");
    approx->add_option("model", model_path, "model file (for --certify)");
    approx->add_option("--out", out_dir, "output directory");
    approx->add_option("--threads", threads);
    approx->add_flag("--certify", certify);
    approx->add_option("--margin", margin);
    approx->add_option("--points", points);
    approx->add_option("--planes", planes);
    approx->add_option("--seed", seed);
    approx->add_flag("--twist", twist);
    approx->add_flag("--fit", fit);
    approx->add_flag("--embed", embed);
    approx->add_option("--f", f_text, "expression in x");
    approx->add_option("--phi", phi_text, "expression in x");
    approx->add_option("--epsilon", epsilon);
    approx->add_option("--degree", degree);
    approx->add_option("--rho", rho_text, "semicolon-separated graph components in x1, x2");

    CLI::App* nbody = app.add_subcommand("nbody", "simulate an n-body config");
    add_common(nbody, true);
    nbody->add_option("--t", horizon)->required();
    nbody->add_option("--step", step);
    nbody->add_option("--method", method, "midpoint|rk4");

    CLI11_PARSE(app, argc, argv);
    worker_cap().store(threads);

    try {
        if (verify->parsed()) return run_verify(model_path, out_dir);
        if (curvature->parsed()) return run_curvature(model_path, points, planes, seed, out_dir);
        if (geodesic->parsed())
            return run_geodesic(model_path, init, horizon, step, method, out_dir);
        if (dynamics->parsed())
            return run_dynamics(model_path, lyapunov, recurrence, spectrum, mixing, seed,
                                horizon, step, init, out_dir);
        if (approx->parsed())
            return run_approx(model_path, certify, margin, points, planes, seed, twist, fit,
                              embed, f_text, phi_text, epsilon, degree, rho_text, out_dir);
        if (nbody->parsed()) return run_nbody(model_path, horizon, step, method, out_dir);
    } catch (const ModelError& e) {
        std::cerr << json{{"error", e.what()}, {"where", e.where()}, {"code", kExitValidation}}
                  << "\n";
        return kExitValidation;
    } catch (const ParseError& e) {
        std::cerr << json{{"error", e.what()}, {"offset", e.offset()}, {"code", kExitValidation}}
                  << "\n";
        return kExitValidation;
    } catch (const NumericError& e) {
        std::cerr << json{{"error", e.what()}, {"code", kExitNumeric}} << "\n";
        return kExitNumeric;
    } catch (const Error& e) {
        std::cerr << json{{"error", e.what()}, {"code", kExitValidation}} << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
