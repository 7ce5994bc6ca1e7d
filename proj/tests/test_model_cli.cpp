#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "geoflow/model.hpp"

using namespace geoflow;
using nlohmann::json;

namespace {

std::string models_dir = GEOFLOW_MODELS_DIR;
std::string cli = GEOFLOW_CLI_BIN;

int run_cli(const std::string& args) {
    std::string cmd = cli + " " + args + " > /dev/null 2>/dev/null";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json load_report(const std::string& dir) {
    return json::parse(slurp(std::filesystem::path(dir) / "report.json"));
}

} // namespace

TEST_CASE("bundled chart models load and validate") {
    for (const char* name : {"halfplane.json", "disk.json", "euclidean2.json", "euclidean3.json",
                             "sphere_r1.json", "sphere_r2.json", "mixed2x2.json", "torus.json"}) {
        ModelFile m = load_model(models_dir + "/" + name);
        REQUIRE(m.kind == ModelFile::Kind::Chart);
        CHECK(m.chart->dim() >= 2);
    }
    ModelFile hp = load_model(models_dir + "/halfplane.json");
    CHECK(hp.chart->variables() == std::vector<std::string>{"x", "y"});

    ModelFile torus = load_model(models_dir + "/torus.json");
    CHECK(torus.chart->has_periods());
}

TEST_CASE("bundled embedded and nbody models load") {
    ModelFile sphere = load_model(models_dir + "/sphere_embedded.json");
    REQUIRE(sphere.kind == ModelFile::Kind::Embedded);
    CHECK(sphere.embedded->ambient_dim() == 3);
    CHECK(sphere.embedded->n_constraints() == 1);
    CHECK(sphere.embedded->expected_dim() == 2);

    ModelFile nb = load_model(models_dir + "/twobody.json");
    REQUIRE(nb.kind == ModelFile::Kind::NBody);
    CHECK(nb.nbody->bodies.size() == 2);
}

TEST_CASE("schema violations carry JSON-pointer paths") {
    json bad = json::parse(
        R"({"kind":"chart","variables":["x","y"],"metric":[["1","x"],["0","1"]]})");
    try {
        parse_model(bad);
        FAIL("expected ModelError");
    } catch (const ModelError& e) {
        CHECK(std::string(e.what()).find("not symmetric") != std::string::npos);
        CHECK(e.where() == "/metric");
    }

    json unknown_kind = json::parse(R"({"kind":"mystery"})");
    CHECK_THROWS_AS(parse_model(unknown_kind), ModelError);

    json bad_expr = json::parse(
        R"({"kind":"chart","variables":["x","y"],"metric":[["1/q","0"],["0","1"]]})");
    try {
        parse_model(bad_expr);
        FAIL("expected ModelError");
    } catch (const ModelError& e) {
        CHECK(e.where() == "/metric/0/0");
        CHECK(std::string(e.what()).find("unknown variable") != std::string::npos);
    }

    json neg_period = json::parse(
        R"({"kind":"chart","variables":["x"],"metric":[["1"]],"periods":{"x":-1}})");
    CHECK_THROWS_AS(parse_model(neg_period), ModelError);

    json degenerate = json::parse(
        R"({"kind":"chart","variables":["x","y"],"metric":[["1","1"],["1","1"]]})");
    CHECK_THROWS_AS(parse_model(degenerate), ModelError);
}

TEST_CASE("hamiltonian block: potential and convention") {
    json j = json::parse(
        R"({"kind":"chart","variables":["x","y"],"metric":[["1","0"],["0","1"]],
            "hamiltonian":{"potential":"1/2*x^2","convention":"paper"}})");
    ModelFile m = parse_model(j);
    REQUIRE(m.potential.has_value());
    CHECK(m.convention == SignConvention::PaperLiteral);
    HamiltonianSystem sys = m.build_system();
    CHECK(sys.hamiltonian_derivative().is_zero());
}

TEST_CASE("cli: verify passes on bundled models and fails on broken ones") {
    CHECK(run_cli("verify " + models_dir + "/halfplane.json --out /tmp/gf_verify") == 0);
    CHECK(run_cli("verify " + models_dir + "/twobody.json --out /tmp/gf_verify_nb") == 0);

    std::filesystem::create_directories("/tmp/gf_bad");
    std::ofstream bad("/tmp/gf_bad/asym.json");
    bad << R"({"kind":"chart","variables":["x","y"],"metric":[["1","x"],["0","1"]]})";
    bad.close();
    CHECK(run_cli("verify /tmp/gf_bad/asym.json") == 2);
    CHECK(run_cli("verify /tmp/gf_bad/missing.json") == 2);
}

TEST_CASE("cli: curvature report") {
    REQUIRE(run_cli("curvature " + models_dir +
                    "/halfplane.json --points 20 --planes 2 --seed 3 --out /tmp/gf_curv") == 0);
    json rep = load_report("/tmp/gf_curv");
    CHECK(rep["min_k"].get<double>() == -1.0);
    CHECK(rep["max_k"].get<double>() == -1.0);
}

TEST_CASE("cli: certification exit codes") {
    CHECK(run_cli("approx " + models_dir +
                  "/halfplane.json --certify --margin 0.5 --points 20 --planes 2 --seed 1 "
                  "--out /tmp/gf_c1") == 0);
    CHECK(run_cli("approx " + models_dir +
                  "/sphere_r1.json --certify --margin 0.5 --points 10 --planes 2 --seed 1 "
                  "--out /tmp/gf_c2") == 4);
    CHECK(run_cli("approx " + models_dir +
                  "/euclidean2.json --certify --margin 0.1 --points 10 --planes 2 --seed 1 "
                  "--out /tmp/gf_c3") == 4);
}

TEST_CASE("cli: geodesic trajectory export") {
    REQUIRE(run_cli("geodesic " + models_dir +
                    "/halfplane.json --init 0,1,0,1 --t 1 --step 0.001 --out /tmp/gf_geo") == 0);
    std::string csv = slurp("/tmp/gf_geo/trajectory.csv");
    CHECK(csv.substr(0, csv.find('\n')) == "t,x,y,p_x,p_y,H,C");
    json rep = load_report("/tmp/gf_geo");
    CHECK(rep["reason"] == "horizon");
    CHECK(std::abs(rep["final_state"][1].get<double>() - 2.718281828) < 1e-4);
}

TEST_CASE("cli: dynamics report on the torus") {
    REQUIRE(run_cli("dynamics " + models_dir +
                    "/torus.json --recurrence --spectrum --seed 7 --out /tmp/gf_dyn") == 0);
    json rep = load_report("/tmp/gf_dyn");
    CHECK(rep["recurrence"]["fraction"].get<double>() == 1.0);
    CHECK(rep["verdict"]["kind"] == "non-arithmetic");
    CHECK(rep["spectrum"].size() >= 2);
}

TEST_CASE("cli: determinism of reports") {
    std::string args = "dynamics " + models_dir +
                       "/torus.json --recurrence --seed 11 --t 50 --out /tmp/gf_det";
    REQUIRE(run_cli(args + "1") == 0);
    REQUIRE(run_cli(args + "2") == 0);
    CHECK(slurp("/tmp/gf_det1/report.json") == slurp("/tmp/gf_det2/report.json"));

    std::string cargs = "approx " + models_dir +
                        "/halfplane.json --certify --margin 0.5 --points 15 --planes 2 --seed 5 "
                        "--out /tmp/gf_detc";
    REQUIRE(run_cli(cargs + "1") == 0);
    REQUIRE(run_cli(cargs + "2") == 0);
    CHECK(slurp("/tmp/gf_detc1/report.json") == slurp("/tmp/gf_detc2/report.json"));
}

TEST_CASE("cli: approx twist and fit round-trip their outputs") {
    REQUIRE(run_cli("approx --twist --f x --phi 1 --epsilon 0.5 --degree 8 --out /tmp/gf_tw") ==
            0);
    json rep = load_report("/tmp/gf_tw");
    CHECK(rep["twist"]["identity_residual"].get<double>() < 1e-12);
    CHECK(rep["twist"].contains("h_fit"));

    REQUIRE(run_cli("approx --fit --f \"1/(1+x^2)\" --degree 6 --out /tmp/gf_fit") == 0);
    json frep = load_report("/tmp/gf_fit");
    CHECK(frep["fit"]["c0_error"].get<double>() < 0.01);

    REQUIRE(run_cli("approx --embed --rho \"x1^2;0\" --out /tmp/gf_emb") == 0);
    json erep = load_report("/tmp/gf_emb");
    for (const auto& r : erep["embed"]["pullback_residuals"]) CHECK(r.get<std::string>() == "0");
}

TEST_CASE("cli: nbody run") {
    REQUIRE(run_cli("nbody " + models_dir +
                    "/twobody.json --t 5 --step 0.001 --out /tmp/gf_nb") == 0);
    json rep = load_report("/tmp/gf_nb");
    CHECK(rep["reason"] == "horizon");
    CHECK(rep["energy_drift"].get<double>() < 1e-8);
    CHECK(rep["cover_residual"].get<double>() < 1e-14);
    std::string csv = slurp("/tmp/gf_nb/trajectory.csv");
    CHECK(csv.rfind("t,q1_x,q1_y,q1_z,q2_x", 0) == 0);
}
