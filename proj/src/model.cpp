#include "geoflow/model.hpp"

#include <fstream>

#include "geoflow/expression.hpp"

namespace geoflow {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what, const std::string& where) {
    throw ModelError(what, where);
}

const json& need(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) fail(std::string("missing field '") + key + "'", where);
    return j.at(key);
}

std::string need_string(const json& j, const char* key, const std::string& where) {
    const json& v = need(j, key, where);
    if (!v.is_string()) fail(std::string("field '") + key + "' must be a string", where);
    return v.get<std::string>();
}

BigRational parse_rational_field(const json& v, const std::string& where) {
    if (v.is_number_integer()) return BigRational(v.get<long>());
    if (v.is_string()) {
        try {
            return BigRational::from_string(v.get<std::string>());
        } catch (const Error& e) {
            fail(e.what(), where);
        }
    }
    fail("rational values must be integers or strings like \"3/4\" or \"0.25\"", where);
}

RationalFunction parse_expr_field(const std::string& text,
                                  const std::vector<std::string>& vars,
                                  const std::string& where) {
    try {
        return parse_rational_function(text, vars);
    } catch (const Error& e) {
        fail(std::string("bad expression: ") + e.what(), where);
    }
}

ChartMetric parse_chart(const json& j) {
    const json& jvars = need(j, "variables", "/variables");
    if (!jvars.is_array() || jvars.empty()) fail("variables must be a non-empty array", "/variables");
    std::vector<std::string> vars;
    for (const auto& v : jvars) {
        if (!v.is_string()) fail("variable names must be strings", "/variables");
        vars.push_back(v.get<std::string>());
    }
    std::size_t n = vars.size();

    const json& jm = need(j, "metric", "/metric");
    if (!jm.is_array() || jm.size() != n) fail("metric must be an n x n array", "/metric");
    RfMatrix g(n, std::vector<RationalFunction>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const json& row = jm.at(i);
        std::string rowpath = "/metric/" + std::to_string(i);
        if (!row.is_array() || row.size() != n) fail("metric row has wrong length", rowpath);
        for (std::size_t k = 0; k < n; ++k) {
            const json& cell = row.at(k);
            std::string path = rowpath + "/" + std::to_string(k);
            if (!cell.is_string()) fail("metric entries must be expression strings", path);
            g[i][k] = parse_expr_field(cell.get<std::string>(), vars, path);
        }
    }

    std::optional<Polynomial> guard;
    if (j.contains("guard") && !j.at("guard").is_null()) {
        if (!j.at("guard").is_string()) fail("guard must be an expression string", "/guard");
        RationalFunction gf = parse_expr_field(j.at("guard").get<std::string>(), vars, "/guard");
        if (!gf.is_polynomial()) fail("guard must be a polynomial", "/guard");
        guard = gf.num();
    }

    std::vector<std::optional<BigRational>> periods(n, std::nullopt);
    if (j.contains("periods") && !j.at("periods").is_null()) {
        const json& jp = j.at("periods");
        if (!jp.is_object()) fail("periods must be an object {var: rational|null}", "/periods");
        for (auto it = jp.begin(); it != jp.end(); ++it) {
            auto pos = std::find(vars.begin(), vars.end(), it.key());
            if (pos == vars.end()) fail("period for unknown variable '" + it.key() + "'", "/periods");
            if (it.value().is_null()) continue;
            BigRational p = parse_rational_field(it.value(), "/periods/" + it.key());
            if (p.sign() <= 0) fail("periods must be positive", "/periods/" + it.key());
            periods[static_cast<std::size_t>(pos - vars.begin())] = p;
        }
    }

    try {
        return ChartMetric(vars, std::move(g), std::move(guard), std::move(periods));
    } catch (const GeometryError& e) {
        fail(e.what(), "/metric");
    }
}

EmbeddedVariety parse_embedded(const json& j) {
    const json& jdim = need(j, "ambient_dim", "/ambient_dim");
    if (!jdim.is_number_integer() || jdim.get<long>() < 1)
        fail("ambient_dim must be a positive integer", "/ambient_dim");
    std::size_t m = jdim.get<std::size_t>();

    std::vector<std::string> vars;
    if (j.contains("variables")) {
        for (const auto& v : j.at("variables")) vars.push_back(v.get<std::string>());
        if (vars.size() != m) fail("variables must list ambient_dim names", "/variables");
    } else {
        vars = default_ambient_names(m);
    }

    const json& jc = need(j, "constraints", "/constraints");
    if (!jc.is_array() || jc.empty()) fail("constraints must be a non-empty array", "/constraints");
    std::vector<Polynomial> constraints;
    for (std::size_t i = 0; i < jc.size(); ++i) {
        std::string path = "/constraints/" + std::to_string(i);
        if (!jc.at(i).is_string()) fail("constraints must be expression strings", path);
        RationalFunction f = parse_expr_field(jc.at(i).get<std::string>(), vars, path);
        if (!f.is_polynomial()) fail("constraints must be polynomials", path);
        constraints.push_back(f.num());
    }

    std::optional<Eigen::MatrixXd> form;
    if (j.contains("ambient_form") && !j.at("ambient_form").is_null()) {
        const json& jf = j.at("ambient_form");
        if (jf.is_string()) {
            if (jf.get<std::string>() != "euclidean")
                fail("ambient_form must be \"euclidean\" or a matrix", "/ambient_form");
        } else if (jf.is_array()) {
            Eigen::MatrixXd g(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
            if (jf.size() != m) fail("ambient_form must be m x m", "/ambient_form");
            for (std::size_t i = 0; i < m; ++i) {
                if (!jf.at(i).is_array() || jf.at(i).size() != m)
                    fail("ambient_form must be m x m", "/ambient_form");
                for (std::size_t k = 0; k < m; ++k)
                    g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                        jf.at(i).at(k).get<double>();
            }
            form = g;
        } else {
            fail("ambient_form must be \"euclidean\" or a matrix", "/ambient_form");
        }
    }
    try {
        return EmbeddedVariety(m, std::move(constraints), std::move(form));
    } catch (const GeometryError& e) {
        fail(e.what(), "/constraints");
    }
}

NBodyConfig parse_nbody(const json& j) {
    NBodyConfig cfg;
    const json& jb = need(j, "bodies", "/bodies");
    if (!jb.is_array() || jb.empty()) fail("bodies must be a non-empty array", "/bodies");
    for (std::size_t i = 0; i < jb.size(); ++i) {
        std::string path = "/bodies/" + std::to_string(i);
        const json& b = jb.at(i);
        Body body;
        body.mass = need(b, "mass", path).get<double>();
        const json& q = need(b, "q", path + "/q");
        const json& v = need(b, "v", path + "/v");
        if (!q.is_array() || q.size() != 3 || !v.is_array() || v.size() != 3)
            fail("q and v must be 3-vectors", path);
        for (int a = 0; a < 3; ++a) {
            body.position[a] = q.at(static_cast<std::size_t>(a)).get<double>();
            body.velocity[a] = v.at(static_cast<std::size_t>(a)).get<double>();
        }
        cfg.bodies.push_back(body);
    }
    if (j.contains("G")) cfg.gravity = j.at("G").get<double>();
    if (j.contains("mode")) {
        std::string mode = j.at("mode").get<std::string>();
        if (mode == "mass-weighted")
            cfg.mode = KineticMode::MassWeighted;
        else if (mode == "paper-literal")
            cfg.mode = KineticMode::PaperLiteral;
        else
            fail("mode must be \"mass-weighted\" or \"paper-literal\"", "/mode");
    }
    if (j.contains("delta_min")) cfg.delta_min = j.at("delta_min").get<double>();
    if (j.contains("signs") && !j.at("signs").is_null()) {
        const json& js = j.at("signs");
        if (js.is_string()) {
            if (js.get<std::string>() != "all-plus")
                fail("signs must be \"all-plus\" or an n x n matrix of +-1", "/signs");
        } else if (js.is_array()) {
            std::size_t n = cfg.bodies.size();
            cfg.signs.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
            if (js.size() != n) fail("signs must be n x n", "/signs");
            for (std::size_t i = 0; i < n; ++i) {
                if (!js.at(i).is_array() || js.at(i).size() != n)
                    fail("signs must be n x n", "/signs");
                for (std::size_t k = 0; k < n; ++k)
                    cfg.signs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                        js.at(i).at(k).get<int>();
            }
        } else {
            fail("signs must be \"all-plus\" or an n x n matrix of +-1", "/signs");
        }
    }
    return cfg;
}

} // namespace

ModelFile parse_model(const json& j) {
    if (!j.is_object()) fail("model must be a JSON object", "/");
    std::string kind = need_string(j, "kind", "/kind");
    ModelFile m;
    if (kind == "chart") {
        m.kind = ModelFile::Kind::Chart;
        m.chart = parse_chart(j);
    } else if (kind == "embedded") {
        m.kind = ModelFile::Kind::Embedded;
        m.embedded = parse_embedded(j);
    } else if (kind == "nbody") {
        m.kind = ModelFile::Kind::NBody;
        m.nbody = parse_nbody(j);
        try {
            NBodySystem check(*m.nbody);
        } catch (const Error& e) {
            fail(e.what(), "/bodies");
        }
    } else {
        fail("kind must be \"chart\", \"embedded\" or \"nbody\"", "/kind");
    }

    if (j.contains("hamiltonian") && !j.at("hamiltonian").is_null()) {
        if (m.kind != ModelFile::Kind::Chart)
            fail("hamiltonian block applies to chart models only", "/hamiltonian");
        const json& jh = j.at("hamiltonian");
        if (jh.contains("convention") && !jh.at("convention").is_null()) {
            std::string c = jh.at("convention").get<std::string>();
            if (c == "mechanics")
                m.convention = SignConvention::Mechanics;
            else if (c == "paper")
                m.convention = SignConvention::PaperLiteral;
            else
                fail("convention must be \"mechanics\" or \"paper\"", "/hamiltonian/convention");
        }
        if (jh.contains("potential") && !jh.at("potential").is_null()) {
            if (!jh.at("potential").is_string())
                fail("potential must be an expression string", "/hamiltonian/potential");
            m.potential = parse_expr_field(jh.at("potential").get<std::string>(),
                                           m.chart->variables(), "/hamiltonian/potential");
        }
    }
    return m;
}

ModelFile load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open model file '" + path + "'", "/");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ModelError(std::string("invalid JSON: ") + e.what(), "/");
    }
    return parse_model(j);
}

HamiltonianSystem ModelFile::build_system() const {
    if (kind != Kind::Chart || !chart)
        throw Error("only chart models build Hamiltonian systems directly");
    return geodesic_hamiltonian(*chart, potential, convention);
}

} // namespace geoflow
