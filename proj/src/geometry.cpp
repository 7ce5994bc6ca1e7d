#include "geoflow/geometry.hpp"

#include <algorithm>

namespace geoflow {

RfMatrix rf_identity(const std::vector<std::string>& vars, std::size_t n) {
    RfMatrix id(n, std::vector<RationalFunction>(n, RationalFunction::zero(vars)));
    for (std::size_t i = 0; i < n; ++i)
        id[i][i] = RationalFunction::constant(vars, BigRational(1));
    return id;
}

RfMatrix rf_matrix_mul(const RfMatrix& a, const RfMatrix& b) {
    std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    RfMatrix r(n, std::vector<RationalFunction>(m));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            RationalFunction acc = RationalFunction::zero(a[0][0].variables());
            for (std::size_t l = 0; l < k; ++l) acc += a[i][l] * b[l][j];
            r[i][j] = acc;
        }
    }
    return r;
}

bool rf_matrix_equals(const RfMatrix& a, const RfMatrix& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != b[i].size()) return false;
        for (std::size_t j = 0; j < a[i].size(); ++j)
            if (!a[i][j].equals(b[i][j])) return false;
    }
    return true;
}

namespace {

RationalFunction rf_det(const RfMatrix& a, const std::vector<std::string>& vars) {
    std::size_t n = a.size();
    if (n == 1) return a[0][0];
    RationalFunction acc = RationalFunction::zero(vars);
    for (std::size_t j = 0; j < n; ++j) {
        RfMatrix minor(n - 1, std::vector<RationalFunction>(n - 1));
        for (std::size_t r = 1; r < n; ++r) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (c == j) continue;
                minor[r - 1][cc++] = a[r][c];
            }
        }
        RationalFunction term = a[0][j] * rf_det(minor, vars);
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

RfMatrix rf_adjugate(const RfMatrix& a, const std::vector<std::string>& vars) {
    std::size_t n = a.size();
    RfMatrix adj(n, std::vector<RationalFunction>(n));
    if (n == 1) {
        adj[0][0] = RationalFunction::constant(vars, BigRational(1));
        return adj;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            RfMatrix minor(n - 1, std::vector<RationalFunction>(n - 1));
            std::size_t rr = 0;
            for (std::size_t r = 0; r < n; ++r) {
                if (r == i) continue;
                std::size_t cc = 0;
                for (std::size_t c = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor[rr][cc++] = a[r][c];
                }
                ++rr;
            }
            RationalFunction cof = rf_det(minor, vars);
            adj[j][i] = ((i + j) % 2 == 0) ? cof : -cof; // transpose of cofactors
        }
    }
    return adj;
}

} // namespace

ChartMetric::ChartMetric(std::vector<std::string> vars, RfMatrix g,
                         std::optional<Polynomial> user_guard,
                         std::vector<std::optional<BigRational>> periods)
    : vars_(std::move(vars)), g_(std::move(g)), periods_(std::move(periods)) {
    std::size_t n = vars_.size();
    if (n == 0) throw GeometryError("chart needs at least one coordinate");
    if (g_.size() != n) throw GeometryError("metric matrix size does not match chart dimension");
    for (std::size_t i = 0; i < n; ++i) {
        if (g_[i].size() != n)
            throw GeometryError("metric matrix is not square");
        for (std::size_t j = 0; j < n; ++j)
            if (g_[i][j].variables() != vars_)
                throw GeometryError("metric entries must use the chart variables");
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!g_[i][j].equals(g_[j][i]))
                throw GeometryError("metric not symmetric: g[" + std::to_string(i) + "][" +
                                    std::to_string(j) + "] != g[" + std::to_string(j) + "][" +
                                    std::to_string(i) + "]");
    if (!periods_.empty() && periods_.size() != n)
        throw GeometryError("periods list size does not match chart dimension");
    if (periods_.empty()) periods_.assign(n, std::nullopt);
    for (const auto& p : periods_)
        if (p && p->sign() <= 0) throw GeometryError("periods must be positive");

    det_ = rf_det(g_, vars_);
    if (det_.is_zero()) throw GeometryError("identically-degenerate metric (det g = 0)");
    RfMatrix adj = rf_adjugate(g_, vars_);
    inv_.assign(n, std::vector<RationalFunction>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv_[i][j] = adj[i][j] / det_;

    // assemble the guard from the user guard and all denominators seen;
    // divide out factors already present to keep the degree down
    std::vector<Polynomial> factors;
    auto push = [&](const Polynomial& cand) {
        Polynomial p = cand;
        bool progress = true;
        while (progress && !p.is_constant()) {
            progress = false;
            for (const auto& f : factors) {
                if (auto q = p.divided_exactly_by(f)) {
                    p = std::move(*q);
                    progress = true;
                }
            }
        }
        if (!p.is_constant()) factors.push_back(p);
    };
    if (user_guard) {
        if (user_guard->variables() != vars_)
            throw GeometryError("guard must use the chart variables");
        if (user_guard->is_zero()) throw GeometryError("guard polynomial is identically zero");
        push(*user_guard);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) push(g_[i][j].den());
    push(det_.den());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) push(inv_[i][j].den());

    guard_ = Polynomial::constant(vars_, BigRational(1));
    for (const auto& f : factors) guard_ = guard_ * f;
}

bool ChartMetric::has_periods() const {
    return std::any_of(periods_.begin(), periods_.end(),
                       [](const std::optional<BigRational>& p) { return p.has_value(); });
}

bool ChartMetric::point_in_chart(const std::vector<BigRational>& x) const {
    return !guard_.evaluate(x).is_zero();
}

double ChartMetric::guard_value(const std::vector<double>& x) const {
    return guard_.evaluate_double(x);
}

RfMatrix inverse_metric(const ChartMetric& m) { return m.inverse(); }

ChristoffelField christoffel(const ChartMetric& m) {
    std::size_t n = m.dim();
    const auto& vars = m.variables();
    const RfMatrix& g = m.metric();
    const RfMatrix& gi = m.inverse();

    // cache partial derivatives of the metric
    std::vector<RationalFunction> dg(n * n * n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                RationalFunction d = g[i][j].differentiate(k);
                dg[(k * n + i) * n + j] = d;
                dg[(k * n + j) * n + i] = d;
            }
    auto dg_at = [&](std::size_t k, std::size_t i, std::size_t j) -> const RationalFunction& {
        return dg[(k * n + i) * n + j];
    };

    std::vector<RationalFunction> gamma(n * n * n, RationalFunction::zero(vars));
    BigRational half(1, 2);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                RationalFunction acc = RationalFunction::zero(vars);
                for (std::size_t l = 0; l < n; ++l) {
                    RationalFunction koszul = dg_at(i, j, l) + dg_at(j, i, l) - dg_at(l, i, j);
                    acc += gi[k][l] * koszul;
                }
                acc = acc.scaled(half);
                gamma[(k * n + i) * n + j] = acc;
                gamma[(k * n + j) * n + i] = acc;
            }
        }
    }
    return ChristoffelField(n, std::move(gamma));
}

CurvatureField curvature_tensor(const ChartMetric& m, const ChristoffelField& gamma) {
    std::size_t n = m.dim();
    const auto& vars = m.variables();
    std::vector<RationalFunction> r(n * n * n * n, RationalFunction::zero(vars));
    for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue; // antisymmetric slot, stays zero
                for (std::size_t k = 0; k < n; ++k) {
                    RationalFunction acc =
                        gamma.at(l, j, k).differentiate(i) - gamma.at(l, i, k).differentiate(j);
                    for (std::size_t mm = 0; mm < n; ++mm)
                        acc += gamma.at(l, i, mm) * gamma.at(mm, j, k) -
                               gamma.at(l, j, mm) * gamma.at(mm, i, k);
                    r[((l * n + i) * n + j) * n + k] = acc;
                }
            }
        }
    }
    return CurvatureField(n, std::move(r));
}

RationalFunction CurvatureField::lowered(const ChartMetric& m, std::size_t i, std::size_t j,
                                         std::size_t k, std::size_t l) const {
    RationalFunction acc = RationalFunction::zero(m.variables());
    for (std::size_t mm = 0; mm < n_; ++mm) acc += m.metric(l, mm) * at(mm, i, j, k);
    return acc;
}

BigRational sectional_curvature(const ChartMetric& m, const CurvatureField& R,
                                const TangentPlane& plane) {
    std::size_t n = m.dim();
    if (plane.point.size() != n || plane.v.size() != n || plane.w.size() != n)
        throw GeometryError("plane data does not match chart dimension");
    if (!m.point_in_chart(plane.point))
        throw GeometryError("base point outside chart (guard vanishes)");

    std::vector<std::vector<BigRational>> g(n, std::vector<BigRational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g[i][j] = m.metric(i, j).evaluate_exact(plane.point);

    auto pair = [&](const std::vector<BigRational>& a, const std::vector<BigRational>& b) {
        BigRational s(0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) s += g[i][j] * a[i] * b[j];
        return s;
    };
    BigRational gvv = pair(plane.v, plane.v);
    BigRational gww = pair(plane.w, plane.w);
    BigRational gvw = pair(plane.v, plane.w);
    BigRational gram = gvv * gww - gvw * gvw;
    if (gram.is_zero()) throw GeometryError("isotropic plane (Gram determinant vanishes)");

    // g(R(v,w)w, v)
    BigRational num(0);
    for (std::size_t l = 0; l < n; ++l) {
        BigRational rv(0); // (R(v,w)w)^l
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    const RationalFunction& comp = R.at(l, i, j, k);
                    if (comp.is_zero()) continue;
                    rv += comp.evaluate_exact(plane.point) * plane.v[i] * plane.w[j] * plane.w[k];
                }
        for (std::size_t mm = 0; mm < n; ++mm) num += g[l][mm] * rv * plane.v[mm];
    }
    return num / gram;
}

double sectional_curvature(const ChartMetric& m, const CurvatureField& R,
                           const std::vector<double>& point, const std::vector<double>& v,
                           const std::vector<double>& w) {
    std::size_t n = m.dim();
    std::vector<std::vector<double>> g(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g[i][j] = m.metric(i, j).evaluate_double(point);
    auto pair = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) s += g[i][j] * a[i] * b[j];
        return s;
    };
    double gram = pair(v, v) * pair(w, w) - pair(v, w) * pair(v, w);
    if (gram == 0) throw GeometryError("isotropic plane (Gram determinant vanishes)");
    double num = 0;
    for (std::size_t l = 0; l < n; ++l) {
        double rv = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    const RationalFunction& comp = R.at(l, i, j, k);
                    if (comp.is_zero()) continue;
                    rv += comp.evaluate_double(point) * v[i] * w[j] * w[k];
                }
        for (std::size_t mm = 0; mm < n; ++mm) num += g[l][mm] * rv * v[mm];
    }
    return num / gram;
}

IdentityReport verify_connection_identities(const ChartMetric& m) {
    return verify_connection_identities(m, christoffel(m));
}

IdentityReport verify_connection_identities(const ChartMetric& m, const ChristoffelField& gamma) {
    std::size_t n = m.dim();
    IdentityReport rep;

    rep.torsion_symmetric = true;
    for (std::size_t k = 0; k < n && rep.torsion_symmetric; ++k)
        for (std::size_t i = 0; i < n && rep.torsion_symmetric; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (!gamma.at(k, i, j).equals(gamma.at(k, j, i))) {
                    rep.torsion_symmetric = false;
                    break;
                }

    rep.metric_compatible = true;
    for (std::size_t k = 0; k < n && rep.metric_compatible; ++k)
        for (std::size_t i = 0; i < n && rep.metric_compatible; ++i)
            for (std::size_t j = i; j < n; ++j) {
                RationalFunction lhs = m.metric(i, j).differentiate(k);
                RationalFunction rhs = RationalFunction::zero(m.variables());
                for (std::size_t l = 0; l < n; ++l)
                    rhs += gamma.at(l, k, i) * m.metric(l, j) + gamma.at(l, k, j) * m.metric(i, l);
                if (!lhs.equals(rhs)) {
                    rep.metric_compatible = false;
                    break;
                }
            }

    CurvatureField R = curvature_tensor(m, gamma);
    rep.first_bianchi = true;
    for (std::size_t l = 0; l < n && rep.first_bianchi; ++l)
        for (std::size_t i = 0; i < n && rep.first_bianchi; ++i)
            for (std::size_t j = 0; j < n && rep.first_bianchi; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    RationalFunction sum = R.at(l, i, j, k) + R.at(l, j, k, i) + R.at(l, k, i, j);
                    if (!sum.is_zero()) {
                        rep.first_bianchi = false;
                        break;
                    }
                }
    return rep;
}

} // namespace geoflow
