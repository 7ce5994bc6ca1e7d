#include "geoflow/approx.hpp"

#include <cmath>
#include <memory>
#include <random>

namespace geoflow {

SampleGrid SampleGrid::uniform_1d(double lo, double hi, std::size_t count) {
    SampleGrid g;
    if (count < 2) throw Error("grid needs at least two points");
    for (std::size_t i = 0; i < count; ++i) {
        double t = static_cast<double>(i) / static_cast<double>(count - 1);
        g.points.push_back({lo + t * (hi - lo)});
    }
    return g;
}

SmoothFunction smooth_from_rational(const RationalFunction& f) {
    SmoothFunction s;
    s.dim = f.variables().size();
    s.exact_order = std::numeric_limits<int>::max();
    // first-order partials dominate the call profile; precompute them
    auto grads = std::make_shared<std::vector<RationalFunction>>();
    for (std::size_t i = 0; i < s.dim; ++i) grads->push_back(f.differentiate(i));
    s.eval = [f, grads](const std::vector<double>& x, const std::vector<unsigned>& alpha) {
        unsigned total = 0;
        std::size_t dir = 0;
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            total += alpha[i];
            if (alpha[i] > 0) dir = i;
        }
        if (total == 0) return f.evaluate_double(x);
        if (total == 1) return (*grads)[dir].evaluate_double(x);
        RationalFunction d = f;
        for (std::size_t i = 0; i < alpha.size(); ++i)
            for (unsigned k = 0; k < alpha[i]; ++k) d = d.differentiate(i);
        return d.evaluate_double(x);
    };
    return s;
}

SmoothFunction smooth_from_polynomial(const Polynomial& p) {
    return smooth_from_rational(RationalFunction(p));
}

namespace {

constexpr double kFdStep = 1e-5;

double eval_recursive(const SmoothFunction& f, const std::vector<double>& x,
                      std::vector<unsigned>& alpha, unsigned total, bool* used_fd) {
    if (static_cast<int>(total) <= f.exact_order) return f.eval(x, alpha);
    if (used_fd) *used_fd = true;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (alpha[i] == 0) continue;
        alpha[i] -= 1;
        std::vector<double> xp = x, xm = x;
        xp[i] += kFdStep;
        xm[i] -= kFdStep;
        double v = (eval_recursive(f, xp, alpha, total - 1, used_fd) -
                    eval_recursive(f, xm, alpha, total - 1, used_fd)) /
                   (2 * kFdStep);
        alpha[i] += 1;
        return v;
    }
    return f.eval(x, alpha); // |alpha| = 0
}

void for_each_multi_index(std::size_t dim, unsigned max_total,
                          const std::function<void(const std::vector<unsigned>&)>& fn) {
    std::vector<unsigned> alpha(dim, 0);
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t pos, unsigned left) {
        if (pos == dim) {
            fn(alpha);
            return;
        }
        for (unsigned e = 0; e <= left; ++e) {
            alpha[pos] = e;
            rec(pos + 1, left - e);
        }
        alpha[pos] = 0;
    };
    rec(0, max_total);
}

std::vector<double> gradient(const SmoothFunction& f, const std::vector<double>& x,
                             bool* used_fd = nullptr) {
    std::vector<double> g(f.dim);
    std::vector<unsigned> alpha(f.dim, 0);
    for (std::size_t i = 0; i < f.dim; ++i) {
        alpha[i] = 1;
        g[i] = eval_recursive(f, x, alpha, 1, used_fd);
        alpha[i] = 0;
    }
    return g;
}

} // namespace

double derivative_value(const SmoothFunction& f, const std::vector<double>& x,
                        const std::vector<unsigned>& alpha, bool* used_fd) {
    unsigned total = 0;
    for (unsigned a : alpha) total += a;
    std::vector<unsigned> mutable_alpha = alpha;
    return eval_recursive(f, x, mutable_alpha, total, used_fd);
}

SeminormResult ck_seminorm(const SmoothFunction& f, const SampleGrid& grid, int order) {
    if (grid.size() == 0) throw Error("empty sample grid");
    if (order < 0) throw Error("seminorm order must be non-negative");
    SeminormResult out;
    for (const auto& x : grid.points) {
        if (x.size() != f.dim) throw Error("grid/function dimension mismatch");
        for_each_multi_index(f.dim, static_cast<unsigned>(order),
                             [&](const std::vector<unsigned>& alpha) {
                                 double v = derivative_value(f, x, alpha, &out.used_fd_fallback);
                                 if (!std::isfinite(v))
                                     throw NumericError("evaluation failure at a grid point");
                                 out.value = std::max(out.value, std::abs(v));
                             });
    }
    return out;
}

namespace {

std::vector<Monomial> monomial_basis(std::size_t dim, unsigned degree) {
    std::vector<Monomial> basis;
    for_each_multi_index(dim, degree, [&](const std::vector<unsigned>& alpha) {
        basis.emplace_back(alpha.begin(), alpha.end());
    });
    std::sort(basis.begin(), basis.end(), GrlexLess{});
    return basis;
}

double monomial_value(const Monomial& m, const std::vector<double>& x) {
    double v = 1;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (unsigned k = 0; k < m[i]; ++k) v *= x[i];
    return v;
}

} // namespace

FitReport polynomial_fit(const SmoothFunction& f, const SampleGrid& grid, unsigned degree,
                         const std::vector<std::string>& var_names) {
    if (var_names.size() != f.dim || grid.dim() != f.dim)
        throw Error("fit dimension mismatch");
    std::vector<Monomial> basis = monomial_basis(f.dim, degree);
    const std::size_t n = grid.size(), b = basis.size();
    if (n < b) throw Error("underdetermined fit: grid smaller than the basis");

    Eigen::MatrixXd A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(b));
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        double sw = std::sqrt(grid.weight(i));
        for (std::size_t j = 0; j < b; ++j)
            A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                sw * monomial_value(basis[j], grid.points[i]);
        rhs[static_cast<Eigen::Index>(i)] = sw * f.value(grid.points[i]);
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    FitReport rep;
    double smax = svd.singularValues()(0);
    double smin = svd.singularValues()(svd.singularValues().size() - 1);
    rep.condition = smin > 0 ? smax / smin : std::numeric_limits<double>::infinity();
    Eigen::VectorXd coef;
    if (rep.condition > 1e12) {
        rep.ridge_applied = true;
        Eigen::MatrixXd normal = A.transpose() * A;
        normal.diagonal().array() += 1e-12;
        coef = normal.ldlt().solve(A.transpose() * rhs);
    } else {
        coef = svd.solve(rhs);
    }
    rep.l2_residual = (A * coef - rhs).norm();

    Polynomial p(var_names);
    for (std::size_t j = 0; j < b; ++j) {
        double c = coef[static_cast<Eigen::Index>(j)];
        if (c != 0) p.add_term(basis[j], BigRational::from_double(c));
    }
    rep.fit = p;

    SmoothFunction pf = smooth_from_polynomial(p);
    bool fd = false;
    for (const auto& x : grid.points) {
        rep.c0_error = std::max(rep.c0_error, std::abs(f.value(x) - pf.value(x)));
        if (f.exact_order >= 1 || true) {
            std::vector<double> gf = gradient(f, x, &fd);
            std::vector<double> gp = gradient(pf, x, &fd);
            for (std::size_t i = 0; i < f.dim; ++i)
                rep.c1_error = std::max(rep.c1_error, std::abs(gf[i] - gp[i]));
        }
    }
    return rep;
}

TwistPair nash_twist(const SmoothFunction& f, const SmoothFunction& phi, double epsilon) {
    if (!(epsilon > 0)) throw Error("nash twist requires epsilon > 0");
    if (f.dim != phi.dim) throw Error("twist factors must share a domain");
    TwistPair out;
    out.epsilon = epsilon;
    std::size_t dim = f.dim;

    auto component = [f, phi, epsilon, dim](bool is_h) {
        SmoothFunction s;
        s.dim = dim;
        s.exact_order = 1;
        s.eval = [f, phi, epsilon, is_h](const std::vector<double>& x,
                                         const std::vector<unsigned>& alpha) {
            unsigned total = 0;
            std::size_t dir = 0;
            for (std::size_t i = 0; i < alpha.size(); ++i) {
                total += alpha[i];
                if (alpha[i] > 0) dir = i;
            }
            std::vector<unsigned> zero(alpha.size(), 0);
            double fv = f.eval(x, zero);
            double pv = phi.eval(x, zero);
            double c = std::cos(fv / epsilon), s2 = std::sin(fv / epsilon);
            if (total == 0) return epsilon * pv * (is_h ? c : s2);
            // first derivative by the product/chain rule
            std::vector<unsigned> e(alpha.size(), 0);
            e[dir] = 1;
            double df = f.eval(x, e);
            double dphi = phi.eval(x, e);
            if (is_h) return epsilon * dphi * c - pv * s2 * df;
            return epsilon * dphi * s2 + pv * c * df;
        };
        return s;
    };
    out.h = component(true);
    out.k = component(false);
    return out;
}

double twist_identity_residual(const SmoothFunction& f, const SmoothFunction& phi,
                               const TwistPair& twist, const std::vector<double>& x) {
    std::vector<double> df = gradient(f, x);
    std::vector<double> dphi = gradient(phi, x);
    std::vector<double> dh = gradient(twist.h, x);
    std::vector<double> dk = gradient(twist.k, x);
    double pv = phi.value(x);
    double e2 = twist.epsilon * twist.epsilon;
    double worst = 0;
    for (std::size_t i = 0; i < f.dim; ++i)
        for (std::size_t j = 0; j < f.dim; ++j) {
            double lhs = dh[i] * dh[j] + dk[i] * dk[j];
            double rhs = pv * pv * df[i] * df[j] + e2 * dphi[i] * dphi[j];
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    return worst;
}

TwistPolyReport twist_polynomialize(const SmoothFunction& f, const SmoothFunction& phi,
                                    double epsilon, unsigned degree, const SampleGrid& grid,
                                    const std::vector<std::string>& var_names) {
    TwistPair twist = nash_twist(f, phi, epsilon);
    TwistPolyReport rep;
    rep.h_fit = polynomial_fit(twist.h, grid, degree, var_names);
    rep.k_fit = polynomial_fit(twist.k, grid, degree, var_names);
    SmoothFunction hd = smooth_from_polynomial(rep.h_fit.fit);
    SmoothFunction kd = smooth_from_polynomial(rep.k_fit.fit);

    double e2 = epsilon * epsilon;
    for (const auto& x : grid.points) {
        std::vector<double> df = gradient(f, x);
        std::vector<double> dphi = gradient(phi, x);
        std::vector<double> dh = gradient(hd, x);
        std::vector<double> dk = gradient(kd, x);
        double pv = phi.value(x);
        double delta2 = 0, target2 = 0;
        for (std::size_t i = 0; i < f.dim; ++i)
            for (std::size_t j = 0; j < f.dim; ++j) {
                double base = pv * pv * df[i] * df[j] - (dh[i] * dh[j] + dk[i] * dk[j]);
                double delta = base + e2 * dphi[i] * dphi[j];
                delta2 += delta * delta;
                target2 += base * base;
            }
        rep.delta_c0 = std::max(rep.delta_c0, std::sqrt(delta2));
        rep.target_c0 = std::max(rep.target_c0, std::sqrt(target2));
    }
    return rep;
}

namespace {

/// Lawson-Hanson active-set non-negative least squares.
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    Eigen::Index ncols = A.cols();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(ncols);
    std::vector<bool> passive(static_cast<std::size_t>(ncols), false);
    double tol = 1e-12 * A.cwiseAbs().maxCoeff() * b.cwiseAbs().maxCoeff() + 1e-300;

    for (int outer = 0; outer < 8 * ncols + 16; ++outer) {
        Eigen::VectorXd w = A.transpose() * (b - A * x);
        Eigen::Index best = -1;
        double wbest = tol;
        for (Eigen::Index j = 0; j < ncols; ++j)
            if (!passive[static_cast<std::size_t>(j)] && w[j] > wbest) {
                wbest = w[j];
                best = j;
            }
        if (best < 0) break;
        passive[static_cast<std::size_t>(best)] = true;

        for (int inner = 0; inner < 4 * ncols + 8; ++inner) {
            std::vector<Eigen::Index> idx;
            for (Eigen::Index j = 0; j < ncols; ++j)
                if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
            Eigen::MatrixXd Ap(A.rows(), static_cast<Eigen::Index>(idx.size()));
            for (std::size_t j = 0; j < idx.size(); ++j)
                Ap.col(static_cast<Eigen::Index>(j)) = A.col(idx[j]);
            Eigen::VectorXd s =
                Ap.colPivHouseholderQr().solve(b); // least squares on the passive set
            bool all_positive = true;
            for (Eigen::Index j = 0; j < s.size(); ++j) all_positive &= s[j] > 0;
            if (all_positive) {
                x.setZero();
                for (std::size_t j = 0; j < idx.size(); ++j)
                    x[idx[j]] = s[static_cast<Eigen::Index>(j)];
                break;
            }
            double alpha = 1.0;
            for (std::size_t j = 0; j < idx.size(); ++j) {
                double sj = s[static_cast<Eigen::Index>(j)], xj = x[idx[j]];
                if (sj <= 0 && xj - sj > 0) alpha = std::min(alpha, xj / (xj - sj));
            }
            for (std::size_t j = 0; j < idx.size(); ++j) {
                double sj = s[static_cast<Eigen::Index>(j)];
                x[idx[j]] += alpha * (sj - x[idx[j]]);
                if (x[idx[j]] <= tol) {
                    x[idx[j]] = 0;
                    passive[static_cast<std::size_t>(idx[j])] = false;
                }
            }
        }
    }
    return x;
}

} // namespace

SosResult sos_decompose(const FormSample& target, const std::vector<SmoothFunction>& dictionary,
                        const SampleGrid& grid) {
    if (target.values.size() != grid.size())
        throw Error("form sample and grid sizes differ");
    if (dictionary.empty()) throw Error("empty dictionary");
    std::size_t n = grid.dim();
    std::size_t nd = dictionary.size();

    SosResult out;
    out.phis.resize(grid.size());
    out.residuals.resize(grid.size());
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const auto& x = grid.points[p];
        const Eigen::MatrixXd& tgt = target.values[p];
        if (tgt.rows() != static_cast<Eigen::Index>(n) ||
            !tgt.isApprox(tgt.transpose(), 1e-12))
            throw Error("form sample must be symmetric n x n at every point");

        Eigen::MatrixXd diffs(static_cast<Eigen::Index>(nd), static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < nd; ++i) {
            std::vector<double> g = gradient(dictionary[i], x);
            for (std::size_t j = 0; j < n; ++j)
                diffs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g[j];
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(diffs);
        if (svd.rank() < static_cast<Eigen::Index>(n)) {
            Eigen::JacobiSVD<Eigen::MatrixXd> chk(diffs);
            chk.setThreshold(1e-10);
            if (chk.rank() < static_cast<Eigen::Index>(n))
                throw GeometryError("dictionary differentials do not span the cotangent fiber");
        }

        // vectorize the symmetric matrices; Frobenius norm is preserved
        Eigen::MatrixXd A(static_cast<Eigen::Index>(n * n), static_cast<Eigen::Index>(nd));
        Eigen::VectorXd bvec(static_cast<Eigen::Index>(n * n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                bvec[static_cast<Eigen::Index>(i * n + j)] =
                    tgt(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                for (std::size_t k = 0; k < nd; ++k)
                    A(static_cast<Eigen::Index>(i * n + j), static_cast<Eigen::Index>(k)) =
                        diffs(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) *
                        diffs(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
            }
        Eigen::VectorXd c = nnls(A, bvec);
        out.phis[p].resize(nd);
        for (std::size_t k = 0; k < nd; ++k)
            out.phis[p][k] = std::sqrt(std::max(0.0, c[static_cast<Eigen::Index>(k)]));
        out.residuals[p] = (A * c - bvec).norm();
        out.max_residual = std::max(out.max_residual, out.residuals[p]);
    }
    return out;
}

EmbeddedVariety homothety(const EmbeddedVariety& v, const BigRational& s) {
    if (s.sign() == 0) throw Error("homothety scale must be nonzero");
    const auto& vars = v.variables();
    BigRational inv = s.reciprocal();
    std::vector<RationalFunction> images;
    for (const auto& name : vars)
        images.push_back(RationalFunction::variable(vars, name).scaled(inv));
    std::vector<Polynomial> scaled;
    for (const auto& f : v.constraints()) {
        RationalFunction g = RationalFunction(f).substitute(images);
        // clear the constant denominator introduced by the substitution
        scaled.push_back(g.num().scaled(g.den().constant_value().reciprocal()));
    }
    return EmbeddedVariety(v.ambient_dim(), std::move(scaled), v.ambient_form());
}

double min_eigenvalue(const FormSample& sample) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& m : sample.values) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
        worst = std::min(worst, es.eigenvalues().minCoeff());
    }
    return worst;
}

GraphEmbeddingResult graph_embedding(const EmbeddedVariety& base,
                                     const std::vector<Polynomial>& rho) {
    std::size_t m = base.ambient_dim();
    std::size_t L2 = rho.size(); // 2L components (h_i, k_i interleaved); L2 = 0 allowed
    for (const auto& r : rho)
        if (r.variables() != base.variables())
            throw Error("graph components must use the base ambient variables");

    std::vector<std::string> vars = base.variables();
    for (std::size_t j = 1; j <= L2; ++j) vars.push_back("y" + std::to_string(j));

    std::vector<Polynomial> constraints;
    for (const auto& f : base.constraints()) constraints.push_back(f.with_variables(vars));
    std::vector<Polynomial> lifted;
    for (std::size_t j = 0; j < L2; ++j) {
        Polynomial lift = rho[j].with_variables(vars);
        lifted.push_back(lift);
        Polynomial graph_eq =
            Polynomial::variable(vars, vars[m + j]) - lift;
        constraints.push_back(std::move(graph_eq));
    }

    // extended ambient form: base form on x, identity on the graph fibers
    Eigen::MatrixXd ext = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m + L2),
                                                    static_cast<Eigen::Index>(m + L2));
    ext.topLeftCorner(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)) =
        base.ambient_form();
    return GraphEmbeddingResult{EmbeddedVariety(m + L2, std::move(constraints), ext),
                                std::move(lifted)};
}

BigRational graph_pullback_residual(const EmbeddedVariety& base,
                                    const std::vector<Polynomial>& rho,
                                    const std::vector<BigRational>& x,
                                    const std::vector<BigRational>& u,
                                    const std::vector<BigRational>& v) {
    std::size_t m = base.ambient_dim();
    if (x.size() != m || u.size() != m || v.size() != m)
        throw Error("point/vector size must match the base ambient dimension");

    GraphEmbeddingResult emb = graph_embedding(base, rho);
    const EmbeddedVariety& y = emb.variety;
    std::size_t mext = y.ambient_dim();

    // exact base-side checks
    for (const auto& f : base.constraints()) {
        if (!f.evaluate(x).is_zero())
            throw GeometryError("sample point does not lie on the base variety");
        std::vector<BigRational> grad(m);
        BigRational du(0), dv(0);
        for (std::size_t i = 0; i < m; ++i) {
            grad[i] = f.differentiate(i).evaluate(x);
            du += grad[i] * u[i];
            dv += grad[i] * v[i];
        }
        if (!du.is_zero() || !dv.is_zero())
            throw GeometryError("sample vectors are not tangent to the base variety");
    }

    // lifted point X = (x, rho(x)) and tangents U = (u, d rho . u)
    std::vector<BigRational> bigx = x, bigu = u, bigv = v;
    for (const auto& r : rho) {
        bigx.push_back(r.evaluate(x));
        BigRational du(0), dv(0);
        for (std::size_t i = 0; i < m; ++i) {
            BigRational gi = r.differentiate(i).evaluate(x);
            du += gi * u[i];
            dv += gi * v[i];
        }
        bigu.push_back(du);
        bigv.push_back(dv);
    }

    // the lifted data must satisfy Y's own constraint polynomials exactly
    for (const auto& f : y.constraints()) {
        if (!f.evaluate(bigx).is_zero())
            throw GeometryError("lifted point does not satisfy the graph constraints");
        BigRational du(0), dv(0);
        for (std::size_t i = 0; i < mext; ++i) {
            BigRational gi = f.differentiate(i).evaluate(bigx);
            du += gi * bigu[i];
            dv += gi * bigv[i];
        }
        if (!du.is_zero() || !dv.is_zero())
            throw GeometryError("lifted vectors are not tangent to the graph variety");
    }

    // Y-induced pairing through the extended ambient form (dyadic-exact)
    auto exact_form = [](const Eigen::MatrixXd& g, std::size_t i, std::size_t j) {
        return BigRational::from_double(
            g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    };
    BigRational lhs(0);
    for (std::size_t i = 0; i < mext; ++i)
        for (std::size_t j = 0; j < mext; ++j)
            lhs += exact_form(y.ambient_form(), i, j) * bigu[i] * bigv[j];

    // base pairing plus the chain-rule addend sum_j (d rho_j u)(d rho_j v)
    BigRational rhs(0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            rhs += exact_form(base.ambient_form(), i, j) * u[i] * v[j];
    for (std::size_t j = 0; j < rho.size(); ++j) rhs += bigu[m + j] * bigv[m + j];
    return lhs - rhs;
}

namespace {

BigRational random_rational(std::mt19937_64& rng, double halfwidth) {
    std::uniform_int_distribution<long> den(1, 32);
    long d = den(rng);
    long span = std::max<long>(1, static_cast<long>(halfwidth * static_cast<double>(d)));
    std::uniform_int_distribution<long> num(-span, span);
    return BigRational(num(rng), d);
}

} // namespace

CurvatureCertificate certify_negative_curvature(const ChartMetric& m, int npoints, int nplanes,
                                                double margin, unsigned rng_seed,
                                                double box_halfwidth) {
    if (!(margin >= 0)) throw Error("margin must be non-negative");
    ChristoffelField gamma = christoffel(m);
    CurvatureField R = curvature_tensor(m, gamma);
    std::mt19937_64 rng(rng_seed);
    std::uniform_int_distribution<long> comp(-4, 4);

    CurvatureCertificate cert;
    cert.margin = margin;
    std::size_t n = m.dim();
    int points_done = 0;
    int attempts = 0;
    while (points_done < npoints && attempts < npoints * 200) {
        ++attempts;
        std::vector<BigRational> x;
        for (std::size_t i = 0; i < n; ++i) x.push_back(random_rational(rng, box_halfwidth));
        if (!m.point_in_chart(x)) continue;
        ++points_done;
        for (int pl = 0; pl < nplanes; ++pl) {
            TangentPlane plane;
            plane.point = x;
            for (std::size_t i = 0; i < n; ++i) plane.v.emplace_back(comp(rng));
            for (std::size_t i = 0; i < n; ++i) plane.w.emplace_back(comp(rng));
            try {
                BigRational k = sectional_curvature(m, R, plane);
                double kd = k.to_double();
                cert.min_k = std::min(cert.min_k, kd);
                cert.max_k = std::max(cert.max_k, kd);
                ++cert.samples;
            } catch (const GeometryError&) {
                ++cert.skipped_isotropic;
            }
        }
    }
    if (points_done < npoints)
        throw GeometryError("could not sample enough points inside the chart guard");
    cert.certified = cert.samples > 0 && cert.max_k <= -margin && margin > 0;
    return cert;
}

CurvatureCertificate certify_negative_curvature(const EmbeddedVariety& v, int npoints,
                                                int nplanes, double margin, unsigned rng_seed,
                                                double box_halfwidth) {
    if (!(margin >= 0)) throw Error("margin must be non-negative");
    std::mt19937_64 rng(rng_seed);
    std::uniform_real_distribution<double> coord(-box_halfwidth, box_halfwidth);
    std::normal_distribution<double> gauss(0.0, 1.0);

    CurvatureCertificate cert;
    cert.margin = margin;
    std::size_t m = v.ambient_dim();
    int points_done = 0;
    int attempts = 0;
    while (points_done < npoints && attempts < npoints * 200) {
        ++attempts;
        Eigen::VectorXd x0(static_cast<Eigen::Index>(m));
        for (std::size_t i = 0; i < m; ++i) x0[static_cast<Eigen::Index>(i)] = coord(rng);
        Eigen::VectorXd x;
        try {
            x = v.project_point(x0, 1e-12, 50);
            v.tangent_projector(x); // regularity check
        } catch (const Error&) {
            continue;
        }
        ++points_done;
        for (int pl = 0; pl < nplanes; ++pl) {
            Eigen::VectorXd a(static_cast<Eigen::Index>(m)), b(static_cast<Eigen::Index>(m));
            for (std::size_t i = 0; i < m; ++i) {
                a[static_cast<Eigen::Index>(i)] = gauss(rng);
                b[static_cast<Eigen::Index>(i)] = gauss(rng);
            }
            try {
                double k = v.curvature(x, v.project_velocity(x, a), v.project_velocity(x, b));
                cert.min_k = std::min(cert.min_k, k);
                cert.max_k = std::max(cert.max_k, k);
                ++cert.samples;
            } catch (const GeometryError&) {
                ++cert.skipped_isotropic;
            }
        }
    }
    if (points_done < npoints)
        throw GeometryError("could not sample enough points on the variety");
    cert.certified = cert.samples > 0 && cert.max_k <= -margin && margin > 0;
    return cert;
}

} // namespace geoflow
