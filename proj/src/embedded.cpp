#include "geoflow/embedded.hpp"

#include "geoflow/errors.hpp"

namespace geoflow {

std::vector<std::string> default_ambient_names(std::size_t m) {
    std::vector<std::string> v;
    v.reserve(m);
    for (std::size_t i = 1; i <= m; ++i) v.push_back("x" + std::to_string(i));
    return v;
}

EmbeddedVariety::EmbeddedVariety(std::size_t ambient_dim, std::vector<Polynomial> constraints,
                                 std::optional<Eigen::MatrixXd> ambient_form)
    : m_(ambient_dim), constraints_(std::move(constraints)) {
    if (constraints_.empty()) throw GeometryError("embedded variety needs at least one constraint");
    if (constraints_.size() >= m_)
        throw GeometryError("more constraints than ambient dimension allows");
    vars_ = constraints_.front().variables();
    if (vars_.size() != m_)
        throw GeometryError("constraint variable count does not match ambient dimension");
    for (const auto& f : constraints_)
        if (f.variables() != vars_)
            throw GeometryError("all constraints must share the ambient variables");

    if (ambient_form) {
        form_ = *ambient_form;
        if (form_.rows() != static_cast<Eigen::Index>(m_) ||
            form_.cols() != static_cast<Eigen::Index>(m_))
            throw GeometryError("ambient form must be m x m");
        if (!form_.isApprox(form_.transpose(), 1e-14))
            throw GeometryError("ambient form must be symmetric");
    } else {
        form_ = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m_),
                                          static_cast<Eigen::Index>(m_));
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(form_);
    if (!lu.isInvertible()) throw GeometryError("ambient form is degenerate");
    form_inv_ = lu.inverse();

    for (const auto& f : constraints_) {
        fvals_.push_back(CompiledPoly::from(f));
        std::vector<CompiledPoly> grad;
        std::vector<Polynomial> dparts;
        for (std::size_t i = 0; i < m_; ++i) {
            Polynomial d = f.differentiate(i);
            grad.push_back(CompiledPoly::from(d));
            dparts.push_back(std::move(d));
        }
        grads_.push_back(std::move(grad));
        std::vector<CompiledPoly> hess(m_ * m_);
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t j = 0; j < m_; ++j)
                hess[i * m_ + j] = CompiledPoly::from(dparts[i].differentiate(j));
        hessians_.push_back(std::move(hess));
    }
}

Eigen::VectorXd EmbeddedVariety::constraint_values(const Eigen::VectorXd& x) const {
    Eigen::VectorXd f(static_cast<Eigen::Index>(fvals_.size()));
    for (std::size_t a = 0; a < fvals_.size(); ++a)
        f[static_cast<Eigen::Index>(a)] = fvals_[a].eval(x.data());
    return f;
}

Eigen::MatrixXd EmbeddedVariety::jacobian(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd j(static_cast<Eigen::Index>(constraints_.size()),
                      static_cast<Eigen::Index>(m_));
    for (std::size_t a = 0; a < grads_.size(); ++a)
        for (std::size_t i = 0; i < m_; ++i)
            j(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(i)) =
                grads_[a][i].eval(x.data());
    return j;
}

double EmbeddedVariety::hessian_quad(std::size_t a, const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& v) const {
    double s = 0;
    for (std::size_t i = 0; i < m_; ++i)
        for (std::size_t j = 0; j < m_; ++j)
            s += hessians_[a][i * m_ + j].eval(x.data()) * v[static_cast<Eigen::Index>(i)] *
                 v[static_cast<Eigen::Index>(j)];
    return s;
}

Eigen::MatrixXd EmbeddedVariety::tangent_projector(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd J = jacobian(x);
    Eigen::MatrixXd JGJ = J * form_inv_ * J.transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
    double smax = svd.singularValues()(0);
    double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (smax == 0 || smin / smax < 1e-10)
        throw GeometryError("rank-deficient constraint Jacobian (singular point)");
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m_),
                                                  static_cast<Eigen::Index>(m_));
    return I - form_inv_ * J.transpose() * JGJ.ldlt().solve(J);
}

double EmbeddedVariety::curvature(const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                                  const Eigen::VectorXd& w, double fd_step, double tol) const {
    if (constraint_values(x).lpNorm<Eigen::Infinity>() > tol)
        throw GeometryError("point does not satisfy the constraints");
    Eigen::MatrixXd J = jacobian(x);
    double vsc = 1.0 + v.norm() + w.norm();
    if ((J * v).lpNorm<Eigen::Infinity>() > tol * vsc ||
        (J * w).lpNorm<Eigen::Infinity>() > tol * vsc)
        throw GeometryError("non-tangent input vectors");

    Eigen::MatrixXd P = tangent_projector(x);
    auto dP = [&](const Eigen::VectorXd& dir) {
        Eigen::MatrixXd plus = tangent_projector(x + fd_step * dir);
        Eigen::MatrixXd minus = tangent_projector(x - fd_step * dir);
        return Eigen::MatrixXd(((plus - minus) / (2 * fd_step)));
    };
    Eigen::MatrixXd dPv = dP(v);
    Eigen::MatrixXd dPw = dP(w);
    Eigen::MatrixXd N = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m_),
                                                  static_cast<Eigen::Index>(m_)) -
                        P;
    // second fundamental form through the projector field
    Eigen::VectorXd II_vv = N * (dPv * v);
    Eigen::VectorXd II_ww = N * (dPw * w);
    Eigen::VectorXd II_vw = N * (dPv * w);

    auto inner = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        return a.dot(form_ * b);
    };
    double gram = inner(v, v) * inner(w, w) - inner(v, w) * inner(v, w);
    if (std::abs(gram) < 1e-14 * vsc * vsc)
        throw GeometryError("isotropic plane for the induced form");
    return (inner(II_vv, II_ww) - inner(II_vw, II_vw)) / gram;
}

Eigen::VectorXd EmbeddedVariety::project_point(Eigen::VectorXd x, double tol, int max_iter) const {
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd f = constraint_values(x);
        if (f.lpNorm<Eigen::Infinity>() <= tol) return x;
        Eigen::MatrixXd J = jacobian(x);
        Eigen::MatrixXd JGJ = J * form_inv_ * J.transpose();
        x -= form_inv_ * J.transpose() * JGJ.ldlt().solve(f);
    }
    if (constraint_values(x).lpNorm<Eigen::Infinity>() <= tol) return x;
    throw NumericError("constraint projection did not converge");
}

Eigen::VectorXd EmbeddedVariety::project_velocity(const Eigen::VectorXd& x,
                                                  Eigen::VectorXd v) const {
    Eigen::MatrixXd J = jacobian(x);
    Eigen::MatrixXd JGJ = J * form_inv_ * J.transpose();
    v -= form_inv_ * J.transpose() * JGJ.ldlt().solve(J * v);
    return v;
}

} // namespace geoflow
