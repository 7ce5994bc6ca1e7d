#ifndef GEOFLOW_EMBEDDED_HPP
#define GEOFLOW_EMBEDDED_HPP

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "geoflow/numeric_eval.hpp"
#include "geoflow/polynomial.hpp"

namespace geoflow {

/// Algebraic variety cut out of affine m-space by polynomial constraints,
/// carrying the metric induced by a constant symmetric ambient form
/// (identity = Euclidean, the default).
///
/// All geometry here is numeric: tangent projectors from the exact
/// constraint Jacobian, curvature by central finite differences of the
/// projector (Gauss equation through the second fundamental form).
class EmbeddedVariety {
public:
    EmbeddedVariety(std::size_t ambient_dim, std::vector<Polynomial> constraints,
                    std::optional<Eigen::MatrixXd> ambient_form = std::nullopt);

    std::size_t ambient_dim() const { return m_; }
    std::size_t n_constraints() const { return constraints_.size(); }
    std::size_t expected_dim() const { return m_ - constraints_.size(); }
    const std::vector<Polynomial>& constraints() const { return constraints_; }
    const std::vector<std::string>& variables() const { return vars_; }
    const Eigen::MatrixXd& ambient_form() const { return form_; }

    Eigen::VectorXd constraint_values(const Eigen::VectorXd& x) const;
    /// c x m Jacobian dF(x), from exact symbolic gradients.
    Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;
    /// v^T Hess F_a(x) v, exact symbolic Hessians evaluated at x.
    double hessian_quad(std::size_t a, const Eigen::VectorXd& x, const Eigen::VectorXd& v) const;

    /// Form-orthogonal projector onto ker dF(x). Throws GeometryError on a
    /// rank-deficient Jacobian (singular point).
    Eigen::MatrixXd tangent_projector(const Eigen::VectorXd& x) const;

    /// Sectional curvature of span(v, w) at x via the Gauss equation:
    /// II(v,w) = normal part of the directional derivative of the tangent
    /// projector applied to w; finite differences with the given step.
    /// Requires |F(x)| and |dF(x) v| small; throws GeometryError otherwise.
    double curvature(const Eigen::VectorXd& x, const Eigen::VectorXd& v, const Eigen::VectorXd& w,
                     double fd_step = 1e-5, double tol = 1e-6) const;

    /// Newton projection onto {F = 0}; returns the projected point.
    Eigen::VectorXd project_point(Eigen::VectorXd x, double tol = 1e-12, int max_iter = 50) const;
    /// Form-orthogonal projection of v onto ker dF(x).
    Eigen::VectorXd project_velocity(const Eigen::VectorXd& x, Eigen::VectorXd v) const;

private:
    std::size_t m_;
    std::vector<std::string> vars_;
    std::vector<Polynomial> constraints_;
    Eigen::MatrixXd form_;     // ambient symmetric form G
    Eigen::MatrixXd form_inv_; // G^{-1}
    std::vector<CompiledPoly> fvals_;
    std::vector<std::vector<CompiledPoly>> grads_;    // [a][i] = d F_a / d x_i
    std::vector<std::vector<CompiledPoly>> hessians_; // [a][i*m+j]
};

/// Ambient coordinate names x1..xm used when none are supplied.
std::vector<std::string> default_ambient_names(std::size_t m);

} // namespace geoflow

#endif
