#ifndef GEOFLOW_GEOMETRY_HPP
#define GEOFLOW_GEOMETRY_HPP

#include <optional>
#include <string>
#include <vector>

#include "geoflow/rational_function.hpp"

namespace geoflow {

using RfMatrix = std::vector<std::vector<RationalFunction>>;

RfMatrix rf_identity(const std::vector<std::string>& vars, std::size_t n);
RfMatrix rf_matrix_mul(const RfMatrix& a, const RfMatrix& b);
bool rf_matrix_equals(const RfMatrix& a, const RfMatrix& b);

/// Pseudo-Riemannian metric on a coordinate chart.
///
/// The guard polynomial D cuts out the regular locus: the chart (metric,
/// inverse, everything derived from them) is valid where D != 0. The stored
/// guard is the product of the user-supplied guard with the distinct
/// denominators of g, det(g) and g^{-1}, so every stored rational function
/// is regular on D != 0.
class ChartMetric {
public:
    ChartMetric(std::vector<std::string> vars, RfMatrix g,
                std::optional<Polynomial> user_guard = std::nullopt,
                std::vector<std::optional<BigRational>> periods = {});

    std::size_t dim() const { return vars_.size(); }
    const std::vector<std::string>& variables() const { return vars_; }
    const RfMatrix& metric() const { return g_; }
    const RationalFunction& metric(std::size_t i, std::size_t j) const { return g_[i][j]; }
    const RfMatrix& inverse() const { return inv_; }
    const RationalFunction& determinant() const { return det_; }
    const Polynomial& guard() const { return guard_; }
    const std::vector<std::optional<BigRational>>& periods() const { return periods_; }
    bool has_periods() const;

    bool point_in_chart(const std::vector<BigRational>& x) const;
    double guard_value(const std::vector<double>& x) const;

private:
    std::vector<std::string> vars_;
    RfMatrix g_;
    RfMatrix inv_;
    RationalFunction det_;
    Polynomial guard_;
    std::vector<std::optional<BigRational>> periods_;
};

/// Adjugate-over-determinant inverse; g * inverse_metric(g) = I under equals.
RfMatrix inverse_metric(const ChartMetric& m);

/// Christoffel symbols of the Levi-Civita connection, Koszul formula.
class ChristoffelField {
public:
    ChristoffelField(std::size_t n, std::vector<RationalFunction> gamma)
        : n_(n), gamma_(std::move(gamma)) {}
    std::size_t dim() const { return n_; }
    /// Gamma^k_{ij}
    const RationalFunction& at(std::size_t k, std::size_t i, std::size_t j) const {
        return gamma_[(k * n_ + i) * n_ + j];
    }
    RationalFunction& at(std::size_t k, std::size_t i, std::size_t j) {
        return gamma_[(k * n_ + i) * n_ + j];
    }

private:
    std::size_t n_;
    std::vector<RationalFunction> gamma_;
};

ChristoffelField christoffel(const ChartMetric& m);

/// Curvature tensor components R^l_{ijk} with the convention
///   R(e_i, e_j) e_k = R^l_{ijk} e_l,
///   R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_{[X,Y]} Z,
/// i.e. R^l_{ijk} = d_i G^l_{jk} - d_j G^l_{ik} + G^l_{im}G^m_{jk} - G^l_{jm}G^m_{ik}.
class CurvatureField {
public:
    CurvatureField(std::size_t n, std::vector<RationalFunction> r)
        : n_(n), r_(std::move(r)) {}
    std::size_t dim() const { return n_; }
    /// R^l_{ijk}
    const RationalFunction& at(std::size_t l, std::size_t i, std::size_t j, std::size_t k) const {
        return r_[((l * n_ + i) * n_ + j) * n_ + k];
    }

    /// Lowered tensor R_{ijkl} = g_{lm} R^m_{ijk}.
    RationalFunction lowered(const ChartMetric& m, std::size_t i, std::size_t j, std::size_t k,
                             std::size_t l) const;

private:
    std::size_t n_;
    std::vector<RationalFunction> r_;
};

CurvatureField curvature_tensor(const ChartMetric& m, const ChristoffelField& gamma);

/// Non-isotropic 2-plane at a rational chart point, given by a spanning pair.
struct TangentPlane {
    std::vector<BigRational> point;
    std::vector<BigRational> v;
    std::vector<BigRational> w;
};

/// Sectional curvature of the plane spanned by (v, w):
///   K = g(R(v,w)w, v) / (g(v,v) g(w,w) - g(v,w)^2),
/// sign calibrated so the round sphere is positive; for orthogonal pairs the
/// denominator reduces to g(v,v)g(w,w). Exact at rational data.
/// Throws GeometryError for isotropic planes or points outside the chart.
BigRational sectional_curvature(const ChartMetric& m, const CurvatureField& R,
                                const TangentPlane& plane);

/// Float-point evaluation of the same formula.
double sectional_curvature(const ChartMetric& m, const CurvatureField& R,
                           const std::vector<double>& point, const std::vector<double>& v,
                           const std::vector<double>& w);

struct IdentityReport {
    bool torsion_symmetric = false;
    bool metric_compatible = false;
    bool first_bianchi = false;
    bool all() const { return torsion_symmetric && metric_compatible && first_bianchi; }
};

/// Exact checks: (a) Gamma^k_{ij} = Gamma^k_{ji}; (b) d_k g_ij =
/// Gamma^l_{ki} g_lj + Gamma^l_{kj} g_il; (c) R^l_{ijk} + R^l_{jki} +
/// R^l_{kij} = 0. The second overload audits a caller-supplied connection.
IdentityReport verify_connection_identities(const ChartMetric& m);
IdentityReport verify_connection_identities(const ChartMetric& m, const ChristoffelField& gamma);

} // namespace geoflow

#endif
