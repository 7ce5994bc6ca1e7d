#ifndef GEOFLOW_APPROX_HPP
#define GEOFLOW_APPROX_HPP

#include <Eigen/Dense>

#include <functional>
#include <limits>

#include "geoflow/embedded.hpp"
#include "geoflow/geometry.hpp"

namespace geoflow {

/// Finite stand-in for a compact domain: sample points with optional
/// quadrature weights (uniform by default).
struct SampleGrid {
    std::vector<std::vector<double>> points;
    std::vector<double> weights; // empty = uniform

    std::size_t size() const { return points.size(); }
    std::size_t dim() const { return points.empty() ? 0 : points.front().size(); }
    double weight(std::size_t i) const { return weights.empty() ? 1.0 : weights[i]; }

    static SampleGrid uniform_1d(double lo, double hi, std::size_t count);
};

/// Evaluator contract: value and partial derivatives up to exact_order in
/// closed form; orders beyond that fall back to central finite differences
/// with step 1e-5 (callers are told through the flag on results).
struct SmoothFunction {
    std::size_t dim = 0;
    int exact_order = 0;
    std::function<double(const std::vector<double>&, const std::vector<unsigned>&)> eval;

    double value(const std::vector<double>& x) const {
        return eval(x, std::vector<unsigned>(dim, 0));
    }
};

SmoothFunction smooth_from_rational(const RationalFunction& f);
SmoothFunction smooth_from_polynomial(const Polynomial& p);

/// d^alpha f, exact when |alpha| <= exact_order, finite differences beyond
/// (sets *used_fd when the fallback fires).
double derivative_value(const SmoothFunction& f, const std::vector<double>& x,
                        const std::vector<unsigned>& alpha, bool* used_fd = nullptr);

struct SeminormResult {
    double value = 0;
    bool used_fd_fallback = false;
};

/// max over grid points and multi-indices |alpha| <= order of |d^alpha f|.
SeminormResult ck_seminorm(const SmoothFunction& f, const SampleGrid& grid, int order);

struct FitReport {
    Polynomial fit;
    double l2_residual = 0; // weighted
    double c0_error = 0;    // sampled sup |f - P|
    double c1_error = 0;    // sampled sup of gradient error components
    bool ridge_applied = false;
    double condition = 0;
};

/// Weighted least squares in the monomial basis of total degree <= degree.
/// Regularized by a 1e-12 ridge when the design condition exceeds 1e12
/// (flagged). Throws Error when the grid underdetermines the basis.
FitReport polynomial_fit(const SmoothFunction& f, const SampleGrid& grid, unsigned degree,
                         const std::vector<std::string>& var_names);

struct TwistPair {
    SmoothFunction h, k;
    double epsilon = 0;
};

/// h = eps phi cos(f/eps), k = eps phi sin(f/eps); first derivatives in
/// closed form. Pointwise, (dh)^2 + (dk)^2 = phi^2 (df)^2 + eps^2 (dphi)^2.
TwistPair nash_twist(const SmoothFunction& f, const SmoothFunction& phi, double epsilon);

/// Frobenius norm of the twist identity residual matrix at x.
double twist_identity_residual(const SmoothFunction& f, const SmoothFunction& phi,
                               const TwistPair& twist, const std::vector<double>& x);

struct TwistPolyReport {
    FitReport h_fit, k_fit;
    /// sup_x || phi^2 df df' - (dh_d dh_d' + dk_d dk_d') + eps^2 dphi dphi' ||_F
    double delta_c0 = 0;
    /// sup_x || phi^2 df df' - (dh_d dh_d' + dk_d dk_d') ||_F  (tends to
    /// || eps^2 (dphi)^2 || as the degree grows)
    double target_c0 = 0;
};

TwistPolyReport twist_polynomialize(const SmoothFunction& f, const SmoothFunction& phi,
                                    double epsilon, unsigned degree, const SampleGrid& grid,
                                    const std::vector<std::string>& var_names);

/// Sampled section of S^2 T*M: one symmetric matrix per grid point.
struct FormSample {
    std::vector<Eigen::MatrixXd> values;
};

struct SosResult {
    std::vector<std::vector<double>> phis; // [point][dictionary] = sqrt(c_i)
    std::vector<double> residuals;         // pointwise Frobenius
    double max_residual = 0;
};

/// Pointwise non-negative least squares of the target against the rank-1
/// forms dpsi_i (x) dpsi_i. Requires the dictionary differentials to span
/// the cotangent fiber at every grid point. A target outside the cone is
/// reported through the residual, not an exception.
SosResult sos_decompose(const FormSample& target, const std::vector<SmoothFunction>& dictionary,
                        const SampleGrid& grid);

/// Homothety x -> s x of an embedded variety (constraints become
/// F(x / s) = 0, exact rational coefficients). The induced first
/// fundamental form of the image scales by s^2, which is how the
/// embedding pipeline makes the base form small before decomposing the
/// difference; choosing s is the caller's job.
EmbeddedVariety homothety(const EmbeddedVariety& v, const BigRational& s);

/// Smallest eigenvalue over a sampled form field. Positive means the
/// decomposition target lies inside the cone where a sum-of-squares
/// decomposition can succeed; use it to diagnose the homothety scale.
double min_eigenvalue(const FormSample& sample);

struct GraphEmbeddingResult {
    EmbeddedVariety variety;        // base constraints + y_j - rho_j(x) in m + 2L vars
    std::vector<Polynomial> lifted_rho;
};

/// Y = graph(rho) with rho = (h_1, k_1, ..., h_L, k_L) polynomial in the
/// base ambient coordinates.
GraphEmbeddingResult graph_embedding(const EmbeddedVariety& base,
                                     const std::vector<Polynomial>& rho);

/// Exact pullback identity at a rational base point x with base-tangent
/// vectors u, v: the Y-induced pairing of the lifted tangents minus
/// (base pairing + sum_j (grad rho_j . u)(grad rho_j . v)). Zero by the
/// chain rule; also verifies exactly that the lifted vectors are tangent
/// to Y. Rational arithmetic throughout.
BigRational graph_pullback_residual(const EmbeddedVariety& base,
                                    const std::vector<Polynomial>& rho,
                                    const std::vector<BigRational>& x,
                                    const std::vector<BigRational>& u,
                                    const std::vector<BigRational>& v);

struct CurvatureCertificate {
    double min_k = std::numeric_limits<double>::infinity();
    double max_k = -std::numeric_limits<double>::infinity();
    double margin = 0;
    bool certified = false; // max_k <= -margin over the samples
    std::size_t samples = 0;
    std::size_t skipped_isotropic = 0;
};

/// Sampled certificate (explicitly not a proof over the variety): K over
/// random rational points and planes; certified iff max K <= -margin < 0.
CurvatureCertificate certify_negative_curvature(const ChartMetric& m, int npoints, int nplanes,
                                                double margin, unsigned rng_seed,
                                                double box_halfwidth = 1.0);

/// Embedded version: ambient box samples projected onto the variety,
/// tangent planes from projected random vectors.
CurvatureCertificate certify_negative_curvature(const EmbeddedVariety& v, int npoints,
                                                int nplanes, double margin, unsigned rng_seed,
                                                double box_halfwidth = 2.0);

} // namespace geoflow

#endif
