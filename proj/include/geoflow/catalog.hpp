#ifndef GEOFLOW_CATALOG_HPP
#define GEOFLOW_CATALOG_HPP

#include "geoflow/embedded.hpp"
#include "geoflow/geometry.hpp"

namespace geoflow::catalog {

/// Flat metric on n coordinates q1..qn (x, y[, z] for n <= 3).
ChartMetric euclidean(std::size_t n);

/// Poincare half-plane: g = diag(1/y^2, 1/y^2) on y != 0. K = -1.
ChartMetric halfplane();

/// Poincare disk: g = 4/(1 - x^2 - y^2)^2 diag(1,1). K = -1.
ChartMetric poincare_disk();

/// Stereographic chart of the radius-r sphere:
/// g = 4 r^4 / (r^2 + u^2 + v^2)^2 diag(1,1). K = 1/r^2.
ChartMetric stereographic_sphere(const BigRational& r);

/// The 2x2 mixed metric [[1, x], [x, 1 + x^2]] (det = 1).
ChartMetric mixed2();

/// Unit-square flat torus: identity metric with periods (1, 1).
ChartMetric flat_torus();

/// Unit sphere x1^2 + x2^2 + x3^2 = 1 in Euclidean 3-space.
EmbeddedVariety unit_sphere();

/// Graph z = x*y as the constraint x3 - x1*x2 = 0 (K = -1 at the origin).
EmbeddedVariety saddle_graph();

/// Plane x3 = 0 in Euclidean 3-space (flat).
EmbeddedVariety flat_plane();

} // namespace geoflow::catalog

#endif
