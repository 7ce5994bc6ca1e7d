#ifndef GEOFLOW_MODEL_HPP
#define GEOFLOW_MODEL_HPP

#include <json.hpp>

#include <optional>
#include <string>

#include "geoflow/nbody.hpp"
#include "geoflow/symplectic.hpp"

namespace geoflow {

/// Parsed and validated model file.
///
/// Chart models:
///   {"kind":"chart", "variables":[...], "metric":[["expr",...],...],
///    "guard":"expr", "periods":{"x":"1", "y":null},
///    "hamiltonian":{"potential":"expr"|null, "convention":"mechanics"|"paper"}}
/// Embedded models:
///   {"kind":"embedded", "ambient_dim":m, "constraints":["expr",...],
///    "ambient_form":"euclidean"|[[...]]}   (coordinates x1..xm)
/// N-body configs:
///   {"kind":"nbody", "bodies":[{"mass":..,"q":[3],"v":[3]},...], "G":..,
///    "signs":"all-plus"|[[+-1,...]], "mode":"mass-weighted"|"paper-literal",
///    "delta_min":..}
/// Rationals accept JSON integers or strings ("3/4", "0.25" exact).
struct ModelFile {
    enum class Kind { Chart, Embedded, NBody };
    Kind kind = Kind::Chart;
    std::optional<ChartMetric> chart;
    std::optional<EmbeddedVariety> embedded;
    std::optional<NBodyConfig> nbody;
    std::optional<RationalFunction> potential; // over the chart variables
    SignConvention convention = SignConvention::Mechanics;

    /// Geodesic (or potential) Hamiltonian system of a chart model.
    HamiltonianSystem build_system() const;
};

/// Parse from JSON; throws ModelError carrying a JSON-pointer-style path,
/// with expression parse errors wrapped (byte offsets preserved in text).
ModelFile parse_model(const nlohmann::json& j);

/// Read and parse a model file from disk.
ModelFile load_model(const std::string& path);

} // namespace geoflow

#endif
