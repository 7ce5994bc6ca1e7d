#ifndef GEOFLOW_DYNAMICS_HPP
#define GEOFLOW_DYNAMICS_HPP

#include <functional>
#include <optional>

#include "geoflow/integrate.hpp"

namespace geoflow {

/// Lyapunov exponents of a full tangent frame, estimated with QR
/// re-orthonormalization in the chart-metric phase norm. The reported
/// exponent is the accumulated-log rate over the second half of the
/// horizon (the first half is burn-in); the residual is the change
/// between the two half-window rates.
struct SplittingEstimate {
    std::vector<double> exponents; // sorted descending, one per phase dim
    std::vector<double> residuals; // |second-half rate - first-half rate|
    std::size_t flow_direction_index = 0; // index of the exponent nearest 0
    bool complete = true;                 // false if the orbit left the guard early
    double horizon_used = 0;
};

SplittingEstimate lyapunov_spectrum(const HamiltonianSystem& sys, const std::vector<double>& z0,
                                    const IntegratorConfig& cfg, double horizon,
                                    double renorm_interval);

struct RecurrenceResult {
    double fraction = 0;
    std::vector<double> first_return_times; // NaN when not recurrent
    std::vector<bool> recurrent;
    std::vector<bool> guard_exited;
};

/// Finite-horizon stable-set probe: q lies in the size-eps stable set of p
/// up to the horizon iff d(phi_t(p), phi_t(q)) <= eps at every sampled
/// t in [0, T]. The germ-level statement is out of computational reach;
/// this is the honest finite surrogate.
bool stable_set_probe(const HamiltonianSystem& sys, const std::vector<double>& p,
                      const std::vector<double>& q, double eps, double horizon,
                      const IntegratorConfig& cfg);

/// A seed is recurrent iff some sampled t in [min_time, horizon] has
/// d(phi_t(p), p) <= eps in the quotient phase distance. Guard exits count
/// as non-recurrent and are flagged.
RecurrenceResult recurrence_statistics(const HamiltonianSystem& sys,
                                       const std::vector<std::vector<double>>& seeds, double eps,
                                       double min_time, double horizon,
                                       const IntegratorConfig& cfg);

/// Numeric flow interface shared by chart and embedded systems, for the
/// orbit machinery.
struct OrbitModel {
    std::size_t dim = 0;
    /// integrate by signed time T from z (fixed internal step)
    std::function<std::vector<double>(const std::vector<double>&, double)> advance;
    std::function<std::vector<double>(const std::vector<double>&)> field;
    std::function<double(const double*, const double*)> distance;
    std::function<void(const double*, const double*, double*)> displacement; // a - b, wrapped
    /// conserved energy; pins the refinement to the seed's level set, since
    /// periodic orbits come in one-parameter families across energies
    std::function<double(const std::vector<double>&)> energy;
};

OrbitModel make_orbit_model(const HamiltonianSystem& sys, const IntegratorConfig& cfg);
OrbitModel make_orbit_model(const EmbeddedVariety& v, const IntegratorConfig& cfg);

struct PeriodEntry {
    double period = 0;
    double uncertainty = 0;
    std::vector<double> orbit_seed; // refined point on the orbit
};

struct SpectrumSample {
    std::vector<PeriodEntry> entries;
    std::size_t dropped_candidates = 0; // Newton failures, logged not fatal
};

/// Phase 1 scans [0, horizon] for near-returns d(phi_t p, p) <= threshold;
/// phase 2 refines each candidate by a damped least-squares Newton step on
/// (point, period) with a transversal-section row. Accepted orbits satisfy
/// |phi_T(p*) - p*| <= refine_tol; periods are deduplicated within
/// combined uncertainty.
SpectrumSample periodic_orbit_search(const OrbitModel& model,
                                     const std::vector<std::vector<double>>& seeds,
                                     double horizon, double near_return_threshold,
                                     double refine_tol);

enum class ArithmeticityKind { Arithmetic, NonArithmetic, Inconclusive };

struct ArithmeticityVerdict {
    ArithmeticityKind kind = ArithmeticityKind::Inconclusive;
    double generator = 0; // a, when Arithmetic(a)
    double residual = 0;  // final Euclid remainder scale
    std::string note;
};

/// Real Euclidean cascade with cutoff max(uncertainties). Arithmetic(a)
/// when a >= tolerance and every period is within uncertainty + tolerance
/// of an integer multiple k a, k <= max_multiple. NonArithmetic when the
/// cascade falls below tolerance while uncertainties are at least 10x
/// smaller. Inconclusive otherwise.
ArithmeticityVerdict arithmeticity_test(const SpectrumSample& sample, double tolerance,
                                        int max_multiple);

struct MixingOptions {
    unsigned rng_seed = 0; // required: drives all sampling
    int recurrence_seeds = 100;
    double recurrence_eps = 0.05;
    double recurrence_min_time = 1.0;
    double recurrence_horizon = 200.0;
    int orbit_seeds = 4;
    double orbit_horizon = 12.0;
    double near_return_threshold = 0.05;
    double refine_tol = 1e-9;
    double arithmeticity_tol = 1e-6;
    int max_multiple = 64;
    double correlation_horizon = 2000.0;
    double correlation_max_lag = 20.0;
    double correlation_lag_step = 1.0;
    std::optional<SpectrumSample> supplied_spectrum;
};

struct MixingReport {
    bool compact_type = false;
    bool recurrence_done = false;
    RecurrenceResult recurrence;
    bool spectrum_done = false;
    SpectrumSample spectrum;
    ArithmeticityVerdict verdict;
    bool correlation_done = false;
    std::vector<std::pair<double, double>> correlation; // (lag, C(lag))
    std::vector<std::string> assumed_hypotheses;        // stated, never checked
    std::string disclaimer;
    std::vector<std::string> notes;
};

/// Aggregates recurrence fraction, length-spectrum arithmeticity and a
/// Birkhoff-average correlation estimate for two fixed observables. The
/// report labels itself numerical evidence and lists the hypotheses of the
/// mixing criterion that are assumed rather than checked.
MixingReport mixing_report(const HamiltonianSystem& sys, const IntegratorConfig& cfg,
                           const MixingOptions& opts);

/// Unit-speed random phase seeds (positions in the periodic cell or the
/// given box; momenta scaled to H = 1/2), deterministic in rng_seed.
std::vector<std::vector<double>> sample_unit_speed_seeds(const HamiltonianSystem& sys, int count,
                                                         unsigned rng_seed,
                                                         double box_halfwidth = 1.0);

/// Unit-speed seeds along small primitive lattice directions, where
/// near-returns of a fully periodic chart occur within short horizons
/// (the closing-lemma search heuristic).
std::vector<std::vector<double>> lattice_orbit_seeds(const HamiltonianSystem& sys, int count);

} // namespace geoflow

#endif
