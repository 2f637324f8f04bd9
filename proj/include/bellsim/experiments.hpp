#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bellsim/estimator.hpp"
#include "bellsim/models.hpp"

namespace bellsim {

struct EstimateOptions {
    int threads = 1;
    std::uint64_t stream_root = 0;  // top-level stream id; distinct roots never share draws
};

/// Monte Carlo estimate of E(a,b) over n trials. Deterministic in
/// (seed, stream_root, settings); thread count never changes the result.
CorrelationEstimate estimate_correlation(const MeasurementModel& model, const UnitVector3& a,
                                         const UnitVector3& b, std::uint64_t n, std::uint64_t seed,
                                         const EstimateOptions& opts = {});

struct SweepPoint {
    double angle_rad = 0.0;  // analyzer angle of station B; station A stays at angle 0
    CorrelationEstimate estimate;
};

struct SweepOptions {
    int threads = 1;
    // Closed-form path instead of sampling (qm model only): mean = -a.b of the
    // mapped settings, stderr = 0, n = 0 rows mark the values as analytic.
    bool analytic = false;
};

/// One correlation estimate per grid angle, coplanar settings. Point i draws
/// from stream root i, so grid shape changes never perturb individual points.
std::vector<SweepPoint> sweep(const MeasurementModel& model, ParticleKind kind,
                              const std::vector<double>& angles_rad, std::uint64_t n_per_point,
                              std::uint64_t seed, const SweepOptions& opts = {});

struct ChshSettings {
    UnitVector3 a = UnitVector3::x_axis();
    UnitVector3 a_prime = UnitVector3::y_axis();
    UnitVector3 b = UnitVector3::x_axis();
    UnitVector3 b_prime = UnitVector3::y_axis();

    /// Maximal-violation planar geometry: analyzer angles 0, 90, 45, 135 deg
    /// for spin; 0, 45, 22.5, 67.5 deg for photon (same settings after the
    /// angle-doubling map).
    static ChshSettings canonical(ParticleKind kind);
};

struct ChshResult {
    CorrelationEstimate ab;
    CorrelationEstimate a_prime_b;
    CorrelationEstimate ab_prime;
    CorrelationEstimate a_prime_b_prime;
    double s_value = 0.0;
    double s_stderr = 0.0;
};

/// S = E(a,b) + E(a',b) - E(a,b') + E(a',b'), stderr by quadrature.
ChshResult combine_chsh(const CorrelationEstimate& ab, const CorrelationEstimate& a_prime_b,
                        const CorrelationEstimate& ab_prime,
                        const CorrelationEstimate& a_prime_b_prime);

/// Estimates the four correlations on independent stream roots 0..3, n trials
/// each, then combines them.
ChshResult chsh(const MeasurementModel& model, const ChshSettings& settings, std::uint64_t n,
                std::uint64_t seed, const EstimateOptions& opts = {});

/**
 * Structural self-check of one model, every field computed from executed
 * trials (half of n at matched settings split over two directions, the rest
 * at fixed oblique settings) plus a canonical CHSH run and a pass through the
 * event-scheduled harness. Marginal fields apply to +-1 pair models,
 * im_mean to complex-valued ones; the inapplicable ones stay empty.
 */
struct AuditReport {
    std::string model;
    std::string codomain;  // "real +/-1 pair" or "complex scalar", from observed values
    std::uint64_t matched_trials = 0;
    bool matched_setting_exact = false;  // every matched-setting trial yielded exactly -1
    std::optional<double> marginal_a_plus;
    std::optional<double> marginal_b_plus;
    std::optional<bool> marginals_balanced;  // both within 2/sqrt(n) of 1/2
    std::optional<double> im_mean;
    ChshResult chsh_canonical;
    bool chsh_exceeds_classical_bound = false;  // |S| > 2 by more than 4 s_stderr
    std::uint64_t locality_trials = 0;
    bool locality_compliant = false;  // all harness trials ledger-clean, spacelike schedule
    std::string locality_scope_note;
};

/// n >= 10^4 required so the statistical fields carry weight.
AuditReport audit_model(const MeasurementModel& model, std::uint64_t n, std::uint64_t seed,
                        const EstimateOptions& opts = {});

}  // namespace bellsim
