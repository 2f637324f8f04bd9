#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <variant>

#include "bellsim/algebra.hpp"
#include "bellsim/rng.hpp"
#include "bellsim/vec3.hpp"

namespace bellsim {

/// Photon mode doubles analyzer angles before any correlation formula is
/// applied (orthogonal polarizations sit 90 degrees apart, not 180).
enum class ParticleKind { SpinHalf, Photon };

std::string_view to_string(ParticleKind kind);

/// Analyzer angle -> measurement direction in the x-y plane. SpinHalf maps
/// the angle directly; Photon doubles it, mapping the polarization problem
/// onto the spin one.
UnitVector3 map_setting(ParticleKind kind, double analyzer_angle_rad);

/// What the source emits, once per trial, before either setting exists.
/// Station A associates +lambda with its particle, station B -lambda.
struct SharedPayload {
    UnitVector3 lambda;
};

/// Joint +-1 outcome of the two stations.
struct PairOutcome {
    int a_out = +1;
    int b_out = -1;

    bool operator==(const PairOutcome&) const = default;
};

/// Complex per-pair value of the algebraic model; |Re z| <= 1, |Im z| <= 1.
struct ComplexProduct {
    Complex z;

    bool operator==(const ComplexProduct&) const = default;
};

using TrialValue = std::variant<PairOutcome, ComplexProduct>;

enum class ValueKind { PairOutcome, ComplexProduct };

// ---------------------------------------------------------------------------
// Station-factored measurement contract
// ---------------------------------------------------------------------------

/// Which inputs a station procedure touched. The remote setting is reachable
/// only through the instrumented accessor below and reading it is a locality
/// violation by construction.
enum StationRead : std::uint8_t {
    kReadSetting = 1u << 0,
    kReadPayload = 1u << 1,
    kReadRng = 1u << 2,
    kReadRemoteSetting = 1u << 3,
};

/**
 * The inputs one station may use during a trial: its own setting, the shared
 * payload, and its own random stream. Every access is recorded, so a causal
 * audit can list exactly what each station procedure received. The remote
 * station's setting is exposed only as an instrumented side channel for
 * negative-control fixtures; honest models never call it.
 */
class StationContext {
public:
    StationContext(const UnitVector3& setting, const SharedPayload& payload, RngStream& rng,
                   const UnitVector3* remote_setting = nullptr)
        : setting_(setting), payload_(payload), rng_(rng), remote_setting_(remote_setting) {}

    const UnitVector3& setting() const {
        reads_ |= kReadSetting;
        return setting_;
    }
    const SharedPayload& payload() const {
        reads_ |= kReadPayload;
        return payload_;
    }
    RngStream& rng() const {
        reads_ |= kReadRng;
        return rng_;
    }
    /// Side channel to the other station's setting. Any call is ledgered.
    const UnitVector3& remote_setting() const {
        reads_ |= kReadRemoteSetting;
        if (remote_setting_ == nullptr) {
            throw std::logic_error("StationContext: no remote setting wired in");
        }
        return *remote_setting_;
    }

    std::uint8_t reads() const { return reads_; }

private:
    const UnitVector3& setting_;
    const SharedPayload& payload_;
    RngStream& rng_;
    const UnitVector3* remote_setting_;
    mutable std::uint8_t reads_ = 0;
};

/// What a station sends down the classical channel after its measurement.
struct SignOutcome {
    int value;  // +1 or -1
};
struct RawDraw {
    double u;  // uniform (0,1) committed at the station
};
using StationRecord = std::variant<SignOutcome, RawDraw, AlgebraElement>;

/**
 * A correlation model in station-factored form.
 *
 * measure_a / measure_b run at the two stations and may touch only what their
 * StationContext grants. combine is the correlation-time step (the classical
 * comparison of the two records once both are available); it is deterministic
 * and consumes no randomness.
 */
class MeasurementModel {
public:
    virtual ~MeasurementModel() = default;

    virtual std::string_view name() const = 0;
    virtual ValueKind value_kind() const = 0;

    virtual StationRecord measure_a(const StationContext& ctx) const = 0;
    virtual StationRecord measure_b(const StationContext& ctx) const = 0;
    virtual TrialValue combine(const StationRecord& rec_a, const StationRecord& rec_b,
                               const UnitVector3& setting_a, const UnitVector3& setting_b,
                               const SharedPayload& payload) const = 0;

    /// One full trial: both stations, then the classical-channel combine.
    TrialValue evaluate(const UnitVector3& setting_a, const UnitVector3& setting_b,
                        const SharedPayload& payload, RngStream& rng_a, RngStream& rng_b) const {
        const StationContext ctx_a(setting_a, payload, rng_a, &setting_b);
        const StationContext ctx_b(setting_b, payload, rng_b, &setting_a);
        const StationRecord rec_a = measure_a(ctx_a);
        const StationRecord rec_b = measure_b(ctx_b);
        return combine(rec_a, rec_b, setting_a, setting_b, payload);
    }
};

// ---------------------------------------------------------------------------
// Exact quantum singlet statistics
// ---------------------------------------------------------------------------

/// Singlet correlation. SpinHalf: -a.b. Photon (a, b are analyzer directions):
/// -cos(2 theta). Dimensionless; in spin-projection units the value carries an
/// extra hbar^2/4 factor.
double qm_correlation(const UnitVector3& a, const UnitVector3& b, ParticleKind kind);

/// Joint outcome probabilities, indexed [a_out][b_out] with 0 -> +1, 1 -> -1.
/// P(s,t) = (1 - s*t*(a.b))/4; marginals are exactly 1/2.
struct JointProbabilities {
    std::array<std::array<double, 2>, 2> p{};

    double operator()(int s, int t) const { return p[s == +1 ? 0 : 1][t == +1 ? 0 : 1]; }
};

JointProbabilities qm_joint_probabilities(const UnitVector3& a, const UnitVector3& b);

/// Samples a pair outcome from the singlet joint distribution. Two raw draws:
/// a fair coin for station A, then B conditionally on the overlap.
PairOutcome qm_sample_pair(const UnitVector3& a, const UnitVector3& b, RngStream& rng);

/**
 * Quantum singlet model under the station-factored contract. Station A
 * commits a fair coin, station B commits a raw uniform draw; the Born-rule
 * joint statistics are realized in the combine step, which is where this
 * model (unlike the two local ones) needs both settings at once: no rule
 * local to the stations produces these statistics.
 */
class QmSingletModel final : public MeasurementModel {
public:
    std::string_view name() const override { return "qm"; }
    ValueKind value_kind() const override { return ValueKind::PairOutcome; }
    StationRecord measure_a(const StationContext& ctx) const override;
    StationRecord measure_b(const StationContext& ctx) const override;
    TrialValue combine(const StationRecord& rec_a, const StationRecord& rec_b,
                       const UnitVector3& setting_a, const UnitVector3& setting_b,
                       const SharedPayload& payload) const override;
};

// ---------------------------------------------------------------------------
// Sign-prescription hidden-variable model
// ---------------------------------------------------------------------------

/// sign with a fixed tie-break: 0 maps to +1.
inline int sign_plus(double x) { return x >= 0.0 ? +1 : -1; }

/// A = sign(lambda.a); B = -sign(lambda.b). The negation sits outside the
/// sign so B(x) = -A(x) holds for every lambda, including the measure-zero
/// tie lambda.x = 0 (where sign_plus returns +1 by convention).
PairOutcome lhv_sign_outcomes(const SharedPayload& payload, const UnitVector3& a,
                              const UnitVector3& b);

/// Deterministic local model: each station needs only its setting and the
/// shared direction. Ensemble correlation is -1 + 2*theta/pi.
class SignLhvModel final : public MeasurementModel {
public:
    std::string_view name() const override { return "lhv-sign"; }
    ValueKind value_kind() const override { return ValueKind::PairOutcome; }
    StationRecord measure_a(const StationContext& ctx) const override;
    StationRecord measure_b(const StationContext& ctx) const override;
    TrialValue combine(const StationRecord& rec_a, const StationRecord& rec_b,
                       const UnitVector3& setting_a, const UnitVector3& setting_b,
                       const SharedPayload& payload) const override;
};

// ---------------------------------------------------------------------------
// Algebraic shared-vector model
// ---------------------------------------------------------------------------

/// Scalar value of an algebra element at a concrete direction:
/// c0 + c1*v1 + c2*v2 + c3*v3 — how a sampled real direction is substituted
/// into the generator part of an element.
Complex evaluate_at(const AlgebraElement& e, const UnitVector3& v);

/// Per-pair value z = -[(a.b) + i*(lambda.(a x b))]: the generator-algebra
/// product of the two station observables collapsed by the product identity,
/// with the shared sampled direction substituted into the residual generator
/// term, negated for the -lambda association of station B.
ComplexProduct algebraic_pair_value(const SharedPayload& payload, const UnitVector3& a,
                                    const UnitVector3& b);

/**
 * The algebraic shared-vector model. Each station's record is its own
 * setting embedded as a generator combination (B negated for its -lambda
 * association); the product of the two records collapses to
 * (a.b)*1 + i*embed(a x b), and the combine step evaluates that closed form
 * at the shared direction. Per-trial values are complex scalars; no +-1
 * extraction is defined, and audits report the codomain as such.
 */
class AlgebraicModel final : public MeasurementModel {
public:
    std::string_view name() const override { return "algebraic"; }
    ValueKind value_kind() const override { return ValueKind::ComplexProduct; }
    StationRecord measure_a(const StationContext& ctx) const override;
    StationRecord measure_b(const StationContext& ctx) const override;
    TrialValue combine(const StationRecord& rec_a, const StationRecord& rec_b,
                       const UnitVector3& setting_a, const UnitVector3& setting_b,
                       const SharedPayload& payload) const override;
};

/// The three shipped models by CLI name ("qm", "lhv-sign", "algebraic"),
/// or null for an unknown name.
const MeasurementModel* find_model(std::string_view name);

}  // namespace bellsim
