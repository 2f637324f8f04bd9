#include "bellsim/models.hpp"

#include <cmath>

namespace bellsim {

std::string_view to_string(ParticleKind kind) {
    return kind == ParticleKind::SpinHalf ? "spin" : "photon";
}

UnitVector3 map_setting(ParticleKind kind, double analyzer_angle_rad) {
    if (!std::isfinite(analyzer_angle_rad)) {
        throw std::invalid_argument("map_setting: analyzer angle must be finite");
    }
    const double mapped = kind == ParticleKind::Photon ? 2.0 * analyzer_angle_rad : analyzer_angle_rad;
    return UnitVector3::from_planar_angle(mapped);
}

double qm_correlation(const UnitVector3& a, const UnitVector3& b, ParticleKind kind) {
    if (kind == ParticleKind::Photon) {
        return -std::cos(2.0 * relative_angle(a, b));
    }
    return -dot(a, b);
}

JointProbabilities qm_joint_probabilities(const UnitVector3& a, const UnitVector3& b) {
    const double d = dot(a, b);
    JointProbabilities jp;
    for (int si = 0; si < 2; ++si) {
        for (int ti = 0; ti < 2; ++ti) {
            const double s = si == 0 ? +1.0 : -1.0;
            const double t = ti == 0 ? +1.0 : -1.0;
            jp.p[si][ti] = (1.0 - s * t * d) / 4.0;
        }
    }
    return jp;
}

namespace {

// Conditional sampling shared by qm_sample_pair and the station-factored
// model: u_a decides A's fair coin, u_b decides whether B anti-aligns.
// P(b = -a | a) = (1 + a.b)/2, which makes matched settings anticorrelated
// on every single trial (u_b < 1 always holds since uniform01 < 1).
PairOutcome qm_pair_from_draws(double u_a, double u_b, double a_dot_b) {
    PairOutcome out;
    out.a_out = u_a < 0.5 ? +1 : -1;
    out.b_out = u_b < (1.0 + a_dot_b) / 2.0 ? -out.a_out : out.a_out;
    return out;
}

}  // namespace

PairOutcome qm_sample_pair(const UnitVector3& a, const UnitVector3& b, RngStream& rng) {
    const double u_a = rng.uniform01();
    const double u_b = rng.uniform01();
    return qm_pair_from_draws(u_a, u_b, dot(a, b));
}

StationRecord QmSingletModel::measure_a(const StationContext& ctx) const {
    return SignOutcome{ctx.rng().uniform01() < 0.5 ? +1 : -1};
}

StationRecord QmSingletModel::measure_b(const StationContext& ctx) const {
    return RawDraw{ctx.rng().uniform01()};
}

TrialValue QmSingletModel::combine(const StationRecord& rec_a, const StationRecord& rec_b,
                                   const UnitVector3& setting_a, const UnitVector3& setting_b,
                                   const SharedPayload&) const {
    const int s = std::get<SignOutcome>(rec_a).value;
    const double u_b = std::get<RawDraw>(rec_b).u;
    PairOutcome out;
    out.a_out = s;
    out.b_out = u_b < (1.0 + dot(setting_a, setting_b)) / 2.0 ? -s : s;
    return out;
}

PairOutcome lhv_sign_outcomes(const SharedPayload& payload, const UnitVector3& a,
                              const UnitVector3& b) {
    const Vec3 lambda = payload.lambda.vec();
    PairOutcome out;
    out.a_out = sign_plus(dot(lambda, a.vec()));
    out.b_out = -sign_plus(dot(lambda, b.vec()));
    return out;
}

StationRecord SignLhvModel::measure_a(const StationContext& ctx) const {
    return SignOutcome{sign_plus(dot(ctx.payload().lambda.vec(), ctx.setting().vec()))};
}

StationRecord SignLhvModel::measure_b(const StationContext& ctx) const {
    return SignOutcome{-sign_plus(dot(ctx.payload().lambda.vec(), ctx.setting().vec()))};
}

TrialValue SignLhvModel::combine(const StationRecord& rec_a, const StationRecord& rec_b,
                                 const UnitVector3&, const UnitVector3&,
                                 const SharedPayload&) const {
    return PairOutcome{std::get<SignOutcome>(rec_a).value, std::get<SignOutcome>(rec_b).value};
}

Complex evaluate_at(const AlgebraElement& e, const UnitVector3& v) {
    return e.c[0] + e.c[1] * v.x() + e.c[2] * v.y() + e.c[3] * v.z();
}

ComplexProduct algebraic_pair_value(const SharedPayload& payload, const UnitVector3& a,
                                    const UnitVector3& b) {
    // The generator product (l.a)(-l.b) collapses to -(a.b) - i l.(a x b);
    // evaluating the collapsed form keeps matched settings on the exact-
    // overlap path of dot(), so an a = b trial is -1, never -1 +- 1 ulp.
    // algebra_mul agrees with this to 1e-12 (tested), not bit-for-bit.
    const double re = -dot(a, b);
    const double im = -dot(payload.lambda.vec(), cross(a, b));
    return ComplexProduct{Complex(re, im)};
}

StationRecord AlgebraicModel::measure_a(const StationContext& ctx) const {
    return embed_vector(ctx.setting());
}

StationRecord AlgebraicModel::measure_b(const StationContext& ctx) const {
    return -embed_vector(ctx.setting());
}

TrialValue AlgebraicModel::combine(const StationRecord&, const StationRecord&,
                                   const UnitVector3& setting_a, const UnitVector3& setting_b,
                                   const SharedPayload& payload) const {
    return algebraic_pair_value(payload, setting_a, setting_b);
}

const MeasurementModel* find_model(std::string_view name) {
    static const QmSingletModel qm;
    static const SignLhvModel lhv;
    static const AlgebraicModel algebraic;
    if (name == qm.name()) return &qm;
    if (name == lhv.name()) return &lhv;
    if (name == algebraic.name()) return &algebraic;
    return nullptr;
}

}  // namespace bellsim
