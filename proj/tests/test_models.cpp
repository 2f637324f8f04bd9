#include "doctest.h"

#include <cmath>
#include <random>

#include "bellsim/models.hpp"
#include "oracles.hpp"

using namespace bellsim;

TEST_CASE("setting map: spin uses the angle, photon doubles it") {
    const UnitVector3 spin45 = map_setting(ParticleKind::SpinHalf, deg_to_rad(45.0));
    CHECK(spin45.x() == doctest::Approx(std::cos(deg_to_rad(45.0))));
    CHECK(spin45.y() == doctest::Approx(std::sin(deg_to_rad(45.0))));

    const UnitVector3 photon45 = map_setting(ParticleKind::Photon, deg_to_rad(45.0));
    CHECK(photon45.x() == doctest::Approx(0.0));
    CHECK(photon45.y() == doctest::Approx(1.0));

    CHECK_THROWS_AS(map_setting(ParticleKind::SpinHalf,
                                std::numeric_limits<double>::quiet_NaN()),
                    std::invalid_argument);
    CHECK(to_string(ParticleKind::SpinHalf) == "spin");
    CHECK(to_string(ParticleKind::Photon) == "photon");
}

TEST_CASE("singlet correlation closed form") {
    const UnitVector3 a = UnitVector3::x_axis();
    CHECK(qm_correlation(a, a, ParticleKind::SpinHalf) == -1.0);
    CHECK(qm_correlation(a, a.negated(), ParticleKind::SpinHalf) == 1.0);
    CHECK(qm_correlation(a, UnitVector3::y_axis(), ParticleKind::SpinHalf) == 0.0);

    // Photon analyzers 45 degrees apart are fully anticorrelated in the
    // doubled-angle sense: -cos(90) = 0; at 90 degrees apart, +1.
    const UnitVector3 b45 = UnitVector3::from_planar_angle(deg_to_rad(45.0));
    const UnitVector3 b90 = UnitVector3::from_planar_angle(deg_to_rad(90.0));
    CHECK(qm_correlation(a, b45, ParticleKind::Photon) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(qm_correlation(a, b90, ParticleKind::Photon) == doctest::Approx(1.0));
}

TEST_CASE("joint probabilities: simplex, exact marginals, enumeration identity") {
    RngStream rng(71, 0);
    for (int t = 0; t < 2000; ++t) {
        const UnitVector3 a = sample_uniform_sphere(rng);
        const UnitVector3 b = sample_uniform_sphere(rng);
        const JointProbabilities jp = qm_joint_probabilities(a, b);

        double sum = 0.0;
        for (const int s : {+1, -1}) {
            for (const int u : {+1, -1}) {
                REQUIRE(jp(s, u) >= 0.0);
                sum += jp(s, u);
            }
        }
        REQUIRE(sum == doctest::Approx(1.0).epsilon(1e-14));
        REQUIRE(jp(+1, +1) + jp(+1, -1) == doctest::Approx(0.5).epsilon(1e-14));
        REQUIRE(jp(+1, +1) + jp(-1, +1) == doctest::Approx(0.5).epsilon(1e-14));

        // E(a,b) recomputed by exhaustive enumeration over the four outcomes.
        double e = 0.0;
        for (const int s : {+1, -1}) {
            for (const int u : {+1, -1}) {
                e += s * u * jp(s, u);
            }
        }
        REQUIRE(std::abs(e - qm_correlation(a, b, ParticleKind::SpinHalf)) < 1e-12);
    }
}

TEST_CASE("pair sampling matches the joint distribution") {
    const UnitVector3 a = UnitVector3::x_axis();
    const UnitVector3 b = UnitVector3::from_planar_angle(deg_to_rad(60.0));
    const JointProbabilities jp = qm_joint_probabilities(a, b);

    RngStream rng(72, 0);
    const int n = 200000;
    int counts[2][2] = {};
    for (int i = 0; i < n; ++i) {
        const PairOutcome o = qm_sample_pair(a, b, rng);
        ++counts[o.a_out == +1 ? 0 : 1][o.b_out == +1 ? 0 : 1];
    }
    for (const int s : {+1, -1}) {
        for (const int u : {+1, -1}) {
            const double p = jp(s, u);
            const double freq =
                static_cast<double>(counts[s == +1 ? 0 : 1][u == +1 ? 0 : 1]) / n;
            const double sigma = std::sqrt(p * (1.0 - p) / n);
            CHECK(std::abs(freq - p) < 4.0 * sigma);
        }
    }
}

TEST_CASE("singlet sampling at matched settings never misses") {
    const UnitVector3 dirs[2] = {UnitVector3::x_axis(), UnitVector3::normalized(0.3, -1.0, 2.0)};
    for (const UnitVector3& d : dirs) {
        RngStream rng(73, 0);
        for (int i = 0; i < 100000; ++i) {
            const PairOutcome o = qm_sample_pair(d, d, rng);
            REQUIRE(o.a_out * o.b_out == -1);
        }
    }
}

TEST_CASE("sign rule: station B is the exact negation of station A") {
    RngStream rng(74, 0);
    for (int i = 0; i < 100000; ++i) {
        const SharedPayload payload{sample_uniform_sphere(rng)};
        const UnitVector3 d = sample_uniform_sphere(rng);
        const PairOutcome o = lhv_sign_outcomes(payload, d, d);
        REQUIRE(o.a_out * o.b_out == -1);
    }
    // The tie lambda.d = 0 stays anticorrelated by construction.
    const SharedPayload tie{UnitVector3::z_axis()};
    const PairOutcome o = lhv_sign_outcomes(tie, UnitVector3::x_axis(), UnitVector3::x_axis());
    CHECK(o.a_out == +1);
    CHECK(o.b_out == -1);
}

TEST_CASE("sign rule ensemble follows the linear-in-angle law") {
    // Independent pipeline: different generator, different sphere method.
    std::mt19937_64 gen(424242);
    const UnitVector3 a = UnitVector3::x_axis();
    for (const double theta : {deg_to_rad(30.0), deg_to_rad(45.0), deg_to_rad(120.0)}) {
        const UnitVector3 b = UnitVector3::from_planar_angle(theta);
        const int n = 200000;
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const SharedPayload payload{oracle::sphere_by_rejection(gen)};
            const PairOutcome o = lhv_sign_outcomes(payload, a, b);
            sum += o.a_out * o.b_out;
        }
        const double mean = sum / n;
        const double line = oracle::sign_rule_line(theta);
        const double sigma = std::sqrt((1.0 - line * line) / n);
        CHECK(std::abs(mean - line) < 4.0 * sigma);
    }
}

TEST_CASE("algebraic per-pair value: deterministic real part, shared-direction imaginary part") {
    RngStream rng(75, 0);
    for (int t = 0; t < 20000; ++t) {
        const UnitVector3 a = sample_uniform_sphere(rng);
        const UnitVector3 b = sample_uniform_sphere(rng);
        const SharedPayload payload{sample_uniform_sphere(rng)};
        const ComplexProduct v = algebraic_pair_value(payload, a, b);

        REQUIRE(v.z.real() == -dot(a, b));
        const Vec3 axb = cross(a, b);
        REQUIRE(std::abs(v.z.imag() + dot(payload.lambda.vec(), axb)) < 1e-15);
        REQUIRE(std::abs(v.z.imag()) <= norm(axb) + 1e-15);
    }

    // Matched settings: exactly -1, for every shared direction.
    const UnitVector3 d = UnitVector3::normalized(0.3, -1.0, 2.0);
    for (int t = 0; t < 1000; ++t) {
        const SharedPayload payload{sample_uniform_sphere(rng)};
        const ComplexProduct v = algebraic_pair_value(payload, d, d);
        REQUIRE(v.z == Complex(-1.0, 0.0));
    }
}

TEST_CASE("algebraic ensemble: imaginary part averages out") {
    RngStream rng(76, 0);
    const UnitVector3 a = UnitVector3::x_axis();
    const UnitVector3 b = UnitVector3::from_planar_angle(deg_to_rad(60.0));
    const int n = 200000;
    double im_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const SharedPayload payload{sample_uniform_sphere(rng)};
        im_sum += algebraic_pair_value(payload, a, b).z.imag();
    }
    // Im = -lambda.(a x b); lambda components have sd 1/sqrt(3).
    const double sigma = norm(cross(a, b)) / std::sqrt(3.0 * n);
    CHECK(std::abs(im_sum / n) < 4.0 * sigma);
}

TEST_CASE("evaluate_at is the affine evaluation of the coefficients") {
    const UnitVector3 v = UnitVector3::normalized(1.0, 2.0, -2.0);
    CHECK(evaluate_at(AlgebraElement::one(), v) == Complex(1.0, 0.0));
    CHECK(evaluate_at(embed_vector(v), v) == Complex(dot(v, v), 0.0));
    AlgebraElement e;
    e.c[0] = Complex(0.5, -0.5);
    e.c[2] = Complex(0.0, 2.0);
    const Complex got = evaluate_at(e, v);
    CHECK(std::abs(got - (Complex(0.5, -0.5) + Complex(0.0, 2.0) * v.y())) < 1e-15);
}

TEST_CASE("model registry knows exactly the shipped names") {
    REQUIRE(find_model("qm") != nullptr);
    REQUIRE(find_model("lhv-sign") != nullptr);
    REQUIRE(find_model("algebraic") != nullptr);
    CHECK(find_model("qm")->name() == "qm");
    CHECK(find_model("lhv-sign")->value_kind() == ValueKind::PairOutcome);
    CHECK(find_model("algebraic")->value_kind() == ValueKind::ComplexProduct);
    CHECK(find_model("einstein") == nullptr);
    CHECK(find_model("") == nullptr);
}

TEST_CASE("station procedures stay inside their permitted inputs") {
    RngStream rng(77, 0);
    const UnitVector3 a = sample_uniform_sphere(rng);
    const UnitVector3 b = sample_uniform_sphere(rng);
    const SharedPayload payload{sample_uniform_sphere(rng)};

    for (const char* name : {"qm", "lhv-sign", "algebraic"}) {
        const MeasurementModel* model = find_model(name);
        RngStream rng_a = rng.substream(1);
        RngStream rng_b = rng.substream(2);
        StationContext ctx_a(a, payload, rng_a, &b);
        StationContext ctx_b(b, payload, rng_b, &a);
        const StationRecord rec_a = model->measure_a(ctx_a);
        const StationRecord rec_b = model->measure_b(ctx_b);

        CHECK((ctx_a.reads() & kReadRemoteSetting) == 0);
        CHECK((ctx_b.reads() & kReadRemoteSetting) == 0);

        // The classical-channel step is deterministic: same records, same value.
        const TrialValue v1 = model->combine(rec_a, rec_b, a, b, payload);
        const TrialValue v2 = model->combine(rec_a, rec_b, a, b, payload);
        CHECK(v1 == v2);
    }
}

TEST_CASE("trial values carry the kind the model declares") {
    RngStream rng(78, 0);
    const SharedPayload payload{sample_uniform_sphere(rng)};
    const UnitVector3 a = sample_uniform_sphere(rng);
    const UnitVector3 b = sample_uniform_sphere(rng);
    for (const char* name : {"qm", "lhv-sign", "algebraic"}) {
        const MeasurementModel* model = find_model(name);
        RngStream rng_a = rng.substream(3);
        RngStream rng_b = rng.substream(4);
        const TrialValue v = model->evaluate(a, b, payload, rng_a, rng_b);
        if (model->value_kind() == ValueKind::PairOutcome) {
            CHECK(std::holds_alternative<PairOutcome>(v));
            const PairOutcome o = std::get<PairOutcome>(v);
            CHECK(std::abs(o.a_out) == 1);
            CHECK(std::abs(o.b_out) == 1);
        } else {
            CHECK(std::holds_alternative<ComplexProduct>(v));
        }
    }
}
