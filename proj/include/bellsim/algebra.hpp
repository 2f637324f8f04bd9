#pragma once

#include <array>
#include <complex>

#include "bellsim/vec3.hpp"

namespace bellsim {

using Complex = std::complex<double>;

/**
 * Element of the 4-dimensional complex algebra spanned by {1, l1, l2, l3}
 * with l_i l_j = delta_ij + i eps_ijk l_k (right-handed, eps_123 = +1).
 *
 * Coefficients are the primary representation; the 2x2 matrix form below is
 * an independent verification oracle, not the implementation.
 */
struct AlgebraElement {
    // c[0] multiplies the unit, c[1..3] the generators l1..l3.
    std::array<Complex, 4> c{};

    static AlgebraElement one() {
        AlgebraElement e;
        e.c[0] = 1.0;
        return e;
    }

    /// Generator l_k, k in {1, 2, 3}.
    static AlgebraElement generator(int k) {
        AlgebraElement e;
        e.c[static_cast<std::size_t>(k)] = 1.0;
        return e;
    }

    AlgebraElement operator+(const AlgebraElement& o) const {
        AlgebraElement r;
        for (std::size_t i = 0; i < 4; ++i) r.c[i] = c[i] + o.c[i];
        return r;
    }

    AlgebraElement operator-(const AlgebraElement& o) const {
        AlgebraElement r;
        for (std::size_t i = 0; i < 4; ++i) r.c[i] = c[i] - o.c[i];
        return r;
    }

    AlgebraElement operator-() const {
        AlgebraElement r;
        for (std::size_t i = 0; i < 4; ++i) r.c[i] = -c[i];
        return r;
    }
};

inline AlgebraElement operator*(Complex s, const AlgebraElement& e) {
    AlgebraElement r;
    for (std::size_t i = 0; i < 4; ++i) r.c[i] = s * e.c[i];
    return r;
}

/// Max coefficient-wise distance; the metric used by every exactness check.
double max_coeff_distance(const AlgebraElement& a, const AlgebraElement& b);

/// v1*l1 + v2*l2 + v3*l3 for a unit direction v (scalar part zero).
AlgebraElement embed_vector(const UnitVector3& v);

/// Same embedding for a general (not necessarily unit) vector.
AlgebraElement embed_vector(const Vec3& v);

/// Bilinear product from the generator relations l_i l_j = delta_ij + i eps_ijk l_k.
AlgebraElement algebra_mul(const AlgebraElement& x, const AlgebraElement& y);

/// Closed form (a.b)*1 + i*embed(a x b). Equals algebra_mul(embed a, embed b)
/// coefficient-wise to 1e-12.
AlgebraElement product_identity(const UnitVector3& a, const UnitVector3& b);

/// cos(theta)*1 + i sin(theta)*embed(n), n = (a x b)/|a x b|, theta the angle
/// between a and b. When a and b are (anti)parallel the n term vanishes with
/// sin(theta). Equals product_identity(a, b).
AlgebraElement phase_operator(const UnitVector3& a, const UnitVector3& b);

/// 2x2 complex matrix: independent representation of the same algebra.
/// The map to_matrix is a homomorphism: M(xy) = M(x) M(y).
struct MatrixRep {
    std::array<std::array<Complex, 2>, 2> m{};
};

MatrixRep to_matrix(const AlgebraElement& x);
MatrixRep matrix_mul(const MatrixRep& a, const MatrixRep& b);
Complex matrix_trace(const MatrixRep& a);
double max_entry_distance(const MatrixRep& a, const MatrixRep& b);

}  // namespace bellsim
