#include "bellsim/algebra.hpp"

#include <cmath>

namespace bellsim {

namespace {

// eps[i][j] holds (k, sign) with l_i l_j = i * sign * l_k for i != j, 1-based.
struct EpsEntry {
    int k;
    double sign;
};

constexpr EpsEntry kEps[4][4] = {
    {{0, 0}, {0, 0}, {0, 0}, {0, 0}},
    {{0, 0}, {0, 0}, {3, +1}, {2, -1}},
    {{0, 0}, {3, -1}, {0, 0}, {1, +1}},
    {{0, 0}, {2, +1}, {1, -1}, {0, 0}},
};

constexpr Complex kImag{0.0, 1.0};

}  // namespace

double max_coeff_distance(const AlgebraElement& a, const AlgebraElement& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        d = std::max(d, std::abs(a.c[i] - b.c[i]));
    }
    return d;
}

AlgebraElement embed_vector(const UnitVector3& v) {
    return embed_vector(v.vec());
}

AlgebraElement embed_vector(const Vec3& v) {
    AlgebraElement e;
    e.c[1] = v.x;
    e.c[2] = v.y;
    e.c[3] = v.z;
    return e;
}

AlgebraElement algebra_mul(const AlgebraElement& x, const AlgebraElement& y) {
    AlgebraElement r;
    r.c[0] = x.c[0] * y.c[0];
    for (int k = 1; k <= 3; ++k) {
        r.c[k] = x.c[0] * y.c[k] + x.c[k] * y.c[0];
    }
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            if (i == j) {
                r.c[0] += x.c[i] * y.c[i];  // l_i^2 = 1
            } else {
                const EpsEntry e = kEps[i][j];
                r.c[e.k] += kImag * e.sign * x.c[i] * y.c[j];
            }
        }
    }
    return r;
}

AlgebraElement product_identity(const UnitVector3& a, const UnitVector3& b) {
    AlgebraElement r = embed_vector(cross(a, b));
    for (std::size_t i = 1; i < 4; ++i) r.c[i] *= kImag;
    r.c[0] = dot(a, b);
    return r;
}

AlgebraElement phase_operator(const UnitVector3& a, const UnitVector3& b) {
    const double theta = relative_angle(a, b);
    AlgebraElement r;
    r.c[0] = std::cos(theta);
    const Vec3 axb = cross(a, b);
    const double s = norm(axb);
    if (s > 1e-14) {
        const Vec3 n = (1.0 / s) * axb;
        const double st = std::sin(theta);
        r.c[1] = kImag * st * n.x;
        r.c[2] = kImag * st * n.y;
        r.c[3] = kImag * st * n.z;
    }
    // a parallel or antiparallel to b: sin(theta) kills the axis term.
    return r;
}

namespace {

MatrixRep make_rep(Complex m00, Complex m01, Complex m10, Complex m11) {
    MatrixRep r;
    r.m[0][0] = m00;
    r.m[0][1] = m01;
    r.m[1][0] = m10;
    r.m[1][1] = m11;
    return r;
}

// Standard anticommuting 2x2 triple; m1 m2 = i m3 cyclically.
const MatrixRep kBasisMatrices[4] = {
    make_rep({1, 0}, {0, 0}, {0, 0}, {1, 0}),    // 1
    make_rep({0, 0}, {1, 0}, {1, 0}, {0, 0}),    // l1
    make_rep({0, 0}, {0, -1}, {0, 1}, {0, 0}),   // l2
    make_rep({1, 0}, {0, 0}, {0, 0}, {-1, 0}),   // l3
};

}  // namespace

MatrixRep to_matrix(const AlgebraElement& x) {
    MatrixRep r;
    for (std::size_t b = 0; b < 4; ++b) {
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                r.m[i][j] += x.c[b] * kBasisMatrices[b].m[i][j];
            }
        }
    }
    return r;
}

MatrixRep matrix_mul(const MatrixRep& a, const MatrixRep& b) {
    MatrixRep r;
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            r.m[i][j] = a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j];
        }
    }
    return r;
}

Complex matrix_trace(const MatrixRep& a) {
    return a.m[0][0] + a.m[1][1];
}

double max_entry_distance(const MatrixRep& a, const MatrixRep& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            d = std::max(d, std::abs(a.m[i][j] - b.m[i][j]));
        }
    }
    return d;
}

}  // namespace bellsim
