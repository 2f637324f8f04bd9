#pragma once

#include <cmath>
#include <stdexcept>

namespace bellsim {

/// Plain 3-vector. Not necessarily unit length (cross products land here).
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

/// Direction on the unit sphere: a measurement setting or a shared direction.
/// Invariant: x^2 + y^2 + z^2 = 1 within 1e-12.
class UnitVector3 {
public:
    /// Normalizes the given components. Throws if the vector is too short to
    /// define a direction.
    static UnitVector3 normalized(double x, double y, double z) {
        const double n = std::sqrt(x * x + y * y + z * z);
        if (!(n > 1e-150)) {
            throw std::invalid_argument("UnitVector3: cannot normalize a (near-)zero vector");
        }
        return UnitVector3(x / n, y / n, z / n);
    }

    static UnitVector3 normalized(const Vec3& v) { return normalized(v.x, v.y, v.z); }

    /// Components already unit length (e.g. trig construction, sphere sampler).
    /// Caller guarantees the norm is 1 to a few ulp; no renormalization.
    static UnitVector3 from_unit_components(double x, double y, double z) {
        return UnitVector3(x, y, z);
    }

    /// Unit vector at the given angle in the x-y plane, measured from +x.
    /// Components within a few ulp of a quadrant are snapped to it, so
    /// right-angle settings are exactly orthogonal/antiparallel.
    static UnitVector3 from_planar_angle(double radians) {
        double c = std::cos(radians);
        double s = std::sin(radians);
        if (std::abs(c) < 1e-15) c = 0.0;
        if (std::abs(s) < 1e-15) s = 0.0;
        return UnitVector3(c, s, 0.0);
    }

    static UnitVector3 x_axis() { return UnitVector3(1.0, 0.0, 0.0); }
    static UnitVector3 y_axis() { return UnitVector3(0.0, 1.0, 0.0); }
    static UnitVector3 z_axis() { return UnitVector3(0.0, 0.0, 1.0); }

    double x() const { return x_; }
    double y() const { return y_; }
    double z() const { return z_; }

    Vec3 vec() const { return {x_, y_, z_}; }
    UnitVector3 negated() const { return UnitVector3(-x_, -y_, -z_); }

    bool operator==(const UnitVector3& o) const { return x_ == o.x_ && y_ == o.y_ && z_ == o.z_; }

private:
    UnitVector3(double x, double y, double z) : x_(x), y_(y), z_(z) {}
    double x_, y_, z_;
};

/// Dot product of two unit directions, clamped into [-1, 1] so it is always a
/// valid acos argument (float drift near parallel settings). Identical
/// directions overlap by exactly 1: matched settings must behave exactly, not
/// to within an ulp of cos^2 + sin^2.
inline double dot(const UnitVector3& u, const UnitVector3& v) {
    if (u == v) {
        return 1.0;
    }
    const double d = u.x() * v.x() + u.y() * v.y() + u.z() * v.z();
    return d > 1.0 ? 1.0 : (d < -1.0 ? -1.0 : d);
}

/// u x v; |u x v| = sin(theta) for unit inputs.
inline Vec3 cross(const UnitVector3& u, const UnitVector3& v) {
    return {u.y() * v.z() - u.z() * v.y(),
            u.z() * v.x() - u.x() * v.z(),
            u.x() * v.y() - u.y() * v.x()};
}

/// Angle between two unit directions, in [0, pi].
inline double relative_angle(const UnitVector3& u, const UnitVector3& v) {
    return std::acos(dot(u, v));
}

inline constexpr double deg_to_rad(double deg) { return deg * 3.14159265358979323846 / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / 3.14159265358979323846; }

}  // namespace bellsim
