#pragma once

#include <array>
#include <cmath>

namespace vhc {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// Row-major 2x2 matrix.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    Mat2() = default;
    Mat2(double m11, double m12, double m21, double m22)
        : a11(m11), a12(m12), a21(m21), a22(m22) {}

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    Vec2 operator*(const Vec2& v) const {
        return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y};
    }
    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    Mat2 operator+(const Mat2& o) const {
        return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
    }
    Mat2 operator-(const Mat2& o) const {
        return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
    }
    Mat2 operator*(double s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }

    Mat2 transpose() const { return {a11, a21, a12, a22}; }
    double det() const { return a11 * a22 - a12 * a21; }
    double trace() const { return a11 + a22; }
    Mat2 inverse() const {
        const double d = det();
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }
    // A^T M A for symmetric M, used for Hessian pullbacks.
    Mat2 congruence(const Mat2& a) const {
        return a.transpose() * (*this) * a;
    }
    double max_abs() const {
        return std::max(std::max(std::fabs(a11), std::fabs(a12)),
                        std::max(std::fabs(a21), std::fabs(a22)));
    }
};

inline Mat2 operator*(double s, const Mat2& m) { return m * s; }

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    double max_abs() const {
        return std::max(std::fabs(x), std::max(std::fabs(y), std::fabs(z)));
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Plane rotation Q_theta = [[cos, -sin], [sin, cos]].
inline Vec2 rotate(double theta, const Vec2& v) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

}  // namespace vhc
