#pragma once
#include <cmath>
#include <algorithm>

namespace torcode {

struct Vec2 {
    double x = 0.0, y = 0.0;
    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator-() const { return {-x, -y}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double norm_inf() const { return std::max(std::fabs(x), std::fabs(y)); }
    Vec2 normalized() const { double n = norm(); return {x / n, y / n}; }
};

inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }

// 2x2 matrix [[a,b],[c,d]], row-major.
struct Mat2 {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    static Mat2 identity() { return {}; }
    static Mat2 rotation(double t) { return {std::cos(t), -std::sin(t), std::sin(t), std::cos(t)}; }

    Vec2 operator*(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    Mat2 operator*(const Mat2& m) const {
        return {a * m.a + b * m.c, a * m.b + b * m.d, c * m.a + d * m.c, c * m.b + d * m.d};
    }
    Mat2 operator+(const Mat2& m) const { return {a + m.a, b + m.b, c + m.c, d + m.d}; }
    Mat2 operator-(const Mat2& m) const { return {a - m.a, b - m.b, c - m.c, d - m.d}; }
    Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }

    double det() const { return a * d - b * c; }
    double trace() const { return a + d; }
    Mat2 transpose() const { return {a, c, b, d}; }
    Mat2 inverse() const {
        double dt = det();
        return {d / dt, -b / dt, -c / dt, a / dt};
    }
    double frob() const { return std::sqrt(a * a + b * b + c * c + d * d); }
    // Largest singular value, closed form.
    double opnorm() const {
        double f2 = a * a + b * b + c * c + d * d;
        double dt = det();
        double disc = f2 * f2 - 4.0 * dt * dt;
        if (disc < 0.0) disc = 0.0;
        return std::sqrt(0.5 * (f2 + std::sqrt(disc)));
    }
    double opnorm_min() const {  // smallest singular value
        double f2 = a * a + b * b + c * c + d * d;
        double dt = det();
        double disc = f2 * f2 - 4.0 * dt * dt;
        if (disc < 0.0) disc = 0.0;
        double s2 = 0.5 * (f2 - std::sqrt(disc));
        return std::sqrt(std::max(s2, 0.0));
    }
    // Leading eigenvector of a symmetric matrix (this must be symmetric).
    Vec2 sym_leading_eigvec() const {
        // eigenvalues of [[a,b],[b,d]]
        double half = 0.5 * (a + d);
        double r = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
        double lam = half + r;
        Vec2 v1{b, lam - a}, v2{lam - d, c};
        Vec2 v = (v1.norm() >= v2.norm()) ? v1 : v2;
        if (v.norm() == 0.0) return {1.0, 0.0};
        return v.normalized();
    }
};

}  // namespace torcode
