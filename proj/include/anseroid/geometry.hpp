#pragma once

#include <cmath>

namespace anseroid {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(const Vec2& o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// Unit vector for a heading angle measured from the +x axis.
inline Vec2 heading_vector(double theta) { return {std::cos(theta), std::sin(theta)}; }

// Wrap an angle into (-pi, pi].
inline double normalize_angle(double theta) {
    double a = std::remainder(theta, kTwoPi);
    if (a <= -kPi) a += kTwoPi;
    return a;
}

// Signed smallest difference a - b, wrapped into (-pi, pi].
inline double angle_difference(double a, double b) { return normalize_angle(a - b); }

struct VehicleState {
    Vec2 position;
    double heading = 0.0;  // rad, kept in (-pi, pi]
};

}  // namespace anseroid
