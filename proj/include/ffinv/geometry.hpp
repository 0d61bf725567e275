#pragma once

#include <cmath>
#include <numbers>

#include "ffinv/errors.hpp"

namespace ffinv {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

[[nodiscard]] constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
[[nodiscard]] inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

constexpr double kUnitTolerance = 1e-12;

/// Unit vector of S^1. Construction validates the norm.
class Direction {
public:
    Direction() = default;

    static Direction from_degrees(double degrees) {
        const double a = degrees * std::numbers::pi / 180.0;
        Direction d;
        d.v_ = {std::cos(a), std::sin(a)};
        d.degrees_ = degrees;
        return d;
    }

    static Direction from_vector(Vec2 v) {
        if (std::abs(norm(v) - 1.0) > kUnitTolerance)
            throw InvalidArgument("direction is not a unit vector (|v| = " +
                                  std::to_string(norm(v)) + ")");
        Direction d;
        d.v_ = v;
        d.degrees_ = std::atan2(v.y, v.x) * 180.0 / std::numbers::pi;
        return d;
    }

    [[nodiscard]] Vec2 vec() const { return v_; }
    [[nodiscard]] double degrees() const { return degrees_; }
    [[nodiscard]] Direction opposite() const {
        Direction d;
        d.v_ = -v_;
        d.degrees_ = degrees_ + 180.0;
        return d;
    }

private:
    Vec2 v_{1.0, 0.0};
    double degrees_ = 0.0;
};

}  // namespace ffinv
