#pragma once

#include <cmath>

namespace lhv {

/// Cartesian 3-vector in spin units (hbar = 1).
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend constexpr bool operator==(const Vec3 &, const Vec3 &) = default;

    constexpr Vec3 &operator+=(const Vec3 &o) noexcept
    {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr Vec3 &operator-=(const Vec3 &o) noexcept
    {
        x -= o.x;
        y -= o.y;
        z -= o.z;
        return *this;
    }
    constexpr Vec3 &operator*=(double s) noexcept
    {
        x *= s;
        y *= s;
        z *= s;
        return *this;
    }

    [[nodiscard]] double norm() const noexcept { return std::sqrt(x * x + y * y + z * z); }
    [[nodiscard]] constexpr double norm2() const noexcept { return x * x + y * y + z * z; }
    [[nodiscard]] bool finite() const noexcept { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

constexpr Vec3 operator+(Vec3 a, const Vec3 &b) noexcept { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3 &b) noexcept { return a -= b; }
constexpr Vec3 operator-(const Vec3 &a) noexcept { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(double s, Vec3 a) noexcept { return a *= s; }
constexpr Vec3 operator*(Vec3 a, double s) noexcept { return a *= s; }

constexpr double dot(const Vec3 &a, const Vec3 &b) noexcept { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3 &a, const Vec3 &b) noexcept
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline constexpr Vec3 e_z{0.0, 0.0, 1.0};

/// Right-handed rotation by `theta` about the y-axis.
inline Vec3 rotate_y(const Vec3 &v, double theta) noexcept
{
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {c * v.x + s * v.z, v.y, -s * v.x + c * v.z};
}

/// Right-handed rotation by `phi` about the z-axis.
inline Vec3 rotate_z(const Vec3 &v, double phi) noexcept
{
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    return {c * v.x - s * v.y, s * v.x + c * v.y, v.z};
}

/// Point (S, U) of the six-dimensional phase space: spin vector S and
/// ensemble-membership vector U.
struct SpinState {
    Vec3 S;
    Vec3 U;

    friend constexpr bool operator==(const SpinState &, const SpinState &) = default;

    [[nodiscard]] bool finite() const noexcept { return S.finite() && U.finite(); }
};

constexpr SpinState operator-(const SpinState &s) noexcept { return {-s.S, -s.U}; }

inline SpinState rotate_y(const SpinState &s, double theta) noexcept
{
    return {rotate_y(s.S, theta), rotate_y(s.U, theta)};
}

inline SpinState rotate_z(const SpinState &s, double phi) noexcept
{
    return {rotate_z(s.S, phi), rotate_z(s.U, phi)};
}

} // namespace lhv
