#pragma once

#include <cmath>
#include <numbers>
#include <string_view>

#include "lhv/model.hpp"
#include "lhv/rng.hpp"
#include "lhv/vec3.hpp"

namespace lhv {

/// Measure used for the direction of the rotated attractor circle in the
/// singlet ensemble.
enum class SphereMeasure {
    Uniform,           ///< rotation invariant: cos(theta) uniform on [-1, 1]
    UniformPolarAngle, ///< theta uniform on [0, pi]; sensitivity checks only
};

constexpr std::string_view to_string(SphereMeasure m) noexcept
{
    return m == SphereMeasure::Uniform ? "sphere" : "uniform_theta";
}

/// Point of the +j attractor circle at azimuth chi:
/// S = (r cos chi, r sin chi, j), U = (0, 0, J) with r = sqrt(J^2 - j^2).
inline SpinState alpha1_point(double chi, const ModelParams &p = {}) noexcept
{
    const double r = p.ring_radius();
    return {{r * std::cos(chi), r * std::sin(chi), p.j}, {0.0, 0.0, p.J}};
}

/// Draws a state uniformly from the +j attractor circle rotated by
/// rotate_y(., theta), i.e. an eigen-ensemble of S . rotate_y(e_z, theta).
inline SpinState sample_eigen(double theta, Stream &rng, const ModelParams &p = {})
{
    const double chi = 2.0 * std::numbers::pi * rng.uniform01();
    return rotate_y(alpha1_point(chi, p), theta);
}

inline SpinState sample_eigen(double theta, RngSeed seed, const ModelParams &p = {})
{
    Stream rng(seed);
    return sample_eigen(theta, rng, p);
}

/// Pair of states with S_A + S_B = 0 and U_A + U_B = 0 exactly.
class SingletPair {
public:
    explicit SingletPair(const SpinState &a) noexcept : a_(a), b_(-a) {}

    [[nodiscard]] const SpinState &a() const noexcept { return a_; }
    [[nodiscard]] const SpinState &b() const noexcept { return b_; }

private:
    SpinState a_;
    SpinState b_;
};

/// Builds object A as rotate_z(rotate_y(alpha1_point(chi), theta), phi) and
/// object B as its exact negation.
inline SingletPair make_singlet(double phi, double theta, double chi, const ModelParams &p = {}) noexcept
{
    return SingletPair(rotate_z(rotate_y(alpha1_point(chi, p), theta), phi));
}

inline SingletPair sample_singlet(Stream &rng, const ModelParams &p = {},
                                  SphereMeasure measure = SphereMeasure::Uniform)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double phi = two_pi * rng.uniform01();
    const double u = rng.uniform01();
    const double theta =
        measure == SphereMeasure::Uniform ? std::acos(1.0 - 2.0 * u) : std::numbers::pi * u;
    const double chi = two_pi * rng.uniform01();
    return make_singlet(phi, theta, chi, p);
}

inline SingletPair sample_singlet(RngSeed seed, const ModelParams &p = {},
                                  SphereMeasure measure = SphereMeasure::Uniform)
{
    Stream rng(seed);
    return sample_singlet(rng, p, measure);
}

} // namespace lhv
