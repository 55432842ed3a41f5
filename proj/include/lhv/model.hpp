#pragma once

#include <cmath>
#include <numbers>

#include "lhv/errors.hpp"
#include "lhv/vec3.hpp"

namespace lhv {

/// Model constants of the measurement dynamics plus the integrator settings.
struct ModelParams {
    double j = 0.5;                 ///< measured spin magnitude
    double J = std::sqrt(0.75);     ///< spin norm sqrt(j(j+1))
    double eps1 = 10.0;             ///< spin relaxation rate
    double eps2 = 0.05;             ///< membership relaxation rate
    double delta = 0.01;            ///< half-width of the attractor neighbourhoods
    double step_h = 1e-4;           ///< fixed integrator step
    double t_max = 50.0;            ///< integration cap

    friend bool operator==(const ModelParams &, const ModelParams &) = default;

    void validate() const
    {
        auto finite = [](double v) { return std::isfinite(v); };
        if (!(finite(j) && finite(J) && finite(eps1) && finite(eps2) && finite(delta) && finite(step_h) &&
              finite(t_max)))
            throw ConstraintViolation("model parameters must be finite");
        if (!(j < J))
            throw ConstraintViolation("model.j must be smaller than model.J");
        if (!(delta > 0.0))
            throw ConstraintViolation("model.delta must be positive");
        if (!(step_h > 0.0))
            throw ConstraintViolation("model.step_h must be positive");
        if (!(t_max > 0.0))
            throw ConstraintViolation("model.t_max must be positive");
    }

    /// Radius sqrt(J^2 - j^2) of the attractor circles.
    [[nodiscard]] double ring_radius() const noexcept { return std::sqrt(J * J - j * j); }
};

/// Heaviside step with the boundary in the upper branch: 1 iff x >= 0.
constexpr double step_fn(double x) noexcept { return x >= 0.0 ? 1.0 : 0.0; }

/// Sign with sign_fn(0) = +1.
constexpr double sign_fn(double x) noexcept { return x >= 0.0 ? 1.0 : -1.0; }

namespace detail {

// cos(omega) is already clamped to [-1, 1].
inline double beta_from_cos(double cos_w, const ModelParams &p) noexcept
{
    const double sin_w = std::sqrt(1.0 - cos_w * cos_w);
    const double shape =
        p.j * cos_w - p.ring_radius() * std::cos(0.5 * std::numbers::pi * (1.0 - cos_w)) * sin_w;
    const double abs_c = std::abs(cos_w);
    // At |cos w| == 0.99 both branches fire and the multiplier is 1.98.
    return shape * (0.98 * step_fn(abs_c - 0.99) + step_fn(0.99 - abs_c));
}

inline double clamp_unit(double c) noexcept { return c > 1.0 ? 1.0 : (c < -1.0 ? -1.0 : c); }

} // namespace detail

/// Border value of S_z separating the basins of the +j and -j attractors,
/// evaluated at the polar angle omega of U.
inline double beta_border(const Vec3 &U, const ModelParams &p = {})
{
    const double n = U.norm();
    if (!(n > 0.0) || !std::isfinite(n))
        throw DegenerateInput("beta_border: polar angle of U is undefined for |U| = 0");
    return detail::beta_from_cos(detail::clamp_unit(U.z / n), p);
}

/// Time derivative of a phase-space point.
struct Derivative {
    Vec3 dS;
    Vec3 dU;
    /// Set when |U| = 0 and beta was replaced by 0.
    bool degenerate_beta = false;
};

namespace detail {

inline Derivative rhs_unchecked(const SpinState &x, const ModelParams &p) noexcept
{
    const Vec3 &S = x.S;
    const Vec3 &U = x.U;

    Derivative d;
    const double u2 = U.norm2();
    double beta = 0.0;
    if (u2 > 0.0)
        beta = beta_from_cos(clamp_unit(U.z / std::sqrt(u2)), p);
    else
        d.degenerate_beta = true;

    const double J2 = p.J * p.J;
    const double psi = S.norm2() - J2;
    const double phi_plus = S.z - p.j;
    const double phi_minus = S.z + p.j;
    const double above = step_fn(S.z - beta);
    const double below = step_fn(-S.z + beta);

    // dS = U x S - eps1 P_xy (2S) psi - eps1 {theta(Sz-b) phi+ + theta(b-Sz) phi-} e_z
    const Vec3 prec = cross(U, S);
    const double radial = 2.0 * p.eps1 * psi;
    d.dS = {prec.x - radial * S.x, prec.y - radial * S.y,
            prec.z - p.eps1 * (above * phi_plus + below * phi_minus)};

    // dU = -eps2 P_xy U - eps2 {Uz - sgn(Sz-b) J} e_z - eps2 Uz {|U|^2 - J^2} e_z
    d.dU = {-p.eps2 * U.x, -p.eps2 * U.y,
            -p.eps2 * (U.z - sign_fn(S.z - beta) * p.J) - p.eps2 * U.z * (u2 - J2)};
    return d;
}

} // namespace detail

/// Right-hand side of the measurement dynamics for the z-component.
///
/// A zero membership vector leaves omega undefined; beta is then taken as 0
/// and `degenerate_beta` is set on the result.
inline Derivative rhs(const SpinState &state, const ModelParams &params = {})
{
    if (!state.finite())
        throw NonFiniteState("rhs: state has non-finite components");
    return detail::rhs_unchecked(state, params);
}

} // namespace lhv
