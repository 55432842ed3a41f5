#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

#include "lhv/errors.hpp"
#include "lhv/integrator.hpp"
#include "lhv/model.hpp"
#include "lhv/vec3.hpp"

namespace lhv {

enum class Outcome : std::int8_t { MinusJ = -1, Unresolved = 0, PlusJ = 1 };

constexpr std::string_view to_string(Outcome o) noexcept
{
    switch (o) {
    case Outcome::PlusJ:
        return "+j";
    case Outcome::MinusJ:
        return "-j";
    case Outcome::Unresolved:
        break;
    }
    return "unresolved";
}

/// Result of measuring one object.
struct MeasurementRecord {
    Outcome outcome = Outcome::Unresolved;
    double tau = 0.0;           ///< finishing time (t_max when unresolved)
    SpinState final_state;      ///< state at termination, lab frame
    double axis_angle = 0.0;    ///< measured direction is rotate_y(e_z, axis_angle)
    std::uint32_t degenerate_beta_evals = 0;

    [[nodiscard]] bool resolved() const noexcept { return outcome != Outcome::Unresolved; }
    /// Measured value in spin units: +j, -j, or 0 when unresolved.
    [[nodiscard]] double value(double j) const noexcept { return static_cast<int>(outcome) * j; }
};

namespace detail {

// Linear structure on the phase space for the RK4 stepper.
struct Phase {
    Vec3 S;
    Vec3 U;
};

inline Phase operator+(const Phase &a, const Phase &b) noexcept { return {a.S + b.S, a.U + b.U}; }
inline Phase operator*(double s, const Phase &a) noexcept { return {s * a.S, s * a.U}; }

inline Outcome classify(const Vec3 &S, const ModelParams &p) noexcept
{
    if (std::abs(S.z - p.j) < p.delta)
        return Outcome::PlusJ;
    if (std::abs(S.z + p.j) < p.delta)
        return Outcome::MinusJ;
    return Outcome::Unresolved;
}

inline std::int64_t step_budget(const ModelParams &p) noexcept
{
    // Tolerate round-off when t_max is an integer multiple of step_h.
    return static_cast<std::int64_t>(std::ceil(p.t_max / p.step_h * (1.0 - 1e-12)));
}

} // namespace detail

/// Measures S_z: integrates the dynamics from t = 0 with fixed RK4 steps until
/// the state enters |S_z - j| < delta (outcome +j) or |S_z + j| < delta
/// (outcome -j), checked in that order after every step. The finishing time is
/// the end time of the step that entered the neighbourhood.
inline MeasurementRecord integrate_measure(const SpinState &state0, const ModelParams &params = {})
{
    if (!state0.finite())
        throw NonFiniteState("integrate_measure: initial state has non-finite components");

    MeasurementRecord rec;
    detail::Phase x{state0.S, state0.U};

    rec.outcome = detail::classify(x.S, params);
    if (rec.resolved()) {
        rec.final_state = state0;
        return rec;
    }

    std::uint32_t degenerate = 0;
    auto f = [&](const detail::Phase &y) {
        const Derivative d = detail::rhs_unchecked({y.S, y.U}, params);
        degenerate += d.degenerate_beta ? 1u : 0u;
        return detail::Phase{d.dS, d.dU};
    };

    const std::int64_t budget = detail::step_budget(params);
    for (std::int64_t k = 1; k <= budget; ++k) {
        x = rk4_step(x, params.step_h, f);
        const double t = static_cast<double>(k) * params.step_h;
        if (!(x.S.finite() && x.U.finite()))
            throw IntegrationBlowup(t);
        rec.outcome = detail::classify(x.S, params);
        if (rec.resolved()) {
            rec.tau = t;
            break;
        }
    }
    if (!rec.resolved())
        rec.tau = params.t_max;
    rec.final_state = {x.S, x.U};
    rec.degenerate_beta_evals = degenerate;
    return rec;
}

/// Measures S . rotate_y(e_z, theta) by integrating the rotated dynamics:
/// the state is carried into the measurement frame, measured there, and the
/// final state is rotated back to the lab frame.
inline MeasurementRecord measure_along(const SpinState &state0, double theta, const ModelParams &params = {})
{
    if (!std::isfinite(theta))
        throw NonFiniteState("measure_along: axis angle must be finite");
    MeasurementRecord rec = integrate_measure(rotate_y(state0, -theta), params);
    rec.final_state = rotate_y(rec.final_state, theta);
    rec.axis_angle = theta;
    return rec;
}

} // namespace lhv
