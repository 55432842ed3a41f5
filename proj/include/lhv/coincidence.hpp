#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string_view>

#include "lhv/errors.hpp"
#include "lhv/measurement.hpp"
#include "lhv/rng.hpp"

namespace lhv {

enum class CoincidenceMode {
    None,           ///< every resolved pair is counted
    IdealThreshold, ///< counted iff max(tau_a, tau_b) <= T
    Spatial,        ///< counted iff the objects land in mirror detector bins
};

constexpr std::string_view to_string(CoincidenceMode m) noexcept
{
    switch (m) {
    case CoincidenceMode::None:
        return "none";
    case CoincidenceMode::IdealThreshold:
        return "ideal";
    case CoincidenceMode::Spatial:
        break;
    }
    return "spatial";
}

/// Coincidence rule and detector geometry (arbitrary length and time units).
struct CoincidenceConfig {
    CoincidenceMode mode = CoincidenceMode::IdealThreshold;
    double T = 0.133;   ///< closing time
    double W = 1.0;     ///< apparatus length along y
    double L = 10.0;    ///< source-to-detector distance
    double v = 1.0;     ///< y-speed inside the apparatus
    double v0 = 1.0;    ///< y-speed outside the apparatus
    double dy = 1e-3;   ///< position bin width

    friend bool operator==(const CoincidenceConfig &, const CoincidenceConfig &) = default;

    void validate() const
    {
        if (!(std::isfinite(T) && std::isfinite(W) && std::isfinite(L) && std::isfinite(v) &&
              std::isfinite(v0) && std::isfinite(dy)))
            throw ConstraintViolation("coincidence parameters must be finite");
        if (mode != CoincidenceMode::None && !(T > 0.0))
            throw ConstraintViolation("coincidence.closing_time must be positive");
        if (!(W > 0.0 && W < L))
            throw ConstraintViolation("coincidence geometry requires 0 < W < L");
        if (!(v > 0.0 && v0 > 0.0))
            throw ConstraintViolation("coincidence.v and coincidence.v0 must be positive");
        if (mode == CoincidenceMode::Spatial && !(dy > 0.0))
            throw ConstraintViolation("coincidence.dy must be positive in spatial mode");
    }
};

/// Limiting form of the coincidence probability: theta(T - max(tau_a, tau_b)).
constexpr bool coincidence_ideal(double tau_a, double tau_b, double T) noexcept
{
    return std::max(tau_a, tau_b) <= T;
}

/// Time at which an object leaves its apparatus. Objects that finished within
/// the closing time leave at W/v; slower ones leave at a uniformly random time
/// in [W/v, W/v + tau].
inline double escape_time(double tau, const CoincidenceConfig &cfg, Stream &rng)
{
    const double base = cfg.W / cfg.v;
    if (tau <= cfg.T)
        return base;
    return base + tau * rng.uniform01();
}

namespace detail {

// Distance behind the detector at the earliest arrival time t0, as a bin index
// counted from the detector. A delay dt in leaving the apparatus puts the
// object v0 * dt behind.
inline long long detector_bin(double tau, const CoincidenceConfig &cfg, Stream &rng)
{
    const double lag = cfg.v0 * (escape_time(tau, cfg, rng) - cfg.W / cfg.v);
    return static_cast<long long>(std::floor(lag / cfg.dy));
}

} // namespace detail

/// Position-resolved coincidence: at time t0 each object is placed on the
/// y-axis (A near -L, B near +L) and the pair counts iff -y_A and y_B fall
/// in the same bin of width dy. Bins are anchored at the detectors.
inline bool coincidence_spatial(double tau_a, double tau_b, const CoincidenceConfig &cfg, Stream &rng)
{
    const long long bin_a = detail::detector_bin(tau_a, cfg, rng);
    const long long bin_b = detail::detector_bin(tau_b, cfg, rng);
    return bin_a == bin_b;
}

/// Outcome of one pair under a coincidence rule.
struct PairRecord {
    MeasurementRecord rec_a;
    MeasurementRecord rec_b;
    bool accepted = false;
    double product = 0.0; ///< outcome_a * outcome_b, 0 unless both resolved
};

/// Applies the coincidence rule to one pair. Spatial mode draws escape times
/// from `seed` in the coincidence domain, sub-stream `sub`.
inline PairRecord evaluate_pair(const MeasurementRecord &a, const MeasurementRecord &b,
                                const CoincidenceConfig &cfg, double j, RngSeed seed = {}, std::uint64_t sub = 0)
{
    PairRecord pr{a, b, false, 0.0};
    if (!a.resolved() || !b.resolved())
        return pr;
    pr.product = a.value(j) * b.value(j);
    switch (cfg.mode) {
    case CoincidenceMode::None:
        pr.accepted = true;
        break;
    case CoincidenceMode::IdealThreshold:
        pr.accepted = coincidence_ideal(a.tau, b.tau, cfg.T);
        break;
    case CoincidenceMode::Spatial: {
        Stream rng(seed, StreamDomain::Coincidence, sub);
        pr.accepted = coincidence_spatial(a.tau, b.tau, cfg, rng);
        break;
    }
    }
    return pr;
}

} // namespace lhv
