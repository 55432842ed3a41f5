#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "lhv/coincidence.hpp"
#include "lhv/ensembles.hpp"
#include "lhv/errors.hpp"
#include "lhv/measurement.hpp"
#include "lhv/parallel.hpp"
#include "lhv/rng.hpp"

namespace lhv {

// ---------------------------------------------------------------------------
// Quantum reference curves

struct QuantumReference {
    double p_plus;  ///< probability of +j for S . e_z in the theta eigen-ensemble
    double E_raw;   ///< singlet correlation -j^2 cos(theta)
    double E_norm;  ///< -cos(theta)
};

inline QuantumReference quantum_reference(double theta, double j = 0.5) noexcept
{
    const double c = std::cos(theta);
    const double half = std::cos(0.5 * theta);
    return {half * half, -j * j * c, -c};
}

/// Quantum value of the Bell combination, |-3 cos(phi) + cos(3 phi)|.
inline double bell_F_quantum(double phi) noexcept
{
    return std::abs(-3.0 * std::cos(phi) + std::cos(3.0 * phi));
}

// ---------------------------------------------------------------------------
// Single-object experiment

struct SingleSpinPoint {
    double theta = 0.0;
    double p_plus = 0.0;          ///< fraction of +j among resolved outcomes
    std::size_t n_plus = 0;
    std::size_t n_resolved = 0;
    std::size_t n_unresolved = 0;
    std::uint64_t degenerate_beta_evals = 0;
};

/// For each theta, draws n states from the theta eigen-ensemble and measures
/// S . e_z. Sample i of every grid point uses stream (master_seed, i), so the
/// points share azimuths.
inline std::vector<SingleSpinPoint> run_single_spin(std::span<const double> theta_grid, std::size_t n,
                                                    const ModelParams &params, std::uint64_t master_seed,
                                                    const ExecutionPolicy &exec = {})
{
    params.validate();
    if (n < 1)
        throw ConstraintViolation("run_single_spin: n must be at least 1");

    const std::size_t m = theta_grid.size();
    std::vector<Outcome> outcomes(m * n);
    std::vector<std::uint32_t> degenerate(m * n);
    parallel_for(m * n, exec, [&](std::size_t idx) {
        const std::size_t k = idx / n;
        const std::size_t i = idx % n;
        const SpinState s0 = sample_eigen(theta_grid[k], RngSeed{master_seed, i}, params);
        const MeasurementRecord rec = integrate_measure(s0, params);
        outcomes[idx] = rec.outcome;
        degenerate[idx] = rec.degenerate_beta_evals;
    });

    std::vector<SingleSpinPoint> out(m);
    for (std::size_t k = 0; k < m; ++k) {
        SingleSpinPoint &pt = out[k];
        pt.theta = theta_grid[k];
        for (std::size_t i = 0; i < n; ++i) {
            const Outcome o = outcomes[k * n + i];
            pt.n_plus += o == Outcome::PlusJ;
            pt.n_resolved += o != Outcome::Unresolved;
            pt.degenerate_beta_evals += degenerate[k * n + i];
        }
        pt.n_unresolved = n - pt.n_resolved;
        pt.p_plus = pt.n_resolved == 0 ? std::numeric_limits<double>::quiet_NaN()
                                       : static_cast<double>(pt.n_plus) / static_cast<double>(pt.n_resolved);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pair experiment

/// Default measurement procedure: independent integration along an axis.
struct AlongAxis {
    MeasurementRecord operator()(const SpinState &s, double theta, const ModelParams &p) const
    {
        return measure_along(s, theta, p);
    }
};

/// Finishing records of n singlet pairs: object A measured along angle 0 and
/// object B along every grid angle. Pair i is drawn from stream
/// (master_seed, i) and is the same for every grid point.
struct PairTrajectories {
    std::vector<double> grid;
    std::size_t n = 0;
    double j = 0.5;
    std::vector<MeasurementRecord> a;              ///< [pair]
    std::vector<std::vector<MeasurementRecord>> b; ///< [grid point][pair]
};

/// Integrates every trajectory of the pair experiment. Each object is measured
/// by its own call of `measurer`, which sees only that object's state and axis.
template <class Measurer = AlongAxis>
PairTrajectories simulate_pairs(std::span<const double> theta_grid, std::size_t n, const ModelParams &params,
                                std::uint64_t master_seed, const ExecutionPolicy &exec = {},
                                SphereMeasure measure = SphereMeasure::Uniform, const Measurer &measurer = {})
{
    params.validate();
    if (n < 1)
        throw ConstraintViolation("simulate_pairs: n must be at least 1");

    PairTrajectories out;
    out.grid.assign(theta_grid.begin(), theta_grid.end());
    out.n = n;
    out.j = params.j;
    out.a.resize(n);
    out.b.assign(theta_grid.size(), std::vector<MeasurementRecord>(n));

    parallel_for(n, exec, [&](std::size_t i) {
        const SingletPair pair = sample_singlet(RngSeed{master_seed, i}, params, measure);
        out.a[i] = measurer(pair.a(), 0.0, params);
        for (std::size_t k = 0; k < theta_grid.size(); ++k)
            out.b[k][i] = measurer(pair.b(), theta_grid[k], params);
    });
    return out;
}

/// Correlation of S_A . e_z and S_B . rotate_y(e_z, theta).
struct CorrelationPoint {
    double theta = 0.0;
    double E_raw = 0.0;           ///< mean outcome product, spin^2 units
    double E_norm = 0.0;          ///< E_raw / j^2
    std::size_t n_accepted = 0;
    std::size_t n_total = 0;      ///< pairs sampled
    std::size_t n_unresolved = 0; ///< pairs with at least one unresolved member
    std::size_t n_positive = 0;   ///< accepted pairs with product +j^2
    std::uint64_t degenerate_beta_evals = 0;

    /// Standard error of E_norm for a mean of +-1 products.
    [[nodiscard]] double stderr_norm() const noexcept
    {
        if (n_accepted == 0)
            return std::numeric_limits<double>::quiet_NaN();
        return std::sqrt(std::max(0.0, 1.0 - E_norm * E_norm) / static_cast<double>(n_accepted));
    }
};

/// Applies a coincidence rule to simulated pairs. Spatial mode draws escape
/// times from stream (master_seed, i) in the coincidence domain with the grid
/// index as sub-stream. Products are accumulated as integer counts, so the
/// result is independent of evaluation order.
inline std::vector<CorrelationPoint> correlate(const PairTrajectories &traj, const CoincidenceConfig &cc,
                                               std::uint64_t master_seed)
{
    cc.validate();
    std::vector<CorrelationPoint> out(traj.grid.size());
    for (std::size_t k = 0; k < traj.grid.size(); ++k) {
        CorrelationPoint &pt = out[k];
        pt.theta = traj.grid[k];
        pt.n_total = traj.n;
        std::size_t negative = 0;
        for (std::size_t i = 0; i < traj.n; ++i) {
            const MeasurementRecord &ra = traj.a[i];
            const MeasurementRecord &rb = traj.b[k][i];
            pt.degenerate_beta_evals += ra.degenerate_beta_evals + rb.degenerate_beta_evals;
            const PairRecord pr = evaluate_pair(ra, rb, cc, traj.j, RngSeed{master_seed, i}, k);
            if (!ra.resolved() || !rb.resolved())
                ++pt.n_unresolved;
            if (!pr.accepted)
                continue;
            ++pt.n_accepted;
            if (pr.product > 0.0)
                ++pt.n_positive;
            else
                ++negative;
        }
        if (pt.n_accepted == 0) {
            pt.E_norm = pt.E_raw = std::numeric_limits<double>::quiet_NaN();
        } else {
            pt.E_norm = (static_cast<double>(pt.n_positive) - static_cast<double>(negative)) /
                        static_cast<double>(pt.n_accepted);
            pt.E_raw = traj.j * traj.j * pt.E_norm;
        }
    }
    return out;
}

/// Samples n singlet pairs per grid angle, measures A along 0 and B along
/// theta, and averages outcome products over pairs accepted by `cc`.
inline std::vector<CorrelationPoint> run_pair(std::span<const double> theta_grid, std::size_t n,
                                              const ModelParams &params, const CoincidenceConfig &cc,
                                              std::uint64_t master_seed, const ExecutionPolicy &exec = {},
                                              SphereMeasure measure = SphereMeasure::Uniform)
{
    cc.validate();
    return correlate(simulate_pairs(theta_grid, n, params, master_seed, exec, measure), cc, master_seed);
}

// ---------------------------------------------------------------------------
// Bell quantity

inline constexpr std::string_view bell_convention =
    "F(phi) = |3 E_norm(phi) - E_norm(3 phi)|, settings a=0, b=phi, a'=2phi, b'=3phi in the x-z plane";

/// Equal-spacing CHSH combination built from a correlation function of the
/// relative angle. Its local-realist bound is 2.
template <class CorrelationFn>
double bell_F(CorrelationFn &&e_norm_at, double phi)
{
    return std::abs(3.0 * e_norm_at(phi) - e_norm_at(3.0 * phi));
}

/// Correlation values at simulated angles, callable as a function of angle.
class CorrelationTable {
public:
    explicit CorrelationTable(std::vector<CorrelationPoint> points) : points_(std::move(points)) {}

    [[nodiscard]] const CorrelationPoint &at(double theta) const
    {
        for (const auto &p : points_)
            if (std::abs(p.theta - theta) <= 1e-12 * std::max(1.0, std::abs(theta)))
                return p;
        throw MissingGridPoint("no correlation simulated at angle " + std::to_string(theta));
    }

    double operator()(double theta) const { return at(theta).E_norm; }

    [[nodiscard]] const std::vector<CorrelationPoint> &points() const noexcept { return points_; }

private:
    std::vector<CorrelationPoint> points_;
};

/// Angles needed to evaluate F on a phi grid: the grid followed by every 3 phi
/// not already present.
inline std::vector<double> bell_angles(std::span<const double> phi_grid)
{
    std::vector<double> angles(phi_grid.begin(), phi_grid.end());
    auto present = [&](double a) {
        for (double x : angles)
            if (std::abs(x - a) <= 1e-12 * std::max(1.0, std::abs(a)))
                return true;
        return false;
    };
    for (double phi : phi_grid)
        if (!present(3.0 * phi))
            angles.push_back(3.0 * phi);
    return angles;
}

struct BellPoint {
    double phi = 0.0;
    double F = 0.0;
    double F_stderr = 0.0;
    double F_qm = 0.0;
    CorrelationPoint at_phi;
    CorrelationPoint at_3phi;
};

inline std::vector<BellPoint> bell_from_table(std::span<const double> phi_grid, const CorrelationTable &table)
{
    std::vector<BellPoint> out;
    out.reserve(phi_grid.size());
    for (double phi : phi_grid) {
        BellPoint bp;
        bp.phi = phi;
        bp.at_phi = table.at(phi);
        bp.at_3phi = table.at(3.0 * phi);
        bp.F = bell_F(table, phi);
        const double s1 = bp.at_phi.stderr_norm();
        const double s3 = bp.at_3phi.stderr_norm();
        // phi = 0 reuses one estimate: F = 2|E(0)|.
        bp.F_stderr = &table.at(phi) == &table.at(3.0 * phi) ? 2.0 * s1 : std::sqrt(9.0 * s1 * s1 + s3 * s3);
        bp.F_qm = bell_F_quantum(phi);
        out.push_back(bp);
    }
    return out;
}

/// Runs the pair experiment on the angles required by F and evaluates F on
/// the phi grid.
inline std::vector<BellPoint> run_bell(std::span<const double> phi_grid, std::size_t n, const ModelParams &params,
                                       const CoincidenceConfig &cc, std::uint64_t master_seed,
                                       const ExecutionPolicy &exec = {},
                                       SphereMeasure measure = SphereMeasure::Uniform)
{
    const std::vector<double> angles = bell_angles(phi_grid);
    CorrelationTable table(run_pair(angles, n, params, cc, master_seed, exec, measure));
    return bell_from_table(phi_grid, table);
}

} // namespace lhv
