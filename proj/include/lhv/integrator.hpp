#pragma once

namespace lhv {

/// One classical fourth-order Runge-Kutta step of size h for x' = f(x).
///
/// `State` needs `State + State` and `double * State`; `f` maps a state to its
/// derivative in the same representation.
template <class State, class Rhs>
State rk4_step(const State &x, double h, Rhs &&f)
{
    const State k1 = f(x);
    const State k2 = f(x + (0.5 * h) * k1);
    const State k3 = f(x + (0.5 * h) * k2);
    const State k4 = f(x + h * k3);
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace lhv
