#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "qgate/errors.hpp"
#include "qgate/pulse.hpp"
#include "qgate/su2.hpp"

namespace qgate {

template <typename Scalar = double>
struct PropagationResult {
    UnitarySU2<Scalar> u_rot;     // U_rot(T/2, -T/2; 0)
    Scalar drift = Scalar(0);     // max |quaternion norm - 1| seen before renormalization
    std::int64_t steps = 0;
};

namespace detail {

// Fixed integrator step: h <= min(tau_d, 2*pi/max(omega, omega0, Omega)) / 256.
// The divisor is chosen so halving the step moves the gate fidelity by well
// under 1e-12 even at the multicycle end of the sweeps.
template <typename Scalar>
Scalar max_step(const PulseSpec<Scalar>& spec, Scalar refine) {
    const Scalar fastest = std::max({spec.omega_abs(), spec.omega0, spec.Omega_abs()});
    const Scalar h = std::min(spec.tau_d_abs(), two_pi_v<Scalar> / fastest) / (Scalar(256) * refine);
    if (!(h > Scalar(0)) || !std::isfinite(h))
        throw IntegrationError("propagate: step size underflow");
    return h;
}

// One RK4 pass of dq/dt = A(t) q (Hamilton product, A purely imaginary) over
// [t0, t1], renormalizing the quaternion after every step. The rotating-frame
// generator of U_rot is -i H_rot <-> A(t) = (0, W(t) cos(w0 t), -W(t) sin(w0 t), 0)
// with W(t) = Omega * f(t - t_center).
template <typename Scalar>
void rk4_span(const PulseSpec<Scalar>& spec, Scalar t_center, Scalar t0, Scalar t1, Scalar h_max,
              Eigen::Matrix<Scalar, 4, 1>& q, Scalar& drift, std::int64_t& steps_out) {
    using V4 = Eigen::Matrix<Scalar, 4, 1>;
    const Scalar span = t1 - t0;
    if (span == Scalar(0)) return;
    const Scalar nsteps_real = std::ceil(std::abs(span) / h_max);
    if (!(nsteps_real < Scalar(1e9)))
        throw IntegrationError("propagate: required step count exceeds stiffness guard");
    const std::int64_t n = std::max<std::int64_t>(1, static_cast<std::int64_t>(nsteps_real));
    const Scalar h = span / Scalar(n);

    auto deriv = [&](Scalar t, const V4& v) -> V4 {
        const Scalar w = spec.Omega_abs() * spec.shape_abs(t - t_center);
        const Scalar c = std::cos(spec.omega0 * t);
        const Scalar s = std::sin(spec.omega0 * t);
        V4 a;
        a << Scalar(0), w * c, -w * s, Scalar(0);
        return UnitarySU2<Scalar>::hamilton(a, v);
    };

    for (std::int64_t i = 0; i < n; ++i) {
        const Scalar t = t0 + h * Scalar(i);
        const V4 k1 = deriv(t, q);
        const V4 k2 = deriv(t + h / 2, V4(q + (h / 2) * k1));
        const V4 k3 = deriv(t + h / 2, V4(q + (h / 2) * k2));
        const V4 k4 = deriv(t + h, V4(q + h * k3));
        q += (h / 6) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
        const Scalar norm = q.norm();
        drift = std::max(drift, std::abs(norm - Scalar(1)));
        q /= norm;
    }
    steps_out += n;
}

// Propagate U_rot across a window centered at t_center. The window is always
// split at the envelope center: that keeps kinked envelopes (triangular) off
// the interior of RK4 stages and makes the step grid time-symmetric, which
// preserves the transpose symmetry of even-pulse propagators to roundoff.
template <typename Scalar>
PropagationResult<Scalar> propagate_window(const PulseSpec<Scalar>& spec, Scalar t_center,
                                           Scalar refine) {
    validate(spec);
    const Scalar h = max_step(spec, refine);
    const Scalar half = spec.window_abs() / 2;
    Eigen::Matrix<Scalar, 4, 1> q;
    q << Scalar(1), Scalar(0), Scalar(0), Scalar(0);
    PropagationResult<Scalar> result;
    rk4_span(spec, t_center, t_center - half, t_center, h, q, result.drift, result.steps);
    rk4_span(spec, t_center, t_center, t_center + half, h, q, result.drift, result.steps);
    result.u_rot = UnitarySU2<Scalar>(q);
    return result;
}

} // namespace detail

// Rotating-frame propagator over the pulse window, U_rot(T/2, -T/2; 0).
// `refine` multiplies the step count (2 halves the step, for convergence
// checks); the default obeys the fixed maximum-step policy.
template <typename Scalar>
PropagationResult<Scalar> propagate_rot(const PulseSpec<Scalar>& spec, Scalar refine = Scalar(1)) {
    return detail::propagate_window(spec, Scalar(0), refine);
}

// Same pulse translated to be centered at t0: U_rot(t0 + T/2, t0 - T/2; 0).
template <typename Scalar>
UnitarySU2<Scalar> propagate_shifted(const PulseSpec<Scalar>& spec, Scalar t0,
                                     Scalar refine = Scalar(1)) {
    return detail::propagate_window(spec, t0, refine).u_rot;
}

// Lab-frame Bloch trajectory <sigma>(t) of an initial state on a uniform
// sample grid over [-T/2, T/2]. Sample times are integration-segment
// boundaries, so output resolution never degrades integration accuracy.
template <typename Scalar>
std::vector<std::pair<Scalar, Eigen::Matrix<Scalar, 3, 1>>> propagate_lab(
    const PulseSpec<Scalar>& spec, const Spinor<Scalar>& initial, int samples,
    Scalar refine = Scalar(1)) {
    validate(spec);
    if (samples < 2) throw std::invalid_argument("propagate_lab: need at least two samples");
    const Scalar norm0 = initial.norm();
    if (!(std::abs(norm0 - Scalar(1)) <= Scalar(1e-9)))
        throw std::invalid_argument("propagate_lab: initial state must be a unit spinor");

    const Scalar h = detail::max_step(spec, refine);
    const Scalar half = spec.window_abs() / 2;

    // Sample times plus the envelope center as integration boundaries.
    std::vector<Scalar> times(samples);
    for (int i = 0; i < samples; ++i)
        times[i] = -half + (Scalar(2) * half) * Scalar(i) / Scalar(samples - 1);
    std::vector<Scalar> bounds = times;
    bounds.push_back(Scalar(0));
    std::sort(bounds.begin(), bounds.end());
    bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());

    // U0(0, -T/2) brings the initial lab state into the rotating frame anchor.
    const UnitarySU2<Scalar> enter = UnitarySU2<Scalar>::rotation_z(spec.omega0 * half);

    Eigen::Matrix<Scalar, 4, 1> q;
    q << Scalar(1), Scalar(0), Scalar(0), Scalar(0);
    Scalar drift = 0;
    std::int64_t steps = 0;

    std::vector<std::pair<Scalar, Eigen::Matrix<Scalar, 3, 1>>> out;
    out.reserve(samples);
    std::size_t next_sample = 0;
    for (std::size_t b = 0; b < bounds.size(); ++b) {
        if (b > 0)
            detail::rk4_span(spec, Scalar(0), bounds[b - 1], bounds[b], h, q, drift, steps);
        if (next_sample < times.size() && bounds[b] == times[next_sample]) {
            const Scalar t = times[next_sample];
            const UnitarySU2<Scalar> u_rot(q);
            const UnitarySU2<Scalar> leave = UnitarySU2<Scalar>::rotation_z(spec.omega0 * t);
            const Spinor<Scalar> psi = (leave * u_rot * enter) * initial;
            out.emplace_back(t, bloch_vector(psi));
            ++next_sample;
        }
    }
    return out;
}

} // namespace qgate
