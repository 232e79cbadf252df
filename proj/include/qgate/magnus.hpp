#pragma once

#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include "qgate/envelope.hpp"
#include "qgate/errors.hpp"
#include "qgate/pulse.hpp"

namespace qgate {

// Leading rotating-frame expansion coefficients of the pulse-window propagator
// exponent U = exp(-i (ax*sx + az*sz)/2): a1x and a3x drive the x rotation,
// a2z the parasitic z rotation. a1x is linear, a2z quadratic, and a3x cubic in
// the pulse area Omega*tau_d. Built from nested integrals over the right half
// window; evenness of the pulse supplies the left half.
template <typename Scalar = double>
struct MagnusCoefficients {
    Scalar a1x = 0;
    Scalar a2z = 0;
    Scalar a3x = 0;
};

// Parameters solved from the truncated expansion: pulse area and carrier
// phase, plus the per-unit-area coefficients at the chosen carrier root.
template <typename Scalar = double>
struct MagnusSolution {
    Scalar Omega_tau_d = 0;
    Scalar omega_tau_d = 0;
    MagnusCoefficients<Scalar> unit;
};

namespace detail {

// Cumulative integral of uniformly sampled y with spacing h: each interval
// integrates the quadratic through its neighboring sample triple (the first
// interval borrows the triple that starts the grid). Fourth-order accurate.
template <typename Scalar>
std::vector<Scalar> cumulative_simpson(const std::vector<Scalar>& y, Scalar h) {
    const std::size_t n = y.size();
    std::vector<Scalar> c(n, Scalar(0));
    if (n < 2) return c;
    if (n == 2) {
        c[1] = h * (y[0] + y[1]) / 2;
        return c;
    }
    c[1] = h / 12 * (5 * y[0] + 8 * y[1] - y[2]);
    for (std::size_t i = 1; i + 1 < n; ++i)
        c[i + 1] = c[i] + h / 12 * (-y[i - 1] + 8 * y[i] + 5 * y[i + 1]);
    return c;
}

// Coefficients per unit pulse area on an N-interval grid over [0, Td/2].
// The shape is f(u) = f0(u) cos(a u) and the frame phase advances as
// 2*pi*alpha*u, with alpha = tau_d/T0. Nested cumulative quadrature:
// each level integrates the previous one on the shared grid, O(N) per level.
template <typename Scalar>
MagnusCoefficients<Scalar> magnus_unit(EnvelopeKind kind, Scalar window_ratio, Scalar a,
                                       Scalar alpha, int intervals) {
    const Scalar half = window_ratio / 2;
    const Scalar h = half / Scalar(intervals);
    const std::size_t n = static_cast<std::size_t>(intervals) + 1;
    std::vector<Scalar> fc(n), fs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Scalar u = h * Scalar(i);
        const Scalar f = envelope_value(kind, u, window_ratio) * std::cos(a * u);
        const Scalar frame = two_pi_v<Scalar> * alpha * u;
        fc[i] = Scalar(2) * f * std::cos(frame);
        fs[i] = Scalar(-2) * f * std::sin(frame);
    }
    const std::vector<Scalar> th1 = cumulative_simpson(fc, h);
    std::vector<Scalar> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = fs[i] * th1[i];
    const std::vector<Scalar> th2 = cumulative_simpson(g, h);
    for (std::size_t i = 0; i < n; ++i) g[i] = fs[i] * th2[i];
    const std::vector<Scalar> th3 = cumulative_simpson(g, h);
    MagnusCoefficients<Scalar> out;
    out.a1x = Scalar(2) * th1.back();
    out.a2z = Scalar(-2) * th2.back();
    out.a3x = Scalar(-2) * th3.back();
    return out;
}

} // namespace detail

// Grid-converged per-unit-area coefficients: the interval count doubles until
// every coefficient moves by less than rel_tol*|value| + abs_tol.
template <typename Scalar>
MagnusCoefficients<Scalar> magnus_unit_coefficients(EnvelopeKind kind, Scalar window_ratio,
                                                    Scalar a, Scalar alpha,
                                                    Scalar rel_tol = Scalar(1e-9),
                                                    Scalar abs_tol = Scalar(1e-12),
                                                    int start_intervals = 2048) {
    MagnusCoefficients<Scalar> prev = detail::magnus_unit(kind, window_ratio, a, alpha, start_intervals);
    for (int n = 2 * start_intervals; n <= (1 << 21); n *= 2) {
        const MagnusCoefficients<Scalar> cur = detail::magnus_unit(kind, window_ratio, a, alpha, n);
        auto settled = [&](Scalar p, Scalar c) {
            return std::abs(c - p) <= rel_tol * std::abs(c) + abs_tol;
        };
        if (settled(prev.a1x, cur.a1x) && settled(prev.a2z, cur.a2z) && settled(prev.a3x, cur.a3x))
            return cur;
        prev = cur;
    }
    throw IntegrationError("magnus: nested quadrature failed to converge");
}

// Coefficients of a concrete pulse, scaled by its area (W, W^2, W^3).
template <typename Scalar>
MagnusCoefficients<Scalar> magnus_coefficients(const PulseSpec<Scalar>& spec) {
    validate(spec);
    if (!spec.is_even())
        throw SymmetryError("magnus_coefficients: pulse must be even (zero carrier-envelope phase)");
    const Scalar w = spec.Omega_tau_d();
    if (w == Scalar(0)) return {};
    const MagnusCoefficients<Scalar> unit =
        magnus_unit_coefficients(spec.envelope, spec.window_ratio, spec.omega_tau_d(), spec.tau_d);
    return {unit.a1x * w, unit.a2z * w * w, unit.a3x * w * w * w};
}

namespace detail {

// Smallest positive carrier phase nulling the parasitic z coefficient,
// a2z(a) = 0, with the same bracketing/refinement scheme as the analytic
// seeder. The guard quantity is a1x — the denominator of the area solve —
// which reduces to twice the signed pulse area in the short-pulse limit.
template <typename Scalar>
MagnusSolution<Scalar> magnus_carrier_root(EnvelopeKind kind, Scalar window_ratio, Scalar alpha,
                                           Scalar scan_max) {
    const Scalar lo0 = Scalar(0.1);
    const Scalar step = Scalar(0.02);
    const Scalar guard = Scalar(1e-6);
    const Scalar tol = Scalar(1e-12);
    const int scan_n = 2048, refine_n = 8192;

    auto coarse = [&](Scalar a) { return magnus_unit(kind, window_ratio, a, alpha, scan_n); };
    auto fine = [&](Scalar a) { return magnus_unit(kind, window_ratio, a, alpha, refine_n); };

    MagnusCoefficients<Scalar> prev = coarse(lo0);
    Scalar a_prev = lo0;
    int skipped = 0;
    for (Scalar a = lo0 + step; a_prev < scan_max; a += step) {
        if (a > scan_max) a = scan_max;
        const MagnusCoefficients<Scalar> cur = coarse(a);
        if (prev.a2z * cur.a2z <= Scalar(0) && prev.a2z != Scalar(0)) {
            if (!(std::abs(prev.a1x) > guard && std::abs(cur.a1x) > guard)) {
                ++skipped;
            } else {
                Scalar lo = a_prev, hi = a;
                Scalar f_lo = fine(lo).a2z;
                const Scalar f_hi = fine(hi).a2z;
                if (f_lo * f_hi <= Scalar(0) && f_lo != Scalar(0)) {
                    while (hi - lo > tol) {
                        const Scalar mid = (lo + hi) / 2;
                        const Scalar f_mid = fine(mid).a2z;
                        if (f_lo * f_mid <= Scalar(0)) {
                            hi = mid;
                        } else {
                            lo = mid;
                            f_lo = f_mid;
                        }
                    }
                    MagnusSolution<Scalar> out;
                    out.omega_tau_d = (lo + hi) / 2;
                    out.unit = magnus_unit_coefficients(kind, window_ratio, out.omega_tau_d, alpha);
                    return out;
                }
            }
        }
        a_prev = a;
        prev = cur;
    }
    std::ostringstream msg;
    msg << "magnus: no carrier-phase root with |a1x| > " << guard << " in omega*tau_d <= "
        << scan_max << " (" << skipped << " vanishing-a1x candidates skipped)";
    throw SolverError(msg.str());
}

} // namespace detail

// Second-order solve: null a2z, then scale the area so a1x alone meets the
// target angle. tau_d in units of T0; scan_max <= 0 picks the default bound.
template <typename Scalar>
MagnusSolution<Scalar> solve_second_order(EnvelopeKind kind, Scalar window_ratio, Scalar theta_g,
                                          Scalar tau_d, Scalar scan_max = Scalar(0)) {
    const Scalar mag = std::abs(theta_g);
    if (!(mag > Scalar(0)) || !(mag <= two_pi_v<Scalar>))
        throw std::invalid_argument("solve_second_order: gate angle magnitude must lie in (0, 2*pi]");
    if (!(tau_d > Scalar(0))) throw std::invalid_argument("solve_second_order: tau_d must be positive");
    if (scan_max <= Scalar(0))
        scan_max = std::max(Scalar(8) * pi_v<Scalar>, two_pi_v<Scalar> * tau_d * Scalar(1.6));
    MagnusSolution<Scalar> out = detail::magnus_carrier_root(kind, window_ratio, tau_d, scan_max);
    out.Omega_tau_d = theta_g / out.unit.a1x;
    return out;
}

// Third-order solve: same carrier root, then the smallest positive area
// solving a1x*W + a3x*W^3 = theta_g. With a negative cubic coefficient the
// root must sit on the rising segment before the turning point; past it the
// truncated expansion cannot reach the target angle.
template <typename Scalar>
MagnusSolution<Scalar> solve_third_order(EnvelopeKind kind, Scalar window_ratio, Scalar theta_g,
                                         Scalar tau_d, Scalar scan_max = Scalar(0)) {
    const Scalar mag = std::abs(theta_g);
    if (!(mag > Scalar(0)) || !(mag <= two_pi_v<Scalar>))
        throw std::invalid_argument("solve_third_order: gate angle magnitude must lie in (0, 2*pi]");
    if (!(tau_d > Scalar(0))) throw std::invalid_argument("solve_third_order: tau_d must be positive");
    if (scan_max <= Scalar(0))
        scan_max = std::max(Scalar(8) * pi_v<Scalar>, two_pi_v<Scalar> * tau_d * Scalar(1.6));
    MagnusSolution<Scalar> out = detail::magnus_carrier_root(kind, window_ratio, tau_d, scan_max);

    const Scalar sign = theta_g < Scalar(0) ? Scalar(-1) : Scalar(1);
    const Scalar a1 = out.unit.a1x, a3 = out.unit.a3x;
    auto residual = [&](Scalar w) { return a3 * w * w * w + a1 * w - mag; };

    Scalar lo = 0, hi = 0;
    if (a3 < Scalar(0)) {
        if (a1 <= Scalar(0)) throw SolverError("magnus: cubic area equation has no positive root");
        const Scalar turn = std::sqrt(-a1 / (Scalar(3) * a3));
        if (residual(turn) < Scalar(0))
            throw SolverError("magnus: target angle exceeds the reach of the truncated expansion");
        hi = turn;
    } else {
        hi = Scalar(1);
        while (residual(hi) < Scalar(0)) {
            hi *= 2;
            if (hi > Scalar(1e6)) throw SolverError("magnus: cubic area equation has no positive root");
        }
    }
    Scalar f_lo = residual(lo);
    for (int i = 0; i < 200 && hi - lo > Scalar(1e-15) * std::max(Scalar(1), hi); ++i) {
        const Scalar mid = (lo + hi) / 2;
        const Scalar f_mid = residual(mid);
        if (f_lo * f_mid <= Scalar(0)) {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    out.Omega_tau_d = sign * (lo + hi) / 2;
    return out;
}

} // namespace qgate
