#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qgate/envelope.hpp"
#include "qgate/errors.hpp"
#include "qgate/quadrature.hpp"
#include "qgate/su2.hpp"

namespace qgate {

// Full pulse parameterization f(t) = f0(t/tau_d) * cos(omega*t + phi_cep).
//
// Units: the qubit frequency omega0 sets the clock (omega0 = 1 by default, so
// one qubit period T0 = 2*pi). Durations are stored in units of T0 and
// frequencies in units of omega0; omega0 itself is kept as a field only so
// dimensional-consistency checks can rescale the clock.
template <typename Scalar = double>
struct PulseSpec {
    EnvelopeKind envelope = EnvelopeKind::gaussian;
    Scalar tau_d = Scalar(0.1);       // pulse duration, units of T0
    Scalar window_ratio = Scalar(5);  // T_d = T / tau_d
    Scalar Omega = Scalar(0);         // driving strength, units of omega0
    Scalar omega = Scalar(1);         // carrier frequency, units of omega0
    Scalar phi_cep = Scalar(0);       // carrier-envelope phase, radians
    Scalar omega0 = Scalar(1);        // qubit frequency, absolute rad/time

    Scalar qubit_period() const { return two_pi_v<Scalar> / omega0; }
    Scalar tau_d_abs() const { return tau_d * qubit_period(); }
    Scalar window_abs() const { return window_ratio * tau_d_abs(); }
    Scalar Omega_abs() const { return Omega * omega0; }
    Scalar omega_abs() const { return omega * omega0; }
    Scalar Omega_tau_d() const { return Omega_abs() * tau_d_abs(); } // effective pulse area, radians
    Scalar omega_tau_d() const { return omega_abs() * tau_d_abs(); } // carrier phase across tau_d, radians

    bool is_even() const { return phi_cep == Scalar(0); }

    // Shape function f(u) at normalized time u = t / tau_d.
    Scalar shape(Scalar u) const {
        return envelope_value(envelope, u, window_ratio) * std::cos(omega_tau_d() * u + phi_cep);
    }

    // f at absolute time, with the envelope centered at t = 0.
    Scalar shape_abs(Scalar t) const { return shape(t / tau_d_abs()); }
};

template <typename Scalar>
void validate(const PulseSpec<Scalar>& spec) {
    if (!(spec.tau_d > Scalar(0))) throw std::invalid_argument("PulseSpec: tau_d must be positive");
    if (!(spec.window_ratio > Scalar(0))) throw std::invalid_argument("PulseSpec: window ratio must be positive");
    if (!(spec.Omega >= Scalar(0))) throw std::invalid_argument("PulseSpec: Omega must be nonnegative");
    if (!(spec.omega >= Scalar(0))) throw std::invalid_argument("PulseSpec: omega must be nonnegative");
    if (!(spec.omega0 > Scalar(0))) throw std::invalid_argument("PulseSpec: omega0 must be positive");
}

// s0 = integral of the bare envelope over its window, in normalized time.
template <typename Scalar>
Scalar envelope_area(EnvelopeKind kind, Scalar window_ratio) {
    if (!(window_ratio > Scalar(0))) throw std::invalid_argument("envelope_area: window ratio must be positive");
    return integrate([kind, window_ratio](Scalar u) { return envelope_value(kind, u, window_ratio); },
                     -window_ratio / 2, window_ratio / 2);
}

// s = integral of the full shape function f(u) over the window.
template <typename Scalar>
Scalar signed_area(const PulseSpec<Scalar>& spec) {
    validate(spec);
    return integrate([&spec](Scalar u) { return spec.shape(u); },
                     -spec.window_ratio / 2, spec.window_ratio / 2);
}

// theta(u, 0) = 2 * Omega*tau_d * int_0^u f: the rotation angle accumulated
// from the pulse center. Odd in u for even pulses.
template <typename Scalar>
Scalar theta_half(const PulseSpec<Scalar>& spec, Scalar u) {
    validate(spec);
    return Scalar(2) * spec.Omega_tau_d() *
           integrate([&spec](Scalar v) { return spec.shape(v); }, Scalar(0), u,
                     Scalar(1e-12), Scalar(1e-15), 128);
}

// Rotation angle over the whole window, theta(T/2) = 2 * Omega*tau_d * s.
template <typename Scalar>
Scalar full_angle(const PulseSpec<Scalar>& spec) {
    return Scalar(2) * spec.Omega_tau_d() * signed_area(spec);
}

// First-order error integrals (s1c, s1s) = int du f(u) u (cos, sin) theta(u,0)
// over the window, with theta(u,0) built from the spec's own Omega*tau_d, so
// the pair depends only on (Omega*tau_d, omega*tau_d, phi_cep). The running
// phase and the outer rule share one panel grid that is doubled jointly until
// both integrals settle.
template <typename Scalar>
std::pair<Scalar, Scalar> s1_integrals(const PulseSpec<Scalar>& spec) {
    validate(spec);
    const Scalar half = spec.window_ratio / 2;
    const Scalar w2 = Scalar(2) * spec.Omega_tau_d();
    auto f = [&spec](Scalar u) { return spec.shape(u); };

    Scalar prev_c = 0, prev_s = 0;
    bool have_prev = false;
    for (int panels = kDefaultMinPanels; panels <= kMaxPanels; panels *= 2) {
        CumulativeIntegral<Scalar, decltype(f)> running(f, -half, half, panels);
        const Scalar at_center = running(Scalar(0));
        auto theta = [&](Scalar u) { return w2 * (running(u) - at_center); };
        const Scalar s1c = integrate_panels(
            [&](Scalar u) { return f(u) * u * std::cos(theta(u)); }, -half, half, panels);
        const Scalar s1s = integrate_panels(
            [&](Scalar u) { return f(u) * u * std::sin(theta(u)); }, -half, half, panels);
        if (have_prev &&
            std::abs(s1c - prev_c) <= Scalar(1e-12) * std::abs(s1c) + Scalar(1e-14) &&
            std::abs(s1s - prev_s) <= Scalar(1e-12) * std::abs(s1s) + Scalar(1e-14))
            return {s1c, s1s};
        prev_c = s1c;
        prev_s = s1s;
        have_prev = true;
    }
    throw IntegrationError("s1_integrals: panel doubling did not converge");
}

// Real Fourier component g~(w~) = Omega*tau_d * int du f(u) cos(w~ tau_d u)
// over the window; defined for even pulses only (phi_cep = 0), for which the
// transform is purely real. `omega_tilde` is in units of omega0.
template <typename Scalar>
Scalar fourier_component(const PulseSpec<Scalar>& spec, Scalar omega_tilde) {
    validate(spec);
    if (!spec.is_even())
        throw SymmetryError("fourier_component: pulse must be even (phi_cep = 0)");
    if (!(omega_tilde >= Scalar(0)))
        throw std::invalid_argument("fourier_component: probe frequency must be nonnegative");
    const Scalar wt = omega_tilde * spec.omega0 * spec.tau_d_abs();
    return spec.Omega_tau_d() *
           integrate([&spec, wt](Scalar u) { return spec.shape(u) * std::cos(wt * u); },
                     -spec.window_ratio / 2, spec.window_ratio / 2);
}

template <typename Scalar = double>
struct SpectrumRecord {
    Scalar omega_tilde = Scalar(0); // probe frequency, units of omega0
    Scalar g = Scalar(0);           // Fourier component, radians
};

template <typename Scalar>
std::vector<SpectrumRecord<Scalar>> spectrum(const PulseSpec<Scalar>& spec, Scalar w_min,
                                             Scalar w_max, int points) {
    if (points < 2) throw std::invalid_argument("spectrum: need at least two grid points");
    if (!(w_min >= Scalar(0)) || !(w_max > w_min))
        throw std::invalid_argument("spectrum: need 0 <= w_min < w_max");
    std::vector<SpectrumRecord<Scalar>> out;
    out.reserve(points);
    for (int i = 0; i < points; ++i) {
        const Scalar w = w_min + (w_max - w_min) * Scalar(i) / Scalar(points - 1);
        out.push_back({w, fourier_component(spec, w)});
    }
    return out;
}

} // namespace qgate
