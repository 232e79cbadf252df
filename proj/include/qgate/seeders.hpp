#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "qgate/envelope.hpp"
#include "qgate/errors.hpp"
#include "qgate/pulse.hpp"
#include "qgate/quadrature.hpp"

namespace qgate {

enum class SeedRegime { rwa, subcycle };

inline const char* to_string(SeedRegime r) {
    return r == SeedRegime::rwa ? "rwa" : "subcycle";
}

// Root search policy for the subcycle carrier-phase condition.
template <typename Scalar = double>
struct ScanPolicy {
    Scalar lo = Scalar(0.1);            // scan start, omega*tau_d in radians
    Scalar hi = Scalar(8) * pi_v<Scalar>; // scan end
    Scalar step = Scalar(0.02);         // bracketing grid step
    Scalar s_floor = Scalar(1e-6);      // reject roots with |s| at or below this
    Scalar tol = Scalar(1e-12);         // bisection width on omega*tau_d
    int scan_panels = 128;              // quadrature panels while bracketing
    int refine_panels = 512;            // panels for bisection and reported values
};

// Analytic pulse parameters in dimensionless form. Omega_tau_d carries the
// sign of the requested angle; omega_tau_d is the carrier phase accumulated
// across tau_d (phi for the subcycle regime, omega0*tau_d on resonance).
template <typename Scalar = double>
struct SeedResult {
    SeedRegime regime = SeedRegime::rwa;
    Scalar Omega_tau_d = 0;
    Scalar omega_tau_d = 0;
    Scalar phi = 0;            // minimal carrier phase (subcycle only)
    Scalar s0 = 0;             // envelope area
    Scalar s = 0;              // signed pulse area at the seeded carrier
    Scalar s1s_residual = 0;   // first-order phase condition at the root
    int skipped_roots = 0;     // sign changes rejected by the vanishing-s guard
};

namespace detail {

template <typename Scalar>
void require_seed_angle(Scalar theta_g) {
    const Scalar mag = std::abs(theta_g);
    if (!(mag > Scalar(0)) || !(mag <= two_pi_v<Scalar>))
        throw std::invalid_argument("seed: gate angle magnitude must lie in (0, 2*pi]");
}

template <typename Scalar>
struct ConditionValue {
    Scalar s1s_half; // integral_0^{Td/2} f(u) u sin(theta(u)) du
    Scalar s_half;   // integral_0^{Td/2} f(u) du = s/2 for an even pulse
};

// First-order phase condition for an even pulse f(u) = f0(u) cos(a*u) at
// carrier phase a = omega*tau_d, with theta(u) = (theta_g/2) s(u,0)/s(Td/2,0).
// The accumulated angle is taken over [0, Td/2]; evenness supplies the rest.
template <typename Scalar>
ConditionValue<Scalar> subcycle_condition(EnvelopeKind kind, Scalar window_ratio, Scalar theta_mag,
                                          Scalar a, int panels, int order = kDefaultQuadOrder) {
    const Scalar half = window_ratio / 2;
    auto f = [kind, window_ratio, a](Scalar u) {
        return envelope_value(kind, u, window_ratio) * std::cos(a * u);
    };
    const CumulativeIntegral<Scalar, decltype(f)> accumulated(f, Scalar(0), half, panels, order);
    const Scalar s_half = accumulated.total();
    // theta is ill-defined where s vanishes; such carriers are excluded by the
    // |s| guard, so any finite stand-in keeps the scan arithmetic NaN-free.
    const Scalar denom = s_half == Scalar(0) ? std::numeric_limits<Scalar>::min() : s_half;
    auto integrand = [&](Scalar u) {
        return f(u) * u * std::sin((theta_mag / 2) * accumulated(u) / denom);
    };
    return {integrate_panels(integrand, Scalar(0), half, panels, order), s_half};
}

} // namespace detail

// Multicycle (resonant, rotating-wave) seed: pulse area theta_g/s0 at carrier
// omega = omega0. tau_d (units of T0) fixes the dimensionless carrier phase.
template <typename Scalar>
SeedResult<Scalar> seed_rwa(EnvelopeKind kind, Scalar window_ratio, Scalar theta_g, Scalar tau_d) {
    detail::require_seed_angle(theta_g);
    if (!(tau_d > Scalar(0))) throw std::invalid_argument("seed_rwa: tau_d must be positive");
    const Scalar s0 = envelope_area(kind, window_ratio);
    if (!(s0 > Scalar(0))) throw SeedError("seed_rwa: envelope area must be positive");
    SeedResult<Scalar> out;
    out.regime = SeedRegime::rwa;
    out.omega_tau_d = two_pi_v<Scalar> * tau_d;
    out.Omega_tau_d = theta_g / s0;
    out.s0 = s0;
    const Scalar half = window_ratio / 2;
    const Scalar a = out.omega_tau_d;
    out.s = Scalar(2) * integrate([kind, window_ratio, a](Scalar u) {
                return envelope_value(kind, u, window_ratio) * std::cos(a * u);
            }, Scalar(0), half);
    return out;
}

// Subcycle seed: pulse area theta_g/2s at the smallest carrier phase
// phi = min{omega*tau_d : s1s(T/2) = 0} with |s| away from zero. Sign changes
// of the condition where |s| is within the guard are skipped and counted.
template <typename Scalar>
SeedResult<Scalar> seed_subcycle(EnvelopeKind kind, Scalar window_ratio, Scalar theta_g,
                                 const ScanPolicy<Scalar>& policy = {}) {
    detail::require_seed_angle(theta_g);
    if (!(policy.lo > Scalar(0)) || !(policy.hi > policy.lo) || !(policy.step > Scalar(0)))
        throw std::invalid_argument("seed_subcycle: scan bounds must satisfy 0 < lo < hi, step > 0");
    const Scalar theta_mag = std::abs(theta_g);

    auto coarse = [&](Scalar a) {
        return detail::subcycle_condition(kind, window_ratio, theta_mag, a, policy.scan_panels);
    };
    auto fine = [&](Scalar a) {
        return detail::subcycle_condition(kind, window_ratio, theta_mag, a, policy.refine_panels);
    };
    auto guarded = [&](const detail::ConditionValue<Scalar>& v) {
        return std::abs(Scalar(2) * v.s_half) > policy.s_floor;
    };

    int skipped = 0;
    std::optional<Scalar> root;
    detail::ConditionValue<Scalar> prev = coarse(policy.lo);
    Scalar a_prev = policy.lo;
    for (Scalar a = policy.lo + policy.step; a_prev < policy.hi; a += policy.step) {
        if (a > policy.hi) a = policy.hi;
        const detail::ConditionValue<Scalar> cur = coarse(a);
        if (prev.s1s_half * cur.s1s_half <= Scalar(0) && prev.s1s_half != Scalar(0)) {
            if (!(guarded(prev) && guarded(cur))) {
                ++skipped;
            } else {
                // Bisect at refinement resolution; a bracket that dissolves at
                // the finer grid was a quadrature artifact, so keep scanning.
                Scalar lo = a_prev, hi = a;
                Scalar f_lo = fine(lo).s1s_half, f_hi = fine(hi).s1s_half;
                if (f_lo * f_hi <= Scalar(0) && f_lo != Scalar(0)) {
                    while (hi - lo > policy.tol) {
                        const Scalar mid = (lo + hi) / 2;
                        const Scalar f_mid = fine(mid).s1s_half;
                        if (f_lo * f_mid <= Scalar(0)) {
                            hi = mid;
                        } else {
                            lo = mid;
                            f_lo = f_mid;
                        }
                    }
                    root = (lo + hi) / 2;
                    break;
                }
            }
        }
        a_prev = a;
        prev = cur;
    }
    if (!root) {
        std::ostringstream msg;
        msg << "seed_subcycle: no carrier-phase root with |s| > " << policy.s_floor
            << " in omega*tau_d <= " << policy.hi << " (" << skipped << " vanishing-s candidates skipped)";
        throw SeedError(msg.str());
    }

    const detail::ConditionValue<Scalar> at_root = fine(*root);
    SeedResult<Scalar> out;
    out.regime = SeedRegime::subcycle;
    out.phi = *root;
    out.omega_tau_d = *root;
    out.s = Scalar(2) * at_root.s_half;
    out.Omega_tau_d = theta_g / (Scalar(2) * out.s);
    out.s0 = envelope_area(kind, window_ratio);
    out.s1s_residual = Scalar(2) * at_root.s1s_half;
    out.skipped_roots = skipped;
    return out;
}

// Duration at the subcycle/multicycle crossover, tau_0 = (phi/2pi) T0,
// returned in units of T0.
template <typename Scalar>
Scalar transition_duration(EnvelopeKind kind, Scalar window_ratio, Scalar theta_g,
                           const ScanPolicy<Scalar>& policy = {}) {
    return seed_subcycle(kind, window_ratio, theta_g, policy).phi / two_pi_v<Scalar>;
}

// Realize a seed as a concrete pulse of duration tau_d (units of T0).
template <typename Scalar>
PulseSpec<Scalar> to_pulse_spec(const SeedResult<Scalar>& seed, EnvelopeKind kind,
                                Scalar window_ratio, Scalar tau_d) {
    if (!(tau_d > Scalar(0))) throw std::invalid_argument("to_pulse_spec: tau_d must be positive");
    if (seed.Omega_tau_d < Scalar(0))
        throw std::invalid_argument(
            "to_pulse_spec: negative drive area; realize negative angles with a time delay");
    PulseSpec<Scalar> spec;
    spec.envelope = kind;
    spec.window_ratio = window_ratio;
    spec.tau_d = tau_d;
    spec.Omega = seed.Omega_tau_d / (two_pi_v<Scalar> * tau_d);
    const Scalar a = seed.regime == SeedRegime::subcycle ? seed.phi : seed.omega_tau_d;
    spec.omega = a / (two_pi_v<Scalar> * tau_d);
    spec.phi_cep = 0;
    return spec;
}

} // namespace qgate
