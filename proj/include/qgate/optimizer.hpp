#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "qgate/dynamics.hpp"
#include "qgate/envelope.hpp"
#include "qgate/errors.hpp"
#include "qgate/pulse.hpp"
#include "qgate/quadrature.hpp"
#include "qgate/seeders.hpp"
#include "qgate/su2.hpp"

namespace qgate {

template <typename Scalar = double>
struct OptimizeSettings {
    Scalar tolerance = Scalar(1e-14);          // simplex value-spread stop
    int max_iterations = 500;
    Scalar simplex_scale = Scalar(0.02);       // initial step, fraction of each parameter
    Scalar converged_threshold = Scalar(1e-10); // infidelity below this counts as converged
    int grid_points = 60;                      // continuation grid size
    Scalar tau_min = Scalar(0.01);             // grid bounds, units of T0
    Scalar tau_max = Scalar(10);
    bool emit_fourier = false;                 // fill g_res_over_theta in records
    bool reverse = false;                      // sweep large-to-small (consistency option)
};

template <typename Scalar>
void validate(const OptimizeSettings<Scalar>& s) {
    if (!(s.tolerance > Scalar(0))) throw std::invalid_argument("settings: tolerance must be positive");
    if (s.max_iterations < 0) throw std::invalid_argument("settings: max iterations must be nonnegative");
    if (!(s.simplex_scale > Scalar(0))) throw std::invalid_argument("settings: simplex scale must be positive");
    if (!(s.converged_threshold > Scalar(0)))
        throw std::invalid_argument("settings: convergence threshold must be positive");
    if (s.grid_points < 2) throw std::invalid_argument("settings: grid needs at least two points");
    if (!(s.tau_min > Scalar(0)) || !(s.tau_max > s.tau_min))
        throw std::invalid_argument("settings: grid bounds must satisfy 0 < tau_min < tau_max");
}

template <typename Scalar = double>
struct SweepRecord {
    Scalar tau_d = 0;           // units of T0
    Scalar Omega_tau_d = 0;     // optimal pulse area, radians
    Scalar omega = 0;           // optimal carrier, units of omega0
    Scalar infidelity = 0;      // 1 - F at the optimum (clamped at zero)
    Scalar g_res_over_theta = std::numeric_limits<Scalar>::quiet_NaN();
    int iterations = 0;
    bool converged = false;
    std::string seed_source;
};

template <typename Scalar = double>
struct SimplexResult {
    std::vector<Scalar> x;
    Scalar value = 0;
    int iterations = 0;
    bool settled = false; // value spread fell below tolerance
};

// Derivative-free simplex descent (reflection 1, expansion 2, contraction 0.5,
// shrink 0.5). Stops when the simplex value spread drops below `tolerance` or
// after `max_iterations` iterations.
template <typename Scalar, typename F>
SimplexResult<Scalar> nelder_mead(F objective, std::vector<Scalar> start, std::vector<Scalar> step,
                                  Scalar tolerance, int max_iterations) {
    const std::size_t n = start.size();
    if (n == 0 || step.size() != n)
        throw std::invalid_argument("nelder_mead: start and step sizes must match and be nonempty");

    std::vector<std::vector<Scalar>> xs(n + 1, start);
    for (std::size_t i = 0; i < n; ++i) xs[i + 1][i] += step[i];
    std::vector<Scalar> fs(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fs[i] = objective(xs[i]);

    std::vector<std::size_t> order(n + 1);
    SimplexResult<Scalar> out;
    for (out.iterations = 0; out.iterations < max_iterations; ++out.iterations) {
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
        const std::size_t best = order[0], worst = order[n], second = order[n - 1];
        if (fs[worst] - fs[best] <= tolerance) {
            out.settled = true;
            break;
        }

        std::vector<Scalar> centroid(n, Scalar(0));
        for (std::size_t i = 0; i <= n; ++i)
            if (i != worst)
                for (std::size_t d = 0; d < n; ++d) centroid[d] += xs[i][d];
        for (std::size_t d = 0; d < n; ++d) centroid[d] /= Scalar(n);

        auto blend = [&](Scalar c) {
            std::vector<Scalar> p(n);
            for (std::size_t d = 0; d < n; ++d) p[d] = centroid[d] + c * (centroid[d] - xs[worst][d]);
            return p;
        };

        const std::vector<Scalar> refl = blend(Scalar(1));
        const Scalar f_refl = objective(refl);
        if (f_refl < fs[best]) {
            const std::vector<Scalar> expd = blend(Scalar(2));
            const Scalar f_expd = objective(expd);
            if (f_expd < f_refl) {
                xs[worst] = expd;
                fs[worst] = f_expd;
            } else {
                xs[worst] = refl;
                fs[worst] = f_refl;
            }
            continue;
        }
        if (f_refl < fs[second]) {
            xs[worst] = refl;
            fs[worst] = f_refl;
            continue;
        }
        const std::vector<Scalar> contr = blend(f_refl < fs[worst] ? Scalar(0.5) : Scalar(-0.5));
        const Scalar f_contr = objective(contr);
        if (f_contr < std::min(f_refl, fs[worst])) {
            xs[worst] = contr;
            fs[worst] = f_contr;
            continue;
        }
        for (std::size_t i = 0; i <= n; ++i) { // shrink toward the best vertex
            if (i == best) continue;
            for (std::size_t d = 0; d < n; ++d)
                xs[i][d] = xs[best][d] + (xs[i][d] - xs[best][d]) / 2;
            fs[i] = objective(xs[i]);
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (fs[i] < fs[best]) best = i;
    out.x = xs[best];
    out.value = fs[best];
    return out;
}

namespace detail {

template <typename Scalar>
PulseSpec<Scalar> spec_from_areas(EnvelopeKind kind, Scalar window_ratio, Scalar tau_d,
                                  Scalar Omega_tau_d, Scalar omega_tau_d) {
    PulseSpec<Scalar> spec;
    spec.envelope = kind;
    spec.window_ratio = window_ratio;
    spec.tau_d = tau_d;
    spec.Omega = Omega_tau_d / (two_pi_v<Scalar> * tau_d);
    spec.omega = omega_tau_d / (two_pi_v<Scalar> * tau_d);
    return spec;
}

template <typename Scalar>
Scalar raw_infidelity(const PulseSpec<Scalar>& spec, const UnitarySU2<Scalar>& target) {
    return Scalar(1) - average_gate_fidelity(propagate_rot(spec).u_rot, target);
}

} // namespace detail

// Minimize 1 - F over (Omega*tau_d, omega*tau_d) at fixed duration, in log
// coordinates to keep both parameters positive without constraints.
// A zero target angle is the identity gate: no pulse, no iterations.
template <typename Scalar>
SweepRecord<Scalar> optimize_point(EnvelopeKind kind, Scalar window_ratio, Scalar theta_g,
                                   Scalar tau_d, std::pair<Scalar, Scalar> initial,
                                   const OptimizeSettings<Scalar>& settings = {}) {
    validate(settings);
    if (!(tau_d > Scalar(0))) throw std::invalid_argument("optimize_point: tau_d must be positive");
    if (!(theta_g >= Scalar(0)) || !(theta_g <= two_pi_v<Scalar>))
        throw std::invalid_argument("optimize_point: gate angle must lie in [0, 2*pi]");

    SweepRecord<Scalar> record;
    record.tau_d = tau_d;
    record.seed_source = "manual";
    if (theta_g == Scalar(0)) {
        record.Omega_tau_d = 0;
        record.omega = initial.second > Scalar(0) ? initial.second / (two_pi_v<Scalar> * tau_d)
                                                  : Scalar(1);
        record.infidelity = 0;
        record.converged = true;
        if (settings.emit_fourier) record.g_res_over_theta = std::numeric_limits<Scalar>::quiet_NaN();
        return record;
    }
    if (!(initial.first > Scalar(0)) || !(initial.second > Scalar(0)))
        throw std::invalid_argument("optimize_point: initial parameters must be positive");

    const UnitarySU2<Scalar> target = UnitarySU2<Scalar>::rotation_x(theta_g);
    auto objective = [&](const std::vector<Scalar>& p) {
        const PulseSpec<Scalar> spec = detail::spec_from_areas(
            kind, window_ratio, tau_d, std::exp(p[0]), std::exp(p[1]));
        return detail::raw_infidelity(spec, target);
    };
    const Scalar log_step = std::log(Scalar(1) + settings.simplex_scale);
    const SimplexResult<Scalar> best =
        nelder_mead(objective, {std::log(initial.first), std::log(initial.second)},
                    {log_step, log_step}, settings.tolerance, settings.max_iterations);

    record.Omega_tau_d = std::exp(best.x[0]);
    record.omega = std::exp(best.x[1]) / (two_pi_v<Scalar> * tau_d);
    record.infidelity = std::max(Scalar(0), best.value);
    record.iterations = best.iterations;
    record.converged = record.infidelity < settings.converged_threshold;
    if (settings.emit_fourier) {
        const PulseSpec<Scalar> spec = detail::spec_from_areas(
            kind, window_ratio, tau_d, record.Omega_tau_d, std::exp(best.x[1]));
        record.g_res_over_theta = fourier_component(spec, Scalar(1)) / theta_g;
    }
    return record;
}

// Continuation sweep over a log-spaced duration grid. The first point starts
// from the analytic seed for its side of the transition; later points
// warm-start from the previous optimum, carrying the invariant of the new
// point's regime (total carrier phase below the transition, carrier frequency
// above it). Unit-fidelity pulses also exist at larger areas and detuned
// carriers, so when a point fails to converge or its carrier drifts more than
// 1.5x from the warm start, the analytic seed is retried and kept whenever it
// converges near its own carrier; otherwise the lower-infidelity run wins.
template <typename Scalar>
std::vector<SweepRecord<Scalar>> sweep(EnvelopeKind kind, Scalar window_ratio, Scalar theta_g,
                                       const OptimizeSettings<Scalar>& settings = {},
                                       const ScanPolicy<Scalar>& scan = {}) {
    validate(settings);
    if (!(theta_g > Scalar(0)) || !(theta_g <= two_pi_v<Scalar>))
        throw std::invalid_argument("sweep: gate angle must lie in (0, 2*pi]");

    std::vector<Scalar> grid(settings.grid_points);
    const Scalar ratio = settings.tau_max / settings.tau_min;
    for (int i = 0; i < settings.grid_points; ++i)
        grid[i] = settings.tau_min * std::pow(ratio, Scalar(i) / Scalar(settings.grid_points - 1));
    if (settings.reverse) std::reverse(grid.begin(), grid.end());

    const SeedResult<Scalar> subcycle = seed_subcycle(kind, window_ratio, theta_g, scan);
    const Scalar tau_transition = subcycle.phi / two_pi_v<Scalar>;

    auto analytic_seed = [&](Scalar tau_d) -> std::pair<std::pair<Scalar, Scalar>, const char*> {
        if (tau_d < tau_transition)
            return {{subcycle.Omega_tau_d, subcycle.phi}, "subcycle"};
        const SeedResult<Scalar> rwa = seed_rwa(kind, window_ratio, theta_g, tau_d);
        return {{rwa.Omega_tau_d, rwa.omega_tau_d}, "rwa"};
    };

    auto carrier_drift = [](const SweepRecord<Scalar>& rec, const std::pair<Scalar, Scalar>& init,
                            Scalar tau_d) {
        const Scalar seeded = init.second / (two_pi_v<Scalar> * tau_d);
        return rec.omega > seeded ? rec.omega / seeded : seeded / rec.omega;
    };
    constexpr Scalar max_drift = Scalar(3) / Scalar(2);

    std::vector<SweepRecord<Scalar>> records;
    records.reserve(grid.size());
    std::pair<Scalar, Scalar> warm{0, 0};
    Scalar tau_prev = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Scalar tau_d = grid[i];
        SweepRecord<Scalar> record;
        if (i == 0) {
            const auto [init, tag] = analytic_seed(tau_d);
            record = optimize_point(kind, window_ratio, theta_g, tau_d, init, settings);
            record.seed_source = tag;
        } else {
            std::pair<Scalar, Scalar> init = warm;
            if (tau_d >= tau_transition) init.second = warm.second * (tau_d / tau_prev);
            record = optimize_point(kind, window_ratio, theta_g, tau_d, init, settings);
            record.seed_source = "warm";
            if (!record.converged || carrier_drift(record, init, tau_d) > max_drift) {
                const auto [analytic, tag] = analytic_seed(tau_d);
                SweepRecord<Scalar> retry =
                    optimize_point(kind, window_ratio, theta_g, tau_d, analytic, settings);
                retry.seed_source = std::string("reseed-") + tag;
                if (retry.converged && carrier_drift(retry, analytic, tau_d) <= max_drift)
                    record = retry;
                else if (retry.infidelity < record.infidelity)
                    record = retry;
            }
        }
        warm = {record.Omega_tau_d, record.omega * two_pi_v<Scalar> * tau_d};
        tau_prev = tau_d;
        records.push_back(std::move(record));
    }
    if (settings.reverse)
        std::reverse(records.begin(), records.end()); // keep records sorted by tau_d
    return records;
}

// Fitted exponents n of omega ~ tau_d^n on the two sides of the transition:
// records with tau_d < tau0/3 and those with tau_d > 3*tau0.
template <typename Scalar>
std::pair<Scalar, Scalar> scaling_exponents(const std::vector<SweepRecord<Scalar>>& records,
                                            Scalar tau0) {
    std::vector<Scalar> lx_sub, ly_sub, lx_multi, ly_multi;
    for (const auto& r : records) {
        if (!(r.tau_d > Scalar(0)) || !(r.omega > Scalar(0))) continue;
        if (r.tau_d < tau0 / 3) {
            lx_sub.push_back(std::log(r.tau_d));
            ly_sub.push_back(std::log(r.omega));
        } else if (r.tau_d > 3 * tau0) {
            lx_multi.push_back(std::log(r.tau_d));
            ly_multi.push_back(std::log(r.omega));
        }
    }
    return {fit_slope(lx_sub, ly_sub), fit_slope(lx_multi, ly_multi)};
}

} // namespace qgate
