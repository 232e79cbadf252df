#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qgate/dynamics.hpp"
#include "qgate/errors.hpp"
#include "qgate/magnus.hpp"
#include "qgate/pulse.hpp"
#include "qgate/seeders.hpp"
#include "qgate/su2.hpp"

using namespace qgate;

namespace {

constexpr double kPi = pi_v<double>;

PulseSpec<> make_spec(EnvelopeKind kind, double ratio, double tau_d, double Omega, double omega) {
    PulseSpec<> spec;
    spec.envelope = kind;
    spec.window_ratio = ratio;
    spec.tau_d = tau_d;
    spec.Omega = Omega;
    spec.omega = omega;
    return spec;
}

} // namespace

TEST_CASE("no drive, no exponent") {
    auto spec = make_spec(EnvelopeKind::gaussian, 5.0, 0.3, 0.0, 2.0);
    const auto c = magnus_coefficients(spec);
    CHECK(c.a1x == 0.0);
    CHECK(c.a2z == 0.0);
    CHECK(c.a3x == 0.0);

    spec.phi_cep = 0.5;
    spec.Omega = 1.0;
    CHECK_THROWS_AS(magnus_coefficients(spec), SymmetryError);
}

TEST_CASE("the linear coefficient is twice the drive component at the qubit frequency") {
    const PulseSpec<> specs[] = {
        make_spec(EnvelopeKind::gaussian, 5.0, 0.3, 0.7, 2.1),
        make_spec(EnvelopeKind::sech, 5.0, 0.15, 1.3, 4.0),
        make_spec(EnvelopeKind::triangular, 2.0, 1.2, 0.2, 1.0),
        make_spec(EnvelopeKind::constant, 1.0, 0.8, 0.4, 1.7),
    };
    for (const auto& spec : specs) {
        CAPTURE(to_string(spec.envelope));
        const auto unit = magnus_unit_coefficients(spec.envelope, spec.window_ratio,
                                                   spec.omega_tau_d(), spec.tau_d, 1e-12, 1e-14);
        const double a1x = unit.a1x * spec.Omega_tau_d();
        const double g = fourier_component(spec, 1.0);
        CHECK(std::abs(a1x - 2 * g) < 1e-10 * std::max(1.0, std::abs(2 * g)));
    }
}

TEST_CASE("coefficients scale with exact homogeneity in the pulse area") {
    const auto base = make_spec(EnvelopeKind::gaussian, 5.0, 0.2, 0.0, 3.1);
    auto at_area = [&](double w) {
        auto spec = base;
        spec.Omega = w / (two_pi_v<double> * spec.tau_d);
        return magnus_coefficients(spec);
    };
    const auto ref = at_area(1.0);
    for (const double w : {0.5, 2.0, 4.0}) {
        const auto c = at_area(w);
        CHECK(c.a1x == doctest::Approx(ref.a1x * w).epsilon(1e-9));
        CHECK(c.a2z == doctest::Approx(ref.a2z * w * w).epsilon(1e-9));
        CHECK(c.a3x == doctest::Approx(ref.a3x * w * w * w).epsilon(1e-9));
    }
}

TEST_CASE("truncation error falls at the expected order in the pulse area") {
    // Exact exponent from the propagator vs the truncated expansion. The
    // residual after the cubic term must drop as W^5 (x) and W^4 (z):
    // halving W divides them by ~32 and ~16. A wrong a3x or a2z would leave
    // W^3 / W^2 residuals (ratios 8 / 4), well outside the accepted bands.
    const auto base = make_spec(EnvelopeKind::gaussian, 5.0, 0.07, 0.0, 2.0 / (two_pi_v<double> * 0.07));
    const auto unit = magnus_unit_coefficients(base.envelope, base.window_ratio,
                                               base.omega_tau_d(), base.tau_d, 1e-12, 1e-14);
    auto residuals = [&](double w) {
        auto spec = base;
        spec.Omega = w / (two_pi_v<double> * spec.tau_d);
        const auto e = exponent_xz(propagate_rot(spec, 2.0).u_rot);
        return std::pair{std::abs(e.ax - (unit.a1x * w + unit.a3x * w * w * w)),
                         std::abs(e.az - unit.a2z * w * w)};
    };
    const auto [rx1, rz1] = residuals(0.5);
    const auto [rx2, rz2] = residuals(0.25);
    CHECK(rx1 < 5e-2);
    CHECK(rz1 < 5e-2);
    if (rx2 > 1e-11) {
        const double ratio_x = rx1 / rx2;
        CHECK(ratio_x > 16.0);
        CHECK(ratio_x < 160.0);
    }
    if (rz2 > 1e-11) {
        const double ratio_z = rz1 / rz2;
        CHECK(ratio_z > 8.0);
        CHECK(ratio_z < 80.0);
    }
}

TEST_CASE("second-order solve pins the drive component to half the angle") {
    const double tau_d = 0.3;
    const auto sol = solve_second_order(EnvelopeKind::gaussian, 5.0, kPi, tau_d);
    CHECK(sol.Omega_tau_d > 0.0);
    auto spec = make_spec(EnvelopeKind::gaussian, 5.0, tau_d,
                          sol.Omega_tau_d / (two_pi_v<double> * tau_d),
                          sol.omega_tau_d / (two_pi_v<double> * tau_d));
    CHECK(fourier_component(spec, 1.0) == doctest::Approx(kPi / 2).epsilon(1e-7));
    // The parasitic z coefficient is nulled at the chosen carrier.
    CHECK(std::abs(magnus_coefficients(spec).a2z) < 1e-7);
}

TEST_CASE("carrier root approaches the analytic subcycle phase for fast weak pulses") {
    // Both constructions null the leading z error; their carriers agree in the
    // small-angle, short-pulse limit.
    const double theta = 0.1;
    const auto sol = solve_second_order(EnvelopeKind::gaussian, 5.0, theta, 0.001);
    const auto seed = seed_subcycle(EnvelopeKind::gaussian, 5.0, theta);
    CHECK(std::abs(sol.omega_tau_d - seed.phi) < 5e-4);

    // At theta = pi the two truncations genuinely part ways: the z-nulling
    // root stays angle-free while the seeded phase grows with theta, so the
    // gap is phi(theta -> 0) - phi(pi). Pin it so a regression in either
    // root lands here.
    const auto sol_pi = solve_second_order(EnvelopeKind::gaussian, 5.0, kPi, 0.001);
    const auto seed_pi = seed_subcycle(EnvelopeKind::gaussian, 5.0, kPi);
    CHECK(sol_pi.omega_tau_d - seed_pi.phi == doctest::Approx(-0.1455).epsilon(0.05));
}

TEST_CASE("third-order solutions at the crossover duration") {
    struct Row {
        EnvelopeKind kind;
        double ratio;
        double tau0;
        double W;
        double a;
    };
    const Row rows[] = {
        {EnvelopeKind::constant, 1.0, 0.732808, 4.087484, 4.926406},
        {EnvelopeKind::triangular, 2.0, 0.489896, 3.241697, 3.583262},
        {EnvelopeKind::sech, 5.0, 0.426107, 3.105636, 3.453776},
        {EnvelopeKind::gaussian, 5.0, 0.571824, 3.675894, 4.419784},
    };
    for (const auto& row : rows) {
        CAPTURE(to_string(row.kind));
        const auto sol = solve_third_order(row.kind, row.ratio, kPi, row.tau0);
        CHECK(sol.Omega_tau_d == doctest::Approx(row.W).epsilon(1e-4));
        CHECK(sol.omega_tau_d == doctest::Approx(row.a).epsilon(1e-4));
    }
}

TEST_CASE("multicycle third-order solution sits near resonance") {
    const double tau_d = 3.0;
    const auto sol = solve_third_order(EnvelopeKind::gaussian, 5.0, kPi, tau_d);
    CHECK(sol.Omega_tau_d == doctest::Approx(3.549692).epsilon(1e-5));
    CHECK(sol.omega_tau_d / (two_pi_v<double> * tau_d) == doctest::Approx(1.005634).epsilon(1e-5));

    // Including the cubic correction must not lose fidelity against the
    // second-order area at the same carrier.
    const auto sol2 = solve_second_order(EnvelopeKind::gaussian, 5.0, kPi, tau_d);
    const auto target = UnitarySU2<>::rotation_x(kPi);
    auto infidelity = [&](const MagnusSolution<double>& s) {
        const auto spec = make_spec(EnvelopeKind::gaussian, 5.0, tau_d,
                                    s.Omega_tau_d / (two_pi_v<double> * tau_d),
                                    s.omega_tau_d / (two_pi_v<double> * tau_d));
        return 1.0 - average_gate_fidelity(propagate_rot(spec).u_rot, target);
    };
    const double third = infidelity(sol);
    const double second = infidelity(sol2);
    CHECK(third <= second * 1.1 + 1e-12);
    CHECK(third < 1e-5);
}

TEST_CASE("solver guards") {
    CHECK_THROWS_AS(solve_third_order(EnvelopeKind::gaussian, 5.0, 0.0, 0.3),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_third_order(EnvelopeKind::gaussian, 5.0, 7.0, 0.3),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_second_order(EnvelopeKind::gaussian, 5.0, kPi, -1.0),
                    std::invalid_argument);
    // No carrier root below an artificially low scan ceiling.
    CHECK_THROWS_AS(solve_second_order(EnvelopeKind::gaussian, 5.0, kPi, 0.3, 0.5), SolverError);
}
