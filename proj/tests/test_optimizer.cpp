#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "qgate/errors.hpp"
#include "qgate/optimizer.hpp"
#include "qgate/seeders.hpp"
#include "qgate/su2.hpp"

using namespace qgate;

namespace {

constexpr double kPi = pi_v<double>;
constexpr EnvelopeKind kGauss = EnvelopeKind::gaussian;
constexpr double kRatio = 5.0;

std::pair<double, double> analytic_start(double tau_d, double theta) {
    static const auto sub_pi = seed_subcycle(kGauss, kRatio, kPi); // every caller uses theta = pi
    const auto sub = theta == kPi ? sub_pi : seed_subcycle(kGauss, kRatio, theta);
    if (tau_d < sub.phi / two_pi_v<double>) return {sub.Omega_tau_d, sub.phi};
    const auto rwa = seed_rwa(kGauss, kRatio, theta, tau_d);
    return {rwa.Omega_tau_d, rwa.omega_tau_d};
}

} // namespace

TEST_CASE("simplex descent minimizes a quadratic bowl") {
    auto bowl = [](const std::vector<double>& p) {
        const double dx = p[0] - 1.5, dy = p[1] + 0.25;
        return 3 * dx * dx + dy * dy;
    };
    const auto res = nelder_mead<double>(bowl, {0.0, 0.0}, {0.1, 0.1}, 1e-14, 500);
    CHECK(res.settled);
    CHECK(res.x[0] == doctest::Approx(1.5).epsilon(1e-5));
    CHECK(res.x[1] == doctest::Approx(-0.25).epsilon(1e-4));
    CHECK(res.value < 1e-10);
    CHECK_THROWS_AS(nelder_mead<double>(bowl, {}, {}, 1e-14, 10), std::invalid_argument);
}

TEST_CASE("a zero angle is the identity gate and needs no pulse") {
    const auto record = optimize_point(kGauss, kRatio, 0.0, 0.1, {1.0, 1.0});
    CHECK(record.converged);
    CHECK(record.iterations == 0);
    CHECK(record.Omega_tau_d == 0.0);
    CHECK(record.infidelity == 0.0);
}

TEST_CASE("optimized pulse parameters across the speed range") {
    // (tau_d, pulse area, carrier) for the pi gate; unit fidelity throughout.
    struct Row {
        double tau_d;
        double W;
        double omega;
    };
    const Row rows[] = {
        {0.01, 3.97148135, 57.18651082},
        {0.1, 3.96264534, 5.75974878},
        {1.0, 3.59698455, 1.05721435},
        {10.0, 3.54533614, 1.00050669},
    };
    for (const auto& row : rows) {
        CAPTURE(row.tau_d);
        const auto record =
            optimize_point(kGauss, kRatio, kPi, row.tau_d, analytic_start(row.tau_d, kPi));
        CHECK(record.converged);
        CHECK(record.infidelity < 1e-10);
        CHECK(record.Omega_tau_d == doctest::Approx(row.W).epsilon(1e-4));
        CHECK(record.omega == doctest::Approx(row.omega).epsilon(1e-4));
    }
}

TEST_CASE("records are reproducible and self-consistent") {
    const auto start = analytic_start(0.1, kPi);
    const auto a = optimize_point(kGauss, kRatio, kPi, 0.1, start);
    const auto b = optimize_point(kGauss, kRatio, kPi, 0.1, start);
    CHECK(a.Omega_tau_d == b.Omega_tau_d);
    CHECK(a.omega == b.omega);
    CHECK(a.infidelity == b.infidelity);
    CHECK(a.iterations == b.iterations);

    // The reported infidelity re-evaluates from the reported parameters.
    const auto spec = detail::spec_from_areas(kGauss, kRatio, a.tau_d, a.Omega_tau_d,
                                              a.omega * two_pi_v<double> * a.tau_d);
    const double again = detail::raw_infidelity(spec, UnitarySU2<>::rotation_x(kPi));
    CHECK(std::abs(std::max(0.0, again) - a.infidelity) < 1e-12);
}

TEST_CASE("the optimum does not depend on small changes to the start point") {
    const auto start = analytic_start(0.1, kPi);
    const auto ref = optimize_point(kGauss, kRatio, kPi, 0.1, start);
    for (const double bump : {1.01, 0.99}) {
        const auto moved =
            optimize_point(kGauss, kRatio, kPi, 0.1, {start.first * bump, start.second / bump});
        CHECK(moved.Omega_tau_d == doctest::Approx(ref.Omega_tau_d).epsilon(1e-6));
        CHECK(moved.omega == doctest::Approx(ref.omega).epsilon(1e-6));
    }
}

TEST_CASE("fourier diagnostics are attached on request") {
    OptimizeSettings<double> settings;
    settings.emit_fourier = true;
    const auto record = optimize_point(kGauss, kRatio, kPi, 0.1, analytic_start(0.1, kPi), settings);
    // At unit fidelity the drive component at the qubit frequency carries half
    // the gate angle.
    CHECK(record.g_res_over_theta == doctest::Approx(0.5).epsilon(1e-3));

    const auto plain = optimize_point(kGauss, kRatio, kPi, 0.1, analytic_start(0.1, kPi));
    CHECK(std::isnan(plain.g_res_over_theta));
}

TEST_CASE("continuation sweep covers the full speed range") {
    OptimizeSettings<double> settings;
    settings.grid_points = 13;
    settings.tau_min = 0.01;
    settings.tau_max = 10.0;
    const auto records = sweep(kGauss, kRatio, kPi, settings);
    REQUIRE(records.size() == 13);
    CHECK(records.front().tau_d == doctest::Approx(0.01));
    CHECK(records.back().tau_d == doctest::Approx(10.0));
    CHECK(records.front().seed_source == "subcycle");
    for (std::size_t i = 0; i < records.size(); ++i) {
        CAPTURE(records[i].tau_d);
        CHECK(records[i].converged);
        CHECK(records[i].infidelity < 1e-10);
        if (i > 0) CHECK(records[i].tau_d > records[i - 1].tau_d);
    }

    // Carrier scaling: omega ~ 1/tau_d below the transition, constant above.
    const double tau0 = transition_duration(kGauss, kRatio, kPi);
    const auto [n_sub, n_multi] = scaling_exponents(records, tau0);
    CHECK(n_sub == doctest::Approx(-1.0).epsilon(0.05));
    CHECK(std::abs(n_multi) < 0.05);
}

TEST_CASE("sweeping down from slow pulses lands on the same end basins") {
    OptimizeSettings<double> settings;
    settings.grid_points = 7;
    settings.tau_min = 0.05;
    settings.tau_max = 2.0;
    const auto fwd = sweep(kGauss, kRatio, kPi, settings);
    settings.reverse = true;
    const auto rev = sweep(kGauss, kRatio, kPi, settings);
    REQUIRE(rev.size() == fwd.size());
    // Records come back sorted by duration regardless of sweep direction.
    CHECK(rev.front().tau_d == doctest::Approx(fwd.front().tau_d));
    CHECK(rev.back().tau_d == doctest::Approx(fwd.back().tau_d));
    for (const auto& r : rev) CHECK(r.converged);
    // Far from the transition the basins are unambiguous.
    CHECK(rev.front().Omega_tau_d == doctest::Approx(fwd.front().Omega_tau_d).epsilon(1e-3));
    CHECK(rev.back().Omega_tau_d == doctest::Approx(fwd.back().Omega_tau_d).epsilon(1e-3));
    CHECK(rev.back().omega == doctest::Approx(fwd.back().omega).epsilon(1e-3));
}

TEST_CASE("settings and argument guards") {
    OptimizeSettings<double> bad;
    bad.tolerance = 0.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = {};
    bad.grid_points = 1;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = {};
    bad.tau_min = 2.0;
    bad.tau_max = 1.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);

    CHECK_THROWS_AS(optimize_point(kGauss, kRatio, -0.1, 0.1, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(optimize_point(kGauss, kRatio, kPi, 0.0, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(optimize_point(kGauss, kRatio, kPi, 0.1, {-1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(sweep(kGauss, kRatio, 0.0), std::invalid_argument);
}
