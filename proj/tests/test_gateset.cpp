#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "qgate/errors.hpp"
#include "qgate/gateset.hpp"
#include "qgate/optimizer.hpp"
#include "qgate/seeders.hpp"
#include "qgate/su2.hpp"

using namespace qgate;

namespace {

constexpr double kPi = pi_v<double>;

// Unit-fidelity x-rotation pulse at tau_d = 0.1 T0, from seed + polish.
PulseSpec<> optimized_base(double theta) {
    const auto seed = seed_subcycle(EnvelopeKind::gaussian, 5.0, theta);
    const auto record = optimize_point(EnvelopeKind::gaussian, 5.0, theta, 0.1,
                                       {seed.Omega_tau_d, seed.phi});
    REQUIRE(record.converged);
    return detail::spec_from_areas(EnvelopeKind::gaussian, 5.0, record.tau_d, record.Omega_tau_d,
                                   record.omega * two_pi_v<double> * record.tau_d);
}

} // namespace

TEST_CASE("library lookup by angle magnitude") {
    GateLibrary<double> lib;
    CHECK(lib.empty());
    PulseSpec<> spec;
    lib.add(kPi / 2, spec);
    CHECK(lib.size() == 1);
    CHECK(lib.find(kPi / 2) != nullptr);
    CHECK(lib.find(kPi / 2 + 1e-10) != nullptr); // inside the key tolerance
    CHECK(lib.find(kPi) == nullptr);
    CHECK_THROWS_AS(lib.add(0.0, spec), std::invalid_argument);
    CHECK_THROWS_AS(lib.add(-1.0, spec), std::invalid_argument);
}

TEST_CASE("z rotations and null rotations are virtual") {
    const GateLibrary<double> empty;
    const auto zplan = plan_gate<double>({Axis::z, 0.7}, empty);
    CHECK_FALSE(zplan.has_pulse);
    CHECK(zplan.virtual_z == 0.7);
    CHECK(zplan.t0 == 0.0);
    const auto u = planned_unitary(zplan);
    CHECK(u.wxyz().isApprox(UnitarySU2<>::rotation_z(0.7).wxyz(), 1e-15));
    CHECK(verify_plan(zplan).entanglement_fidelity == 1.0);

    const auto nop = plan_gate<double>({Axis::x, 0.0}, empty);
    CHECK_FALSE(nop.has_pulse);
    CHECK(nop.virtual_z == 0.0);
}

TEST_CASE("quarter-period delays select axis and sign") {
    GateLibrary<double> lib;
    PulseSpec<> spec; // timing alone decides the plan
    lib.add(kPi / 2, spec);
    const double quarter = spec.qubit_period() / 4;

    struct Row {
        Axis axis;
        double angle;
        int m;
    };
    const Row rows[] = {
        {Axis::x, kPi / 2, 0},
        {Axis::x, -kPi / 2, 2},
        {Axis::y, kPi / 2, 3},
        {Axis::y, -kPi / 2, 1},
    };
    for (const auto& row : rows) {
        CAPTURE(to_string(row.axis));
        CAPTURE(row.angle);
        const auto plan = plan_gate<double>({row.axis, row.angle}, lib);
        CHECK(plan.has_pulse);
        CHECK(plan.quarter_multiple == row.m);
        CHECK(plan.k == row.m / 2);
        CHECK(plan.t0 == doctest::Approx(row.m * quarter));
        CHECK(plan.realized.axis == row.axis);
        CHECK(plan.realized.angle == row.angle);
        // The base pulse itself is never edited to change the gate.
        CHECK(plan.base.phi_cep == spec.phi_cep);
        CHECK(plan.base.Omega == spec.Omega);
    }
}

TEST_CASE("planning guards") {
    GateLibrary<double> lib;
    PulseSpec<> spec;
    lib.add(kPi / 2, spec);
    CHECK_THROWS_AS(plan_gate<double>({Axis::x, kPi / 4}, lib), PlanError);
    CHECK_THROWS_AS(plan_gate<double>({Axis::y, 1.1 * kPi}, lib), std::invalid_argument);
    // Message names the missing magnitude so the caller knows what to add.
    try {
        plan_gate<double>({Axis::x, kPi / 4}, lib);
        FAIL("expected PlanError");
    } catch (const PlanError& e) {
        CHECK(std::string(e.what()).find("no pulse for angle magnitude") != std::string::npos);
    }
}

TEST_CASE("delay conjugation matches the free rotation algebraically") {
    // R_z(m pi/2)^dag R_x(theta) R_z(m pi/2) rotates the axis to
    // (cos, -sin, 0): the quarter-multiple table in one identity.
    const double theta = 0.9;
    struct Expect {
        Axis axis;
        double angle;
    };
    const Expect table[] = {
        {Axis::x, theta}, {Axis::y, -theta}, {Axis::x, -theta}, {Axis::y, theta}};
    for (int m = 0; m < 4; ++m) {
        CAPTURE(m);
        const auto zrot = UnitarySU2<>::rotation_z(m * kPi / 2);
        const auto conj = zrot.adjoint() * UnitarySU2<>::rotation_x(theta) * zrot;
        const auto expected = UnitarySU2<>::from_target({table[m].axis, table[m].angle});
        const double sign = conj.wxyz().dot(expected.wxyz()) >= 0 ? 1.0 : -1.0;
        CHECK((conj.wxyz() - sign * expected.wxyz()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("virtual z composition rotates subsequent gate axes in the ledger") {
    const double phi = 0.6, theta = 1.3;
    const auto composed = UnitarySU2<>::rotation_z(phi) * UnitarySU2<>::rotation_x(theta) *
                          UnitarySU2<>::rotation_z(phi).adjoint();
    const auto expected =
        UnitarySU2<>::rotation({std::cos(phi), std::sin(phi), 0.0}, theta);
    CHECK((composed.wxyz() - expected.wxyz()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("planned pulses verify at unit fidelity") {
    GateLibrary<double> lib;
    lib.add(kPi / 2, optimized_base(kPi / 2));
    lib.add(kPi, optimized_base(kPi));

    const GateTarget<double> targets[] = {
        {Axis::y, kPi / 2},  {Axis::y, -kPi / 2}, {Axis::x, kPi / 2}, {Axis::x, -kPi / 2},
        {Axis::x, kPi},      {Axis::y, kPi},      {Axis::y, -kPi},
    };
    for (const auto& target : targets) {
        CAPTURE(to_string(target.axis));
        CAPTURE(target.angle);
        const auto plan = plan_gate(target, lib);
        const auto report = verify_plan(plan);
        CHECK(report.entanglement_fidelity > 1.0 - 1e-9);
    }
}

TEST_CASE("shifted propagation equals conjugated base propagation at any delay") {
    const auto base = optimized_base(kPi / 2);
    const auto u0 = propagate_rot(base).u_rot;
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> multiple(0, 12);
    for (int trial = 0; trial < 10; ++trial) {
        const int m = multiple(rng);
        const double t0 = m * base.qubit_period() / 4;
        const auto shifted = propagate_shifted(base, t0);
        const auto zrot = UnitarySU2<>::rotation_z(base.omega0 * t0);
        const auto expected = zrot.adjoint() * u0 * zrot;
        const double sign = shifted.wxyz().dot(expected.wxyz()) >= 0 ? 1.0 : -1.0;
        CAPTURE(m);
        CHECK((shifted.wxyz() - sign * expected.wxyz()).cwiseAbs().maxCoeff() < 1e-8);
    }
}
