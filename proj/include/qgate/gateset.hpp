#pragma once

#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include "qgate/dynamics.hpp"
#include "qgate/errors.hpp"
#include "qgate/pulse.hpp"
#include "qgate/su2.hpp"

namespace qgate {

// Optimized x-rotation pulses keyed by angle magnitude.
template <typename Scalar = double>
class GateLibrary {
public:
    void add(Scalar theta, const PulseSpec<Scalar>& spec) {
        if (!(theta > Scalar(0)))
            throw std::invalid_argument("GateLibrary: keys are positive angle magnitudes");
        entries_.emplace_back(theta, spec);
    }

    const PulseSpec<Scalar>* find(Scalar theta, Scalar tol = Scalar(1e-9)) const {
        for (const auto& [key, spec] : entries_)
            if (std::abs(key - theta) <= tol) return &spec;
        return nullptr;
    }

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

private:
    std::vector<std::pair<Scalar, PulseSpec<Scalar>>> entries_;
};

// One planned gate: either a base pulse translated by a quarter-period
// multiple t0 = m*T0/4 (axis and angle sign set by the parity of m), or a
// virtual z rotation that only advances the phase ledger.
template <typename Scalar = double>
struct GatePlan {
    bool has_pulse = false;
    PulseSpec<Scalar> base{};
    Scalar t0 = 0;            // pulse-center delay, absolute time
    int quarter_multiple = 0; // t0 / (T0/4)
    int k = 0;                // parity index: delays 2k*T0/4 and (2k+1)*T0/4
    GateTarget<Scalar> realized{Axis::z, Scalar(0)};
    Scalar virtual_z = 0;     // phase ledger entry, radians
};

// Map a target rotation onto a delayed library pulse. Delays of (2k)T0/4
// realize x rotations of angle (-1)^k * theta and delays of (2k+1)T0/4
// realize y rotations of angle (-1)^(k+1) * theta; the smallest nonnegative
// delay is chosen, keeping the drive amplitude and carrier-envelope phase
// untouched. z targets are virtual and consume no pulse time.
template <typename Scalar>
GatePlan<Scalar> plan_gate(const GateTarget<Scalar>& target, const GateLibrary<Scalar>& library) {
    if (!(std::abs(target.angle) <= pi_v<Scalar> + Scalar(1e-12)))
        throw std::invalid_argument("plan_gate: angle magnitude must not exceed pi");

    GatePlan<Scalar> plan;
    plan.realized = target;
    if (target.axis == Axis::z || target.angle == Scalar(0)) {
        plan.virtual_z = target.axis == Axis::z ? target.angle : Scalar(0);
        return plan;
    }

    const Scalar mag = std::abs(target.angle);
    const PulseSpec<Scalar>* base = library.find(mag);
    if (!base) {
        std::ostringstream msg;
        msg << "plan_gate: library has no pulse for angle magnitude " << mag << " rad";
        throw PlanError(msg.str());
    }

    const bool positive = target.angle > Scalar(0);
    int m = 0;
    if (target.axis == Axis::x) {
        m = positive ? 0 : 2; // (-1)^k flips the x angle at odd k
    } else {
        m = positive ? 3 : 1; // (-1)^(k+1) flips the y angle at even k
    }
    plan.has_pulse = true;
    plan.base = *base;
    plan.quarter_multiple = m;
    plan.k = m / 2;
    plan.t0 = Scalar(m) * base->qubit_period() / 4;
    return plan;
}

// The unitary a plan promises to implement.
template <typename Scalar>
UnitarySU2<Scalar> planned_unitary(const GatePlan<Scalar>& plan) {
    if (!plan.has_pulse) return UnitarySU2<Scalar>::rotation_z(plan.virtual_z);
    return UnitarySU2<Scalar>::from_target(plan.realized);
}

template <typename Scalar = double>
struct VerifyReport {
    Scalar entanglement_fidelity = 1;
    UnitarySU2<Scalar> realized{};
    UnitarySU2<Scalar> planned{};
};

// Propagate the delayed pulse and compare with the planned gate. Virtual
// plans verify trivially; pulse plans inherit the propagator's accuracy.
template <typename Scalar>
VerifyReport<Scalar> verify_plan(const GatePlan<Scalar>& plan, Scalar refine = Scalar(1)) {
    VerifyReport<Scalar> report;
    report.planned = planned_unitary(plan);
    if (!plan.has_pulse) {
        report.realized = report.planned;
        return report;
    }
    report.realized = propagate_shifted(plan.base, plan.t0, refine);
    report.entanglement_fidelity = entanglement_fidelity(report.realized, report.planned);
    return report;
}

} // namespace qgate
