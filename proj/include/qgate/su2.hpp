#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

#include "qgate/errors.hpp"

namespace qgate {

template <typename Scalar>
inline constexpr Scalar pi_v = std::numbers::pi_v<Scalar>;

template <typename Scalar>
inline constexpr Scalar two_pi_v = Scalar(2) * std::numbers::pi_v<Scalar>;

enum class Axis { x, y, z };

inline const char* to_string(Axis a) {
    switch (a) {
        case Axis::x: return "x";
        case Axis::y: return "y";
        case Axis::z: return "z";
    }
    return "?";
}

// Rotation axis label and angle of a target gate R_axis(angle).
template <typename Scalar = double>
struct GateTarget {
    Axis axis = Axis::x;
    Scalar angle = Scalar(0); // radians, in [-2*pi, 2*pi]
};

// A 2x2 special-unitary operator stored as a unit quaternion (w, x, y, z)
// meaning U = w*I - i*(x*sx + y*sy + z*sz).
//
// Basis convention: states are (|0>, |1>) with sz = |1><1| - |0><0|, i.e.
//   sx = [[0, 1], [1, 0]],  sy = [[0, i], [-i, 0]],  sz = [[-1, 0], [0, 1]],
// which satisfies sx*sy = i*sz. The ground state (1, 0) has Bloch vector
// (0, 0, -1).
//
// Composition is the Hamilton quaternion product; the result is renormalized
// after every composition so unitarity never drifts over long products.
template <typename Scalar = double>
class UnitarySU2 {
public:
    using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
    using Vector4 = Eigen::Matrix<Scalar, 4, 1>;
    using Complex = std::complex<Scalar>;
    using Matrix2c = Eigen::Matrix<Complex, 2, 2>;

    UnitarySU2() : q_(Scalar(1), Scalar(0), Scalar(0), Scalar(0)) {}

    UnitarySU2(Scalar w, Scalar x, Scalar y, Scalar z) : q_(w, x, y, z) {
        const Scalar n = q_.norm();
        if (!(n > Scalar(0)) || !std::isfinite(n))
            throw std::invalid_argument("UnitarySU2: quaternion must be finite and nonzero");
        q_ /= n;
    }

    explicit UnitarySU2(const Vector4& wxyz)
        : UnitarySU2(wxyz[0], wxyz[1], wxyz[2], wxyz[3]) {}

    // exp(-i*angle*(axis.sigma)/2); axis must be unit length within 1e-9.
    static UnitarySU2 rotation(const Vector3& axis, Scalar angle) {
        const Scalar n = axis.norm();
        if (!(std::abs(n - Scalar(1)) <= Scalar(1e-9)))
            throw std::invalid_argument("rotation: axis must be a unit vector (zero-norm axes are invalid)");
        const Scalar c = std::cos(angle / 2);
        const Scalar s = std::sin(angle / 2);
        return UnitarySU2(c, s * axis[0] / n, s * axis[1] / n, s * axis[2] / n);
    }

    static UnitarySU2 rotation_x(Scalar angle) { return rotation(Vector3(1, 0, 0), angle); }
    static UnitarySU2 rotation_y(Scalar angle) { return rotation(Vector3(0, 1, 0), angle); }
    static UnitarySU2 rotation_z(Scalar angle) { return rotation(Vector3(0, 0, 1), angle); }

    static UnitarySU2 from_target(const GateTarget<Scalar>& t) {
        switch (t.axis) {
            case Axis::x: return rotation_x(t.angle);
            case Axis::y: return rotation_y(t.angle);
            case Axis::z: return rotation_z(t.angle);
        }
        throw std::invalid_argument("from_target: unknown axis");
    }

    Scalar w() const { return q_[0]; }
    Scalar x() const { return q_[1]; }
    Scalar y() const { return q_[2]; }
    Scalar z() const { return q_[3]; }
    const Vector4& wxyz() const { return q_; }

    // Rotation angle in [0, 2*pi] (2*pi only for U = -I).
    Scalar angle() const {
        const Scalar vn = q_.template tail<3>().norm();
        return Scalar(2) * std::atan2(vn, q_[0]);
    }

    // Unit rotation axis; conventionally +z when the angle is 0 mod 2*pi.
    Vector3 axis() const {
        const Vector3 v = q_.template tail<3>();
        const Scalar vn = v.norm();
        if (vn < Scalar(1e-15)) return Vector3(0, 0, 1);
        return v / vn;
    }

    UnitarySU2 adjoint() const { return UnitarySU2(q_[0], -q_[1], -q_[2], -q_[3]); }

    // Matrix product U_left * U_right == Hamilton product of the quaternions.
    friend UnitarySU2 operator*(const UnitarySU2& a, const UnitarySU2& b) {
        return UnitarySU2(hamilton(a.q_, b.q_));
    }

    Matrix2c matrix() const {
        Matrix2c m;
        m << Complex(q_[0], q_[3]), Complex(q_[2], -q_[1]),
             Complex(-q_[2], -q_[1]), Complex(q_[0], -q_[3]);
        return m;
    }

    // Hamilton product on (w, x, y, z) 4-vectors.
    static Vector4 hamilton(const Vector4& a, const Vector4& b) {
        const Scalar w1 = a[0], w2 = b[0];
        const Vector3 v1 = a.template tail<3>();
        const Vector3 v2 = b.template tail<3>();
        Vector4 r;
        r[0] = w1 * w2 - v1.dot(v2);
        r.template tail<3>() = w1 * v2 + w2 * v1 + v1.cross(v2);
        return r;
    }

private:
    Vector4 q_; // (w, x, y, z), unit norm
};

// F_e = |Tr(target^dagger * actual) / 2|^2. For SU(2) the half-trace of the
// relative rotation is the 4-dot of the quaternions, so this is just its
// square; it equals 1 iff actual = +/- target and ignores global sign.
template <typename Scalar>
Scalar entanglement_fidelity(const UnitarySU2<Scalar>& target, const UnitarySU2<Scalar>& actual) {
    const Scalar d = target.wxyz().dot(actual.wxyz());
    return d * d;
}

// F = 1/3 + 2*F_e/3 (two-level average over pure input states).
template <typename Scalar>
Scalar average_gate_fidelity(const UnitarySU2<Scalar>& target, const UnitarySU2<Scalar>& actual) {
    return (Scalar(1) + Scalar(2) * entanglement_fidelity(target, actual)) / Scalar(3);
}

template <typename Scalar = double>
struct ExponentXZ {
    Scalar ax = Scalar(0);
    Scalar az = Scalar(0);
};

// Coefficients (A_x, A_z) such that U = exp[-i*(A_x*sx + A_z*sz)/2], on the
// principal branch (total angle in [0, 2*pi]; -I maps to (2*pi, 0)). Inputs
// whose exponent has a sigma_y component above `tol` radians are rejected:
// that signals a pulse without even symmetry was propagated.
template <typename Scalar>
ExponentXZ<Scalar> exponent_xz(const UnitarySU2<Scalar>& u, Scalar tol = Scalar(1e-9)) {
    const Scalar vx = u.x(), vy = u.y(), vz = u.z();
    const Scalar vn = std::sqrt(vx * vx + vy * vy + vz * vz);
    if (vn < Scalar(1e-14)) {
        // Identity (w ~ +1) or -I (w ~ -1); no direction to attribute.
        if (u.w() > Scalar(0)) return {Scalar(0), Scalar(0)};
        return {two_pi_v<Scalar>, Scalar(0)};
    }
    const Scalar theta = Scalar(2) * std::atan2(vn, u.w());
    const Scalar ay = theta * vy / vn;
    if (std::abs(ay) > tol)
        throw SymmetryError("exponent_xz: sigma_y exponent component " + std::to_string(double(std::abs(ay))) +
                            " exceeds tolerance; propagated pulse is not even");
    return {theta * vx / vn, theta * vz / vn};
}

template <typename Scalar>
UnitarySU2<Scalar> from_exponent_xz(Scalar ax, Scalar az) {
    const Scalar theta = std::hypot(ax, az);
    if (theta < Scalar(1e-300)) return UnitarySU2<Scalar>();
    using V3 = typename UnitarySU2<Scalar>::Vector3;
    return UnitarySU2<Scalar>::rotation(V3(ax / theta, 0, az / theta), theta);
}

// --- state-vector helpers -------------------------------------------------

template <typename Scalar = double>
using Spinor = Eigen::Matrix<std::complex<Scalar>, 2, 1>;

template <typename Scalar>
Spinor<Scalar> operator*(const UnitarySU2<Scalar>& u, const Spinor<Scalar>& psi) {
    return u.matrix() * psi;
}

// (<sx>, <sy>, <sz>) in the basis convention above; ground (1,0) -> (0,0,-1).
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> bloch_vector(const Spinor<Scalar>& psi) {
    const std::complex<Scalar> c0 = psi[0], c1 = psi[1];
    const std::complex<Scalar> cross = std::conj(c0) * c1;
    Eigen::Matrix<Scalar, 3, 1> r;
    r[0] = Scalar(2) * cross.real();
    r[1] = Scalar(-2) * cross.imag();
    r[2] = std::norm(c1) - std::norm(c0);
    return r;
}

} // namespace qgate
