#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qgate {

// Pulse envelope families. Each has a canonical window ratio T_d = T / tau_d:
// the envelope is truncated to |t| <= T/2 and defined as zero outside.
enum class EnvelopeKind { gaussian, sech, triangular, constant };

inline constexpr std::array<EnvelopeKind, 4> kAllEnvelopes = {
    EnvelopeKind::gaussian, EnvelopeKind::sech, EnvelopeKind::triangular, EnvelopeKind::constant};

template <typename Scalar = double>
constexpr Scalar default_window_ratio(EnvelopeKind kind) {
    switch (kind) {
        case EnvelopeKind::gaussian: return Scalar(5);
        case EnvelopeKind::sech: return Scalar(5);
        case EnvelopeKind::triangular: return Scalar(2);
        case EnvelopeKind::constant: return Scalar(1);
    }
    return Scalar(0);
}

// f0(u) at normalized time u = t / tau_d; zero outside |u| <= window_ratio/2.
// All envelopes are even, peak at 1, and take values in [0, 1].
template <typename Scalar>
Scalar envelope_value(EnvelopeKind kind, Scalar u, Scalar window_ratio) {
    if (std::abs(u) > window_ratio / 2) return Scalar(0);
    switch (kind) {
        case EnvelopeKind::gaussian:
            return std::exp(-(Scalar(2) * u) * (Scalar(2) * u));
        case EnvelopeKind::sech:
            return Scalar(1) / std::cosh(std::numbers::pi_v<Scalar> * u);
        case EnvelopeKind::triangular:
            return std::max(Scalar(0), Scalar(1) - std::abs(u));
        case EnvelopeKind::constant:
            return Scalar(1);
    }
    return Scalar(0);
}

template <typename Scalar>
Scalar envelope_value(EnvelopeKind kind, Scalar u) {
    return envelope_value(kind, u, default_window_ratio<Scalar>(kind));
}

inline const char* to_string(EnvelopeKind kind) {
    switch (kind) {
        case EnvelopeKind::gaussian: return "gaussian";
        case EnvelopeKind::sech: return "sech";
        case EnvelopeKind::triangular: return "triangular";
        case EnvelopeKind::constant: return "constant";
    }
    return "?";
}

inline EnvelopeKind parse_envelope(const std::string& name) {
    for (EnvelopeKind kind : kAllEnvelopes)
        if (name == to_string(kind)) return kind;
    throw std::invalid_argument("unknown envelope '" + name +
                                "' (expected gaussian|sech|triangular|constant)");
}

} // namespace qgate
