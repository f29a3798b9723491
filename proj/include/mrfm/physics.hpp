#pragma once

namespace mrfm {

/// Cantilever and spin constants that set the spin-induced frequency shift.
struct PhysicsParams {
    double spring_constant = 0.0;     // k, N/m
    double resonant_frequency = 0.0;  // omega_o, rad/s
    double rf_field = 0.0;            // B1, T
    double field_gradient = 0.0;      // G, T/m
    double magnetic_moment = 0.0;     // |mu|, J/T

    bool operator==(const PhysicsParams&) const = default;
};

/// Magnitude of the spin-induced cantilever frequency shift, in Hz:
/// (1/2) * (omega_o / 2pi) * |mu| G^2 / (k B1).
/// Throws std::domain_error if any field is non-finite or non-positive.
double delta_omega_hz(const PhysicsParams& params);

}  // namespace mrfm
