#include "mrfm/physics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mrfm {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

void require_positive(double value, const char* name) {
    if (!std::isfinite(value) || value <= 0.0)
        throw std::domain_error(std::string("physics: ") + name + " must be finite and > 0");
}

}  // namespace

double delta_omega_hz(const PhysicsParams& params) {
    require_positive(params.spring_constant, "spring_constant");
    require_positive(params.resonant_frequency, "resonant_frequency");
    require_positive(params.rf_field, "rf_field");
    require_positive(params.field_gradient, "field_gradient");
    require_positive(params.magnetic_moment, "magnetic_moment");

    const double f0 = params.resonant_frequency / kTwoPi;
    const double g2 = params.field_gradient * params.field_gradient;
    return 0.5 * f0 * params.magnetic_moment * g2 / (params.spring_constant * params.rf_field);
}

}  // namespace mrfm
