#include "mrfm/scenario.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mrfm {

double sigma_from_snr(double snr_db, double amplitude) {
    if (!std::isfinite(amplitude) || amplitude <= 0.0)
        throw std::invalid_argument("snr: amplitude must be finite and > 0");
    if (!std::isfinite(snr_db)) throw std::invalid_argument("snr: snr_db must be finite");
    return amplitude * std::pow(10.0, -snr_db / 20.0);
}

double snr_from_sigma(double sigma, double amplitude) {
    if (!std::isfinite(amplitude) || amplitude <= 0.0)
        throw std::invalid_argument("snr: amplitude must be finite and > 0");
    if (!std::isfinite(sigma) || sigma <= 0.0)
        throw std::invalid_argument("snr: sigma must be finite and > 0");
    return 20.0 * std::log10(amplitude / sigma);
}

ScenarioConfig scenario_from_snr(double amplitude, double flip_rate, const SampleGrid& grid,
                                 double snr_db) {
    ScenarioConfig out{amplitude, flip_rate, grid, sigma_from_snr(snr_db, amplitude), snr_db};
    validate_scenario(out);
    return out;
}

ScenarioConfig scenario_from_sigma(double amplitude, double flip_rate, const SampleGrid& grid,
                                   double sigma) {
    if (!std::isfinite(sigma) || sigma < 0.0)
        throw std::invalid_argument("scenario: sigma must be finite and >= 0");
    const double snr =
        sigma > 0.0 ? snr_from_sigma(sigma, amplitude) : std::numeric_limits<double>::infinity();
    ScenarioConfig out{amplitude, flip_rate, grid, sigma, snr};
    validate_scenario(out);
    return out;
}

void validate_scenario(const ScenarioConfig& scenario) {
    if (!std::isfinite(scenario.amplitude) || scenario.amplitude <= 0.0)
        throw std::invalid_argument("scenario: amplitude must be finite and > 0");
    if (!std::isfinite(scenario.flip_rate) || scenario.flip_rate < 0.0)
        throw std::invalid_argument("scenario: flip rate must be finite and >= 0");
    if (!std::isfinite(scenario.noise_sigma) || scenario.noise_sigma < 0.0)
        throw std::invalid_argument("scenario: noise sigma must be finite and >= 0");
    if (scenario.grid.sample_count < 2) throw std::invalid_argument("scenario: grid not initialized");
    if (scenario.noise_sigma > 0.0) {
        const double implied = snr_from_sigma(scenario.noise_sigma, scenario.amplitude);
        if (std::abs(implied - scenario.snr_db) > 1e-9)
            throw std::invalid_argument("scenario: snr_db and noise_sigma are inconsistent");
    }
}

}  // namespace mrfm
