#pragma once

#include "mrfm/sample_grid.hpp"

namespace mrfm {

/// Full generative description of one experiment condition. noise_sigma and
/// snr_db are kept mutually consistent by the factory functions:
/// SNR = 20 log10(amplitude / sigma), since |s(t)| == amplitude.
struct ScenarioConfig {
    double amplitude = 0.0;    // telegraph amplitude, Hz
    double flip_rate = 0.0;    // lambda, flips/s
    SampleGrid grid;
    double noise_sigma = 0.0;  // per-sample noise std dev, Hz
    double snr_db = 0.0;

    bool operator==(const ScenarioConfig&) const = default;
};

/// sigma = amplitude * 10^(-snr_db / 20).
double sigma_from_snr(double snr_db, double amplitude);

/// Inverse of sigma_from_snr; requires sigma > 0.
double snr_from_sigma(double sigma, double amplitude);

ScenarioConfig scenario_from_snr(double amplitude, double flip_rate, const SampleGrid& grid,
                                 double snr_db);
ScenarioConfig scenario_from_sigma(double amplitude, double flip_rate, const SampleGrid& grid,
                                   double sigma);

void validate_scenario(const ScenarioConfig& scenario);

}  // namespace mrfm
