#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrfm/detectors.hpp"
#include "mrfm/glr_search.hpp"
#include "mrfm/monte_carlo.hpp"
#include "mrfm/physics.hpp"
#include "mrfm/scenario.hpp"

namespace mrfm {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fully resolved experiment description. Exactly one of
/// {delta_omega_hz, physics} and exactly one of {snr_db, noise_sigma} must be
/// set; the rest default to the standard operating values (T = 3 s,
/// T_s = 0.5 ms, 500 trials, 5000 sampler iterations, alpha = 0.1).
struct ExperimentConfig {
    std::optional<double> delta_omega_hz;
    std::optional<PhysicsParams> physics;
    double flip_rate = 1.0;
    double duration_s = 3.0;
    double sample_period_s = 5e-4;
    std::optional<double> snr_db;
    std::optional<double> noise_sigma;
    std::vector<DetectorKind> detectors = {DetectorKind::matched_filter, DetectorKind::amplitude,
                                           DetectorKind::energy, DetectorKind::hybrid_glr};
    SamplerConfig sampler;
    std::size_t n_trials = 500;
    double alpha = 0.1;
    std::uint64_t master_seed = 0;
    std::size_t workers = 0;                            // 0 = hardware concurrency
    std::vector<double> snr_grid;                       // power sweeps; empty = default grid
    std::vector<std::size_t> study_samples = {100, 500, 5000};

    bool operator==(const ExperimentConfig&) const = default;

    /// Telegraph amplitude in Hz, from delta_omega_hz or the physics params.
    double amplitude() const;
    /// Per-sample noise std dev in Hz, from noise_sigma or snr_db.
    double sigma() const;
    ScenarioConfig scenario() const;
    std::vector<double> resolved_snr_grid() const;
    std::vector<DetectorSpec> detector_specs() const;
};

/// Parses and validates a JSON config document. Unknown fields, type
/// mismatches and invariant violations raise ConfigError naming the field.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig config_from_json(const nlohmann::json& doc);

/// Field-level parse only; completeness rules are deferred so CLI flags can
/// fill in the remaining fields before validate_config runs.
ExperimentConfig config_fields_from_json(const nlohmann::json& doc);

/// Completeness and invariant checks (exactly-one-of groups, grid, scenario).
void validate_config(const ExperimentConfig& config);

nlohmann::json to_json(const ExperimentConfig& config);

/// 16-hex digest of the canonical serialized config (FNV-1a 64).
std::string config_hash(const ExperimentConfig& config);

}  // namespace mrfm
