#include "mrfm/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace mrfm {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config: " + path + ": " + what);
}

void check_known_keys(const json& obj, const std::string& path,
                      const std::set<std::string>& known) {
    for (const auto& [key, value] : obj.items())
        if (!known.contains(key)) fail(path.empty() ? key : path + "." + key, "unknown field");
}

double get_number(const json& obj, const std::string& path) {
    if (!obj.is_number()) fail(path, "expected a number");
    return obj.get<double>();
}

std::size_t get_count(const json& obj, const std::string& path, std::size_t min_value) {
    if (!obj.is_number_unsigned()) fail(path, "expected a nonnegative integer");
    const auto v = obj.get<std::uint64_t>();
    if (v < min_value) fail(path, "must be >= " + std::to_string(min_value));
    return static_cast<std::size_t>(v);
}

PhysicsParams physics_from_json(const json& obj) {
    if (!obj.is_object()) fail("physics", "expected an object");
    check_known_keys(obj, "physics", {"k", "f0", "b1", "grad", "mu"});
    for (const char* key : {"k", "f0", "b1", "grad", "mu"})
        if (!obj.contains(key)) fail(std::string("physics.") + key, "missing field");
    PhysicsParams p;
    p.spring_constant = get_number(obj["k"], "physics.k");
    p.resonant_frequency = 2.0 * 3.14159265358979323846 * get_number(obj["f0"], "physics.f0");
    p.rf_field = get_number(obj["b1"], "physics.b1");
    p.field_gradient = get_number(obj["grad"], "physics.grad");
    p.magnetic_moment = get_number(obj["mu"], "physics.mu");
    return p;
}

}  // namespace

double ExperimentConfig::amplitude() const {
    if (delta_omega_hz) return *delta_omega_hz;
    if (physics) return mrfm::delta_omega_hz(*physics);
    throw ConfigError("config: one of delta_omega_hz or physics is required");
}

double ExperimentConfig::sigma() const {
    if (noise_sigma) return *noise_sigma;
    if (snr_db) return sigma_from_snr(*snr_db, amplitude());
    throw ConfigError("config: one of snr_db or sigma is required");
}

ScenarioConfig ExperimentConfig::scenario() const {
    const SampleGrid grid = make_grid(duration_s, sample_period_s);
    if (noise_sigma) return scenario_from_sigma(amplitude(), flip_rate, grid, *noise_sigma);
    if (snr_db) return scenario_from_snr(amplitude(), flip_rate, grid, *snr_db);
    throw ConfigError("config: one of snr_db or sigma is required");
}

std::vector<double> ExperimentConfig::resolved_snr_grid() const {
    if (!snr_grid.empty()) {
        std::vector<double> grid = snr_grid;
        std::sort(grid.begin(), grid.end());
        return grid;
    }
    std::vector<double> grid;
    for (double snr = -32.0; snr <= -8.0 + 1e-9; snr += 1.5) grid.push_back(snr);
    return grid;
}

std::vector<DetectorSpec> ExperimentConfig::detector_specs() const {
    std::vector<DetectorSpec> specs;
    specs.reserve(detectors.size());
    for (DetectorKind kind : detectors) specs.push_back(DetectorSpec{kind, sampler});
    return specs;
}

ExperimentConfig config_fields_from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config: document root must be a JSON object");
    check_known_keys(doc, "",
                     {"delta_omega_hz", "physics", "lambda", "duration_s", "sample_period_s",
                      "snr_db", "sigma", "detectors", "sampler", "n_trials", "alpha", "seed",
                      "workers", "snr_grid", "study_samples"});

    ExperimentConfig cfg;
    if (doc.contains("delta_omega_hz")) {
        const double v = get_number(doc["delta_omega_hz"], "delta_omega_hz");
        if (!std::isfinite(v) || v <= 0.0) fail("delta_omega_hz", "must be finite and > 0");
        cfg.delta_omega_hz = v;
    }
    if (doc.contains("physics")) cfg.physics = physics_from_json(doc["physics"]);
    if (cfg.delta_omega_hz && cfg.physics)
        throw ConfigError("config: delta_omega_hz and physics are mutually exclusive");

    if (doc.contains("lambda")) {
        cfg.flip_rate = get_number(doc["lambda"], "lambda");
        if (!std::isfinite(cfg.flip_rate) || cfg.flip_rate < 0.0)
            fail("lambda", "must be finite and >= 0");
    }
    if (doc.contains("duration_s")) cfg.duration_s = get_number(doc["duration_s"], "duration_s");
    if (doc.contains("sample_period_s"))
        cfg.sample_period_s = get_number(doc["sample_period_s"], "sample_period_s");

    if (doc.contains("snr_db")) cfg.snr_db = get_number(doc["snr_db"], "snr_db");
    if (doc.contains("sigma")) {
        const double v = get_number(doc["sigma"], "sigma");
        if (!std::isfinite(v) || v < 0.0) fail("sigma", "must be finite and >= 0");
        cfg.noise_sigma = v;
    }
    if (cfg.snr_db && cfg.noise_sigma)
        throw ConfigError("config: snr_db and sigma are mutually exclusive");

    if (doc.contains("detectors")) {
        const json& arr = doc["detectors"];
        if (!arr.is_array() || arr.empty()) fail("detectors", "expected a nonempty array");
        cfg.detectors.clear();
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string path = "detectors[" + std::to_string(i) + "]";
            if (!arr[i].is_string()) fail(path, "expected a string");
            try {
                cfg.detectors.push_back(detector_from_string(arr[i].get<std::string>()));
            } catch (const std::invalid_argument& e) {
                fail(path, e.what());
            }
        }
        std::set<DetectorKind> seen(cfg.detectors.begin(), cfg.detectors.end());
        if (seen.size() != cfg.detectors.size()) fail("detectors", "duplicate detector");
    }

    if (doc.contains("sampler")) {
        const json& obj = doc["sampler"];
        if (!obj.is_object()) fail("sampler", "expected an object");
        check_known_keys(obj, "sampler", {"samples", "strategy", "sweeps_per_sample", "burn_in"});
        if (obj.contains("samples"))
            cfg.sampler.samples = get_count(obj["samples"], "sampler.samples", 1);
        if (obj.contains("strategy")) {
            if (!obj["strategy"].is_string()) fail("sampler.strategy", "expected a string");
            try {
                cfg.sampler.strategy = strategy_from_string(obj["strategy"].get<std::string>());
            } catch (const std::invalid_argument& e) {
                fail("sampler.strategy", e.what());
            }
        }
        if (obj.contains("sweeps_per_sample"))
            cfg.sampler.sweeps_per_sample =
                get_count(obj["sweeps_per_sample"], "sampler.sweeps_per_sample", 0);
        if (obj.contains("burn_in")) cfg.sampler.burn_in = get_count(obj["burn_in"], "sampler.burn_in", 0);
    }

    if (doc.contains("n_trials")) cfg.n_trials = get_count(doc["n_trials"], "n_trials", 1);
    if (doc.contains("alpha")) {
        cfg.alpha = get_number(doc["alpha"], "alpha");
        if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) fail("alpha", "must lie in [0, 1]");
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) fail("seed", "expected a nonnegative integer");
        cfg.master_seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("workers")) cfg.workers = get_count(doc["workers"], "workers", 0);

    if (doc.contains("snr_grid")) {
        const json& arr = doc["snr_grid"];
        if (!arr.is_array()) fail("snr_grid", "expected an array of numbers");
        cfg.snr_grid.clear();
        for (std::size_t i = 0; i < arr.size(); ++i)
            cfg.snr_grid.push_back(get_number(arr[i], "snr_grid[" + std::to_string(i) + "]"));
    }
    if (doc.contains("study_samples")) {
        const json& arr = doc["study_samples"];
        if (!arr.is_array() || arr.empty()) fail("study_samples", "expected a nonempty array");
        cfg.study_samples.clear();
        for (std::size_t i = 0; i < arr.size(); ++i)
            cfg.study_samples.push_back(
                get_count(arr[i], "study_samples[" + std::to_string(i) + "]", 1));
    }

    return cfg;
}

void validate_config(const ExperimentConfig& config) {
    if (config.delta_omega_hz && config.physics)
        throw ConfigError("config: delta_omega_hz and physics are mutually exclusive");
    if (!config.delta_omega_hz && !config.physics)
        throw ConfigError("config: one of delta_omega_hz or physics is required");
    if (config.snr_db && config.noise_sigma)
        throw ConfigError("config: snr_db and sigma are mutually exclusive");
    if (!config.snr_db && !config.noise_sigma)
        throw ConfigError("config: one of snr_db or sigma is required");
    if (config.detectors.empty()) throw ConfigError("config: detectors: must not be empty");
    if (config.sampler.samples < 1) throw ConfigError("config: sampler.samples: must be >= 1");
    if (config.n_trials < 1) throw ConfigError("config: n_trials: must be >= 1");
    if (!(config.alpha >= 0.0 && config.alpha <= 1.0))
        throw ConfigError("config: alpha: must lie in [0, 1]");
    const bool has_hybrid = std::find(config.detectors.begin(), config.detectors.end(),
                                      DetectorKind::hybrid_glr) != config.detectors.end();
    // Grid, amplitude and noise invariants all surface through scenario().
    try {
        const ScenarioConfig scenario = config.scenario();
        if (has_hybrid && !(scenario.noise_sigma > 0.0))
            throw ConfigError("config: hybrid_glr requires noise sigma > 0");
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

ExperimentConfig config_from_json(const json& doc) {
    ExperimentConfig cfg = config_fields_from_json(doc);
    validate_config(cfg);
    return cfg;
}

ExperimentConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    return config_from_json(doc);
}

json to_json(const ExperimentConfig& config) {
    json doc;
    if (config.delta_omega_hz) doc["delta_omega_hz"] = *config.delta_omega_hz;
    if (config.physics) {
        doc["physics"] = {{"k", config.physics->spring_constant},
                          {"f0", config.physics->resonant_frequency / (2.0 * 3.14159265358979323846)},
                          {"b1", config.physics->rf_field},
                          {"grad", config.physics->field_gradient},
                          {"mu", config.physics->magnetic_moment}};
    }
    doc["lambda"] = config.flip_rate;
    doc["duration_s"] = config.duration_s;
    doc["sample_period_s"] = config.sample_period_s;
    if (config.snr_db) doc["snr_db"] = *config.snr_db;
    if (config.noise_sigma) doc["sigma"] = *config.noise_sigma;
    json detectors = json::array();
    for (DetectorKind kind : config.detectors) detectors.push_back(std::string(to_string(kind)));
    doc["detectors"] = std::move(detectors);
    doc["sampler"] = {{"samples", config.sampler.samples},
                      {"strategy", std::string(to_string(config.sampler.strategy))},
                      {"sweeps_per_sample", config.sampler.sweeps_per_sample},
                      {"burn_in", config.sampler.burn_in}};
    doc["n_trials"] = config.n_trials;
    doc["alpha"] = config.alpha;
    doc["seed"] = config.master_seed;
    doc["workers"] = config.workers;
    if (!config.snr_grid.empty()) doc["snr_grid"] = config.snr_grid;
    doc["study_samples"] = config.study_samples;
    return doc;
}

std::string config_hash(const ExperimentConfig& config) {
    const std::string text = to_json(config).dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace mrfm
