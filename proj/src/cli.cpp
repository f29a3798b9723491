#include "mrfm/cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mrfm/csv_io.hpp"
#include "mrfm/experiment.hpp"
#include "mrfm/monte_carlo.hpp"

namespace mrfm::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct FlagOverlay {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<double> delta_omega, lambda, duration, ts, snr, sigma, alpha;
    std::optional<double> k, f0, b1, grad, mu;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials, samples, sweeps, burn_in, workers;
    std::optional<std::string> strategy;
    std::vector<std::string> detectors;
    std::vector<double> snr_grid;
    std::optional<double> snr_min, snr_max, snr_step;
    std::vector<std::size_t> study_samples;
};

void add_common_options(CLI::App* sub, FlagOverlay& fl) {
    sub->add_option("--config", fl.config_path, "JSON config file; flags override its fields");
    sub->add_option("--out", fl.out_dir, "output directory (default .)");
    sub->add_option("--seed", fl.seed, "master seed (overrides config file and MRFM_SEED)");
}

void add_scenario_options(CLI::App* sub, FlagOverlay& fl) {
    sub->add_option("--delta-omega", fl.delta_omega, "telegraph amplitude in Hz");
    sub->add_option("--k", fl.k, "cantilever spring constant, N/m");
    sub->add_option("--f0", fl.f0, "cantilever resonant frequency, Hz");
    sub->add_option("--b1", fl.b1, "rf field amplitude, T");
    sub->add_option("--grad", fl.grad, "field gradient, T/m");
    sub->add_option("--mu", fl.mu, "spin magnetic moment, J/T");
    sub->add_option("--lambda", fl.lambda, "average flip rate, flips/s");
    sub->add_option("--duration", fl.duration, "measurement duration T, s");
    sub->add_option("--ts", fl.ts, "sampling period T_s, s");
    sub->add_option("--snr", fl.snr, "SNR in dB (sets the noise level)");
    sub->add_option("--sigma", fl.sigma, "per-sample noise std dev in Hz");
}

void add_run_options(CLI::App* sub, FlagOverlay& fl) {
    sub->add_option("--trials", fl.trials, "trials per hypothesis");
    sub->add_option("--alpha", fl.alpha, "false-alarm level for P_D reporting");
    sub->add_option("--workers", fl.workers, "worker threads (0 = hardware)");
    sub->add_option("--detectors", fl.detectors, "comma-separated detector list")
        ->delimiter(',');
    sub->add_option("--sampler-strategy", fl.strategy, "prior-only or gibbs-sweep");
    sub->add_option("--sweeps", fl.sweeps, "Gibbs sweeps per sample (gibbs-sweep strategy)");
    sub->add_option("--burn-in", fl.burn_in, "unevaluated Gibbs sweeps per sample");
}

bool any_physics_flag(const FlagOverlay& fl) {
    return fl.k || fl.f0 || fl.b1 || fl.grad || fl.mu;
}

PhysicsParams physics_from_flags(const FlagOverlay& fl, const std::optional<PhysicsParams>& base) {
    PhysicsParams p = base.value_or(PhysicsParams{});
    if (fl.k) p.spring_constant = *fl.k;
    if (fl.f0) p.resonant_frequency = 2.0 * 3.14159265358979323846 * *fl.f0;
    if (fl.b1) p.rf_field = *fl.b1;
    if (fl.grad) p.field_gradient = *fl.grad;
    if (fl.mu) p.magnetic_moment = *fl.mu;
    if (!base && !(fl.k && fl.f0 && fl.b1 && fl.grad && fl.mu))
        throw ConfigError("config: physics requires all of --k --f0 --b1 --grad --mu");
    return p;
}

std::optional<std::uint64_t> seed_from_env() {
    const char* text = std::getenv("MRFM_SEED");
    if (text == nullptr || *text == '\0') return std::nullopt;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(text, &end, 10);
    if (end == text || *end != '\0')
        throw ConfigError("config: MRFM_SEED: not a valid unsigned integer");
    return static_cast<std::uint64_t>(v);
}

/// defaults < config file < MRFM_SEED (seed only) < flags.
ExperimentConfig resolve_config(const FlagOverlay& fl) {
    ExperimentConfig cfg;
    bool file_has_seed = false;
    if (!fl.config_path.empty()) {
        std::ifstream in(fl.config_path);
        if (!in) throw ConfigError("config: cannot open '" + fl.config_path + "'");
        std::ostringstream text;
        text << in.rdbuf();
        json doc;
        try {
            doc = json::parse(text.str());
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("config: invalid JSON: ") + e.what());
        }
        file_has_seed = doc.is_object() && doc.contains("seed");
        cfg = config_fields_from_json(doc);
    }

    if (fl.delta_omega && any_physics_flag(fl))
        throw ConfigError("config: --delta-omega and physics flags are mutually exclusive");
    if (fl.delta_omega) {
        cfg.delta_omega_hz = fl.delta_omega;
        cfg.physics.reset();
    } else if (any_physics_flag(fl)) {
        cfg.physics = physics_from_flags(fl, cfg.physics);
        cfg.delta_omega_hz.reset();
    }

    if (fl.snr && fl.sigma)
        throw ConfigError("config: --snr and --sigma are mutually exclusive");
    if (fl.snr) {
        cfg.snr_db = fl.snr;
        cfg.noise_sigma.reset();
    } else if (fl.sigma) {
        cfg.noise_sigma = fl.sigma;
        cfg.snr_db.reset();
    }

    if (fl.lambda) cfg.flip_rate = *fl.lambda;
    if (fl.duration) cfg.duration_s = *fl.duration;
    if (fl.ts) cfg.sample_period_s = *fl.ts;
    if (fl.trials) cfg.n_trials = *fl.trials;
    if (fl.alpha) cfg.alpha = *fl.alpha;
    if (fl.workers) cfg.workers = *fl.workers;
    if (fl.samples) cfg.sampler.samples = *fl.samples;
    if (fl.sweeps) cfg.sampler.sweeps_per_sample = *fl.sweeps;
    if (fl.burn_in) cfg.sampler.burn_in = *fl.burn_in;
    if (fl.strategy) {
        try {
            cfg.sampler.strategy = strategy_from_string(*fl.strategy);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("config: --sampler-strategy: ") + e.what());
        }
    }
    if (!fl.detectors.empty()) {
        cfg.detectors.clear();
        for (const std::string& name : fl.detectors) {
            try {
                cfg.detectors.push_back(detector_from_string(name));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("config: --detectors: ") + e.what());
            }
        }
    }

    if (!fl.snr_grid.empty() && (fl.snr_min || fl.snr_max || fl.snr_step))
        throw ConfigError("config: --snr-grid and --snr-min/--snr-max/--snr-step are exclusive");
    if (!fl.snr_grid.empty()) {
        cfg.snr_grid = fl.snr_grid;
    } else if (fl.snr_min || fl.snr_max || fl.snr_step) {
        const double lo = fl.snr_min.value_or(-32.0);
        const double hi = fl.snr_max.value_or(-8.0);
        const double step = fl.snr_step.value_or(1.5);
        if (!(step > 0.0) || hi < lo)
            throw ConfigError("config: SNR grid requires step > 0 and max >= min");
        cfg.snr_grid.clear();
        for (double snr = lo; snr <= hi + 1e-9; snr += step) cfg.snr_grid.push_back(snr);
    }
    if (!fl.study_samples.empty()) cfg.study_samples = fl.study_samples;

    if (fl.seed) {
        cfg.master_seed = *fl.seed;
    } else if (!file_has_seed) {
        if (const auto env = seed_from_env()) cfg.master_seed = *env;
    }
    return cfg;
}

fs::path prepare_out_dir(const std::string& out_dir) {
    fs::path dir(out_dir);
    if (!dir.empty()) fs::create_directories(dir);
    return dir;
}

std::size_t write_file(const fs::path& path, const std::function<std::size_t(std::ostream&)>& fn) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    const std::size_t bytes = fn(out);
    out.flush();
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
    return bytes;
}

void write_summary(const fs::path& dir, const std::string& command, const ExperimentConfig& cfg,
                   double wall_time_s, const std::vector<std::string>& outputs,
                   const json& metrics) {
    json summary;
    summary["command"] = command;
    summary["version"] = std::string(kVersion);
    summary["config"] = to_json(cfg);
    summary["config_hash"] = config_hash(cfg);
    summary["master_seed"] = cfg.master_seed;
    summary["workers"] = cfg.workers;
    summary["wall_time_s"] = wall_time_s;
    summary["outputs"] = outputs;
    summary["metrics"] = metrics;
    write_file(dir / "summary.json", [&](std::ostream& out) {
        const std::string text = summary.dump(2) + "\n";
        out << text;
        return text.size();
    });
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

int do_physics(const FlagOverlay& fl) {
    ExperimentConfig cfg;
    if (!fl.config_path.empty()) cfg = resolve_config(fl);
    if (any_physics_flag(fl) || !cfg.physics)
        cfg.physics = physics_from_flags(fl, cfg.physics);
    cfg.delta_omega_hz.reset();
    if (fl.seed) cfg.master_seed = *fl.seed;

    Timer timer;
    const double shift_hz = delta_omega_hz(*cfg.physics);
    char line[64];
    std::snprintf(line, sizeof(line), "%.6f\n", shift_hz);
    std::cout << line;

    const fs::path dir = prepare_out_dir(fl.out_dir);
    write_summary(dir, "physics", cfg, timer.seconds(), {},
                  json{{"delta_omega_hz", shift_hz}});
    return 0;
}

int do_trace(const FlagOverlay& fl) {
    const ExperimentConfig cfg = resolve_config(fl);
    validate_config(cfg);
    const ScenarioConfig scenario = cfg.scenario();

    Timer timer;
    const TrialRealization trial = make_trial(scenario, cfg.master_seed, 0, 1);
    const fs::path dir = prepare_out_dir(fl.out_dir);
    write_file(dir / "trace.csv", [&](std::ostream& out) {
        return write_trace_csv(trial.clean, trial.observation, out);
    });

    json metrics{{"amplitude_hz", scenario.amplitude},
                 {"noise_sigma_hz", scenario.noise_sigma},
                 {"snr_db", scenario.snr_db},
                 {"flip_count", trial.flips.flip_count()}};
    write_summary(dir, "trace", cfg, timer.seconds(), {"trace.csv"}, metrics);
    std::cout << "wrote " << (dir / "trace.csv").string() << " (" << trial.flips.flip_count()
              << " flips)\n";
    return 0;
}

int do_roc(const FlagOverlay& fl) {
    const ExperimentConfig cfg = resolve_config(fl);
    validate_config(cfg);
    const ScenarioConfig scenario = cfg.scenario();
    const std::vector<DetectorSpec> specs = cfg.detector_specs();

    Timer timer;
    const std::vector<TrialBatch> batches =
        run_trials_multi(scenario, specs, cfg.n_trials, cfg.master_seed, cfg.workers);

    const fs::path dir = prepare_out_dir(fl.out_dir);
    std::vector<std::string> outputs;
    json metrics;
    for (const TrialBatch& batch : batches) {
        const RocCurve curve = empirical_roc(batch);
        const std::string name = "roc_" + std::string(to_string(curve.detector)) + ".csv";
        write_file(dir / name, [&](std::ostream& out) { return write_roc_csv(curve, out); });
        outputs.push_back(name);
        const double pd = pd_at_pf(curve, cfg.alpha);
        metrics[std::string(to_string(curve.detector))] = {{"auc", curve.auc},
                                                           {"pd_at_alpha", pd}};
        std::cout << to_string(curve.detector) << ": auc=" << curve.auc
                  << " pd@" << cfg.alpha << "=" << pd << "\n";
    }
    write_summary(dir, "roc", cfg, timer.seconds(), outputs, metrics);
    return 0;
}

int do_power(const FlagOverlay& fl) {
    const ExperimentConfig cfg = resolve_config(fl);
    validate_config(cfg);
    const ScenarioConfig base = cfg.scenario();
    const std::vector<DetectorSpec> specs = cfg.detector_specs();
    const std::vector<double> grid = cfg.resolved_snr_grid();

    Timer timer;
    const std::vector<PowerCurve> curves =
        power_curves_multi(base, grid, specs, cfg.alpha, cfg.n_trials, cfg.master_seed,
                           cfg.workers);

    const fs::path dir = prepare_out_dir(fl.out_dir);
    std::vector<std::string> outputs;
    json metrics;
    for (const PowerCurve& curve : curves) {
        const std::string name = "power_" + std::string(to_string(curve.detector)) + ".csv";
        write_file(dir / name, [&](std::ostream& out) { return write_power_csv(curve, out); });
        outputs.push_back(name);
        json entry{{"pd_at_max_snr", curve.entries.back().pd}};
        try {
            entry["snr_db_at_pd_0.8"] = snr_at_pd(curve, 0.8);
        } catch (const std::out_of_range&) {
            entry["snr_db_at_pd_0.8"] = nullptr;
        }
        metrics[std::string(to_string(curve.detector))] = entry;
        std::cout << to_string(curve.detector) << ": ";
        if (entry["snr_db_at_pd_0.8"].is_null())
            std::cout << "P_D=0.8 not bracketed by the SNR grid\n";
        else
            std::cout << "P_D=0.8 at " << entry["snr_db_at_pd_0.8"].get<double>() << " dB\n";
    }
    write_summary(dir, "power", cfg, timer.seconds(), outputs, metrics);
    return 0;
}

int do_gibbs_study(const FlagOverlay& fl) {
    ExperimentConfig cfg = resolve_config(fl);
    cfg.detectors = {DetectorKind::hybrid_glr};
    validate_config(cfg);
    const ScenarioConfig scenario = cfg.scenario();

    Timer timer;
    const fs::path dir = prepare_out_dir(fl.out_dir);
    std::vector<std::string> outputs;
    json metrics;
    for (std::size_t samples : cfg.study_samples) {
        // A study size is an iteration budget. prior-only spends it on
        // independent prior draws; gibbs-sweep runs one chain per trial,
        // burn-in included in the budget.
        DetectorSpec spec{DetectorKind::hybrid_glr, cfg.sampler};
        if (cfg.sampler.strategy == SearchStrategy::prior_only) {
            spec.sampler.samples = samples;
        } else {
            spec.sampler.samples = 1;
            spec.sampler.burn_in = std::min(cfg.sampler.burn_in, samples - 1);
            spec.sampler.sweeps_per_sample = samples - 1 - spec.sampler.burn_in;
        }
        const TrialBatch batch =
            run_trials(scenario, spec, cfg.n_trials, cfg.master_seed, cfg.workers);
        const RocCurve curve = empirical_roc(batch);
        const std::string name = "roc_hybrid_s" + std::to_string(samples) + ".csv";
        write_file(dir / name, [&](std::ostream& out) { return write_roc_csv(curve, out); });
        outputs.push_back(name);
        const double pd = pd_at_pf(curve, cfg.alpha);
        metrics[std::to_string(samples)] = {{"auc", curve.auc}, {"pd_at_alpha", pd}};
        std::cout << "samples=" << samples << ": auc=" << curve.auc << " pd@" << cfg.alpha << "="
                  << pd << "\n";
    }
    write_summary(dir, "gibbs-study", cfg, timer.seconds(), outputs, metrics);
    return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
    CLI::App app{"Single-spin MRFM baseband detection simulator"};
    app.require_subcommand(1);

    FlagOverlay fl;
    CLI::App* physics = app.add_subcommand("physics", "evaluate the spin-induced frequency shift");
    physics->add_option("--k", fl.k, "cantilever spring constant, N/m");
    physics->add_option("--f0", fl.f0, "cantilever resonant frequency, Hz");
    physics->add_option("--b1", fl.b1, "rf field amplitude, T");
    physics->add_option("--grad", fl.grad, "field gradient, T/m");
    physics->add_option("--mu", fl.mu, "spin magnetic moment, J/T");
    add_common_options(physics, fl);

    CLI::App* trace = app.add_subcommand("trace", "emit one telegraph/observation realization");
    add_scenario_options(trace, fl);
    add_common_options(trace, fl);

    CLI::App* roc = app.add_subcommand("roc", "empirical ROC curve per detector");
    add_scenario_options(roc, fl);
    add_run_options(roc, fl);
    roc->add_option("--samples", fl.samples, "GLR sampler iterations");
    add_common_options(roc, fl);

    CLI::App* power = app.add_subcommand("power", "P_D vs SNR at fixed false-alarm level");
    add_scenario_options(power, fl);
    add_run_options(power, fl);
    power->add_option("--samples", fl.samples, "GLR sampler iterations");
    power->add_option("--snr-grid", fl.snr_grid, "comma-separated SNR grid, dB")->delimiter(',');
    power->add_option("--snr-min", fl.snr_min, "SNR grid start, dB");
    power->add_option("--snr-max", fl.snr_max, "SNR grid end, dB");
    power->add_option("--snr-step", fl.snr_step, "SNR grid step, dB");
    add_common_options(power, fl);

    CLI::App* study = app.add_subcommand("gibbs-study", "hybrid ROC vs sampler size");
    add_scenario_options(study, fl);
    add_run_options(study, fl);
    study->add_option("--samples", fl.study_samples, "comma-separated sampler sizes")
        ->delimiter(',');
    add_common_options(study, fl);

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const std::string& arg : args) argv.push_back(arg.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(physics)) return do_physics(fl);
        if (app.got_subcommand(trace)) return do_trace(fl);
        if (app.got_subcommand(roc)) return do_roc(fl);
        if (app.got_subcommand(power)) return do_power(fl);
        if (app.got_subcommand(study)) return do_gibbs_study(fl);
        std::cerr << "error: no subcommand selected\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace mrfm::cli
