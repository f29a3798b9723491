#include "mrfm/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace mrfm {

namespace {

// Lane layout under each trial's stream: 0 flips, 1 noise, 2 GLR sampler.
constexpr std::uint64_t kFlipLane = 0;
constexpr std::uint64_t kNoiseLane = 1;
constexpr std::uint64_t kSamplerLane = 2;

// Lane separating power-curve batches from direct run_trials batches.
constexpr std::uint64_t kPowerLane = 0x706F776572ULL;

RandomStream trial_stream(std::uint64_t master_seed, int hypothesis, std::size_t trial_index) {
    return RandomStream(master_seed)
        .derive(hypothesis ? 1 : 0)
        .derive(static_cast<std::uint64_t>(trial_index));
}

/// Runs body(0..count-1) on `workers` threads. Each index must be an
/// independent unit of work; results may not depend on scheduling.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& body) {
    if (workers == 0) workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;

    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

TrialRealization make_trial(const ScenarioConfig& scenario, std::uint64_t master_seed,
                            std::size_t trial_index, int hypothesis) {
    const RandomStream base = trial_stream(master_seed, hypothesis, trial_index);
    RandomStream flip_rng = base.derive(kFlipLane);
    RandomStream noise_rng = base.derive(kNoiseLane);

    TrialRealization trial;
    trial.flips = sample_flip_config(scenario.flip_rate, scenario.grid, flip_rng);
    trial.clean = synthesize_telegraph(trial.flips, scenario.amplitude, scenario.grid);
    if (hypothesis) {
        trial.observation = add_awgn(trial.clean, scenario.noise_sigma, noise_rng);
    } else {
        trial.observation =
            add_awgn(zero_trace(scenario.grid, TraceRole::clean), scenario.noise_sigma, noise_rng);
    }
    return trial;
}

std::vector<TrialBatch> run_trials_multi(const ScenarioConfig& scenario,
                                         std::span<const DetectorSpec> specs,
                                         std::size_t n_trials, std::uint64_t master_seed,
                                         std::size_t workers) {
    validate_scenario(scenario);
    if (n_trials < 1) throw std::invalid_argument("run_trials: n_trials must be >= 1");
    if (specs.empty()) throw std::invalid_argument("run_trials: at least one detector required");
    for (const DetectorSpec& spec : specs)
        if (spec.kind == DetectorKind::hybrid_glr && !(scenario.noise_sigma > 0.0))
            throw std::domain_error("run_trials: hybrid_glr requires noise sigma > 0");

    std::vector<TrialBatch> batches(specs.size());
    for (std::size_t s = 0; s < specs.size(); ++s) {
        batches[s].scenario = scenario;
        batches[s].detector = specs[s];
        batches[s].n_trials = n_trials;
        batches[s].master_seed = master_seed;
        batches[s].statistics_h0.resize(n_trials);
        batches[s].statistics_h1.resize(n_trials);
    }

    parallel_for(2 * n_trials, workers, [&](std::size_t unit) {
        const int hypothesis = unit < n_trials ? 0 : 1;
        const std::size_t i = hypothesis ? unit - n_trials : unit;
        try {
            const TrialRealization trial = make_trial(scenario, master_seed, i, hypothesis);
            const RandomStream sampler_rng =
                trial_stream(master_seed, hypothesis, i).derive(kSamplerLane);
            for (std::size_t s = 0; s < specs.size(); ++s) {
                double value = 0.0;
                switch (specs[s].kind) {
                    case DetectorKind::matched_filter:
                        value = matched_filter_stat(trial.observation, trial.clean).value;
                        break;
                    case DetectorKind::amplitude:
                        value = amplitude_stat(trial.observation).value;
                        break;
                    case DetectorKind::energy:
                        value = energy_stat(trial.observation).value;
                        break;
                    case DetectorKind::hybrid_glr:
                        value = hybrid_glr_stat(trial.observation, scenario, specs[s].sampler,
                                                sampler_rng)
                                    .value;
                        break;
                }
                (hypothesis ? batches[s].statistics_h1 : batches[s].statistics_h0)[i] = value;
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("trial " + std::to_string(i) + " (H" +
                                     std::to_string(hypothesis) + "): " + e.what());
        }
    });

    for (const TrialBatch& batch : batches)
        for (const auto* stats : {&batch.statistics_h0, &batch.statistics_h1})
            for (double v : *stats)
                if (!std::isfinite(v))
                    throw std::runtime_error("run_trials: non-finite statistic produced");
    return batches;
}

TrialBatch run_trials(const ScenarioConfig& scenario, const DetectorSpec& spec,
                      std::size_t n_trials, std::uint64_t master_seed, std::size_t workers) {
    return std::move(
        run_trials_multi(scenario, std::span(&spec, 1), n_trials, master_seed, workers).front());
}

RocCurve empirical_roc(const TrialBatch& batch) {
    if (batch.statistics_h0.empty() || batch.statistics_h1.empty())
        throw std::invalid_argument("roc: batch must contain trials under both hypotheses");

    std::vector<double> h0 = batch.statistics_h0;
    std::vector<double> h1 = batch.statistics_h1;
    std::sort(h0.begin(), h0.end());
    std::sort(h1.begin(), h1.end());

    std::vector<double> thresholds;
    thresholds.reserve(h0.size() + h1.size());
    thresholds.insert(thresholds.end(), h0.begin(), h0.end());
    thresholds.insert(thresholds.end(), h1.begin(), h1.end());
    std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    const double n0 = static_cast<double>(h0.size());
    const double n1 = static_cast<double>(h1.size());
    auto fraction_above = [](const std::vector<double>& sorted, double eta) {
        const auto first_above = std::upper_bound(sorted.begin(), sorted.end(), eta);
        return static_cast<double>(sorted.end() - first_above);
    };

    RocCurve curve;
    curve.detector = batch.detector.kind;
    curve.n_trials = batch.n_trials;
    curve.master_seed = batch.master_seed;
    curve.points.reserve(thresholds.size() + 2);
    curve.points.push_back({0.0, 0.0});
    for (double eta : thresholds)
        curve.points.push_back({fraction_above(h0, eta) / n0, fraction_above(h1, eta) / n1});
    curve.points.push_back({1.0, 1.0});

    double auc = 0.0;
    for (std::size_t k = 0; k + 1 < curve.points.size(); ++k) {
        const RocPoint& a = curve.points[k];
        const RocPoint& b = curve.points[k + 1];
        auc += (b.pf - a.pf) * (a.pd + b.pd) / 2.0;
    }
    curve.auc = auc;
    return curve;
}

double pd_at_pf(const RocCurve& curve, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("pd_at_pf: alpha must lie in [0, 1]");
    if (curve.points.empty()) throw std::invalid_argument("pd_at_pf: empty curve");
    // Last point with pf <= alpha; at equal pf the later point has the
    // larger pd, so this is the best operating point not exceeding alpha.
    double best = 0.0;
    for (const RocPoint& p : curve.points) {
        if (p.pf > alpha) break;
        best = p.pd;
    }
    return best;
}

std::vector<PowerCurve> power_curves_multi(const ScenarioConfig& base,
                                           std::span<const double> snr_grid_db,
                                           std::span<const DetectorSpec> specs, double alpha,
                                           std::size_t n_trials, std::uint64_t master_seed,
                                           std::size_t workers) {
    if (snr_grid_db.empty()) throw std::invalid_argument("power: SNR grid must be nonempty");
    std::vector<double> grid(snr_grid_db.begin(), snr_grid_db.end());
    std::sort(grid.begin(), grid.end());

    std::vector<PowerCurve> curves(specs.size());
    for (std::size_t s = 0; s < specs.size(); ++s) {
        curves[s].alpha = alpha;
        curves[s].flip_rate = base.flip_rate;
        curves[s].detector = specs[s].kind;
        curves[s].n_trials = n_trials;
        curves[s].master_seed = master_seed;
        curves[s].entries.reserve(grid.size());
    }

    for (std::size_t k = 0; k < grid.size(); ++k) {
        const ScenarioConfig scenario =
            scenario_from_snr(base.amplitude, base.flip_rate, base.grid, grid[k]);
        const std::uint64_t seed = derive_seed(derive_seed(master_seed, kPowerLane), k);
        const std::vector<TrialBatch> batches =
            run_trials_multi(scenario, specs, n_trials, seed, workers);
        for (std::size_t s = 0; s < specs.size(); ++s)
            curves[s].entries.push_back({grid[k], pd_at_pf(empirical_roc(batches[s]), alpha)});
    }
    return curves;
}

PowerCurve power_curve(const ScenarioConfig& base, std::span<const double> snr_grid_db,
                       const DetectorSpec& spec, double alpha, std::size_t n_trials,
                       std::uint64_t master_seed, std::size_t workers) {
    return std::move(power_curves_multi(base, snr_grid_db, std::span(&spec, 1), alpha, n_trials,
                                        master_seed, workers)
                         .front());
}

double snr_at_pd(const PowerCurve& curve, double target_pd) {
    if (curve.entries.empty()) throw std::invalid_argument("snr_at_pd: empty curve");
    for (const PowerPoint& p : curve.entries)
        if (p.pd == target_pd) return p.snr_db;
    for (std::size_t k = 0; k + 1 < curve.entries.size(); ++k) {
        const PowerPoint& a = curve.entries[k];
        const PowerPoint& b = curve.entries[k + 1];
        if ((a.pd - target_pd) * (b.pd - target_pd) < 0.0)
            return a.snr_db + (target_pd - a.pd) * (b.snr_db - a.snr_db) / (b.pd - a.pd);
    }
    double lo = curve.entries.front().pd;
    double hi = lo;
    for (const PowerPoint& p : curve.entries) {
        lo = std::min(lo, p.pd);
        hi = std::max(hi, p.pd);
    }
    throw std::out_of_range("snr_at_pd: target P_D " + std::to_string(target_pd) +
                            " not bracketed; achievable span [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "]");
}

double binomial_std(double p, std::size_t n) {
    if (n == 0) throw std::invalid_argument("binomial_std: n must be >= 1");
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace mrfm
