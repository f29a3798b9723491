#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mrfm/detectors.hpp"
#include "mrfm/scenario.hpp"
#include "mrfm/telegraph.hpp"

namespace mrfm {

struct DetectorSpec {
    DetectorKind kind = DetectorKind::energy;
    SamplerConfig sampler;  // consulted by hybrid_glr only

    bool operator==(const DetectorSpec&) const = default;
};

/// Statistics from n_trials independent trials under each hypothesis.
struct TrialBatch {
    ScenarioConfig scenario;
    DetectorSpec detector;
    std::size_t n_trials = 0;
    std::uint64_t master_seed = 0;
    std::vector<double> statistics_h0;
    std::vector<double> statistics_h1;
};

struct RocPoint {
    double pf = 0.0;
    double pd = 0.0;

    bool operator==(const RocPoint&) const = default;
};

/// Empirical ROC: (P_F, P_D) as the threshold sweeps every observed value,
/// with (0,0) and (1,1) endpoints. Both coordinates are nondecreasing.
struct RocCurve {
    std::vector<RocPoint> points;
    double auc = 0.0;
    DetectorKind detector = DetectorKind::energy;
    std::size_t n_trials = 0;  // per hypothesis
    std::uint64_t master_seed = 0;
};

struct PowerPoint {
    double snr_db = 0.0;
    double pd = 0.0;
};

/// P_D vs SNR at a fixed false-alarm level alpha.
struct PowerCurve {
    double alpha = 0.0;
    std::vector<PowerPoint> entries;  // sorted by snr_db
    double flip_rate = 0.0;
    DetectorKind detector = DetectorKind::energy;
    std::size_t n_trials = 0;
    std::uint64_t master_seed = 0;
};

/// Everything one trial generates. The flip configuration doubles as the
/// matched filter's reference under H0, where the observation is pure noise.
struct TrialRealization {
    FlipConfig flips;
    SampledTrace clean;
    SampledTrace observation;
};

/// Deterministic trial generator: all randomness of trial (index, hypothesis)
/// comes from streams derived from (master_seed, hypothesis, index).
TrialRealization make_trial(const ScenarioConfig& scenario, std::uint64_t master_seed,
                            std::size_t trial_index, int hypothesis);

/// Runs n_trials per hypothesis for each detector on shared observations.
/// Statistics are independent of worker count and execution order. workers = 0
/// means hardware concurrency.
std::vector<TrialBatch> run_trials_multi(const ScenarioConfig& scenario,
                                         std::span<const DetectorSpec> specs,
                                         std::size_t n_trials, std::uint64_t master_seed,
                                         std::size_t workers = 0);

TrialBatch run_trials(const ScenarioConfig& scenario, const DetectorSpec& spec,
                      std::size_t n_trials, std::uint64_t master_seed, std::size_t workers = 0);

/// Exact empirical ROC over every observed threshold (strict ">" detection).
RocCurve empirical_roc(const TrialBatch& batch);

/// P_D at the largest achievable P_F <= alpha.
double pd_at_pf(const RocCurve& curve, double alpha);

/// One (snr, P_D at alpha) entry per grid point; each SNR runs an independent
/// batch under a seed derived from (master_seed, grid index).
PowerCurve power_curve(const ScenarioConfig& base, std::span<const double> snr_grid_db,
                       const DetectorSpec& spec, double alpha, std::size_t n_trials,
                       std::uint64_t master_seed, std::size_t workers = 0);

/// Power curves for several detectors sharing each SNR's observations.
std::vector<PowerCurve> power_curves_multi(const ScenarioConfig& base,
                                           std::span<const double> snr_grid_db,
                                           std::span<const DetectorSpec> specs, double alpha,
                                           std::size_t n_trials, std::uint64_t master_seed,
                                           std::size_t workers = 0);

/// SNR where the power curve crosses target_pd, by linear interpolation
/// between the bracketing grid points. Throws std::out_of_range (naming the
/// achievable P_D span) if the target is not bracketed.
double snr_at_pd(const PowerCurve& curve, double target_pd);

/// sqrt(p (1-p) / n): binomial standard deviation of an empirical rate.
double binomial_std(double p, std::size_t n);

}  // namespace mrfm
