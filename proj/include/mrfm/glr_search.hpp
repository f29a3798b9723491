#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mrfm/random.hpp"
#include "mrfm/scenario.hpp"
#include "mrfm/telegraph.hpp"
#include "mrfm/trace.hpp"

namespace mrfm {

enum class SearchStrategy { prior_only, gibbs_sweep };

std::string_view to_string(SearchStrategy strategy);
SearchStrategy strategy_from_string(std::string_view name);

/// Controls the stochastic maximization over flip configurations.
///
/// prior_only draws `samples` independent configurations from the Poisson
/// prior. gibbs_sweep additionally runs `sweeps_per_sample` conditional
/// resampling passes per draw, evaluating after each; `burn_in` sweeps are
/// run (unevaluated) before the scored ones.
struct SamplerConfig {
    std::size_t samples = 5000;
    SearchStrategy strategy = SearchStrategy::prior_only;
    std::size_t sweeps_per_sample = 0;
    std::size_t burn_in = 0;

    bool operator==(const SamplerConfig&) const = default;
};

struct SearchResult {
    FlipConfig best_config;
    double best_objective = 0.0;
    std::vector<double> objective_trace;  // best-so-far after each evaluation
};

/// log(cosh(x)), stable for large |x| (switches to the asymptotic form
/// |x| + log1p(exp(-2|x|)) - log 2 above |x| = 30).
double log_cosh(double x);

/// Prefix sums P_n = sum_{k<n} y_k of a trace, with an access counter that
/// tests use to pin the O(N+1)-per-candidate evaluation cost.
class PrefixSums {
public:
    explicit PrefixSums(std::span<const double> values);

    double at(std::size_t i) const {
        ++reads_;
        return sums_[i];
    }
    std::size_t size() const { return sums_.size(); }  // sample_count + 1

    std::uint64_t access_count() const { return reads_; }
    void reset_access_count() const { reads_ = 0; }

private:
    std::vector<double> sums_;
    mutable std::uint64_t reads_ = 0;
};

/// <y, s+(config)> where s+ is the telegraph with initial polarity +1,
/// computed from segment differences of the prefix sums. Touches exactly
/// flip_count + 2 prefix entries.
double correlation_fast(const PrefixSums& prefix, const FlipConfig& config, double amplitude,
                        const SampleGrid& grid);

/// Scan statistic for one candidate configuration:
/// log cosh(<y, s+>/sigma^2) - <s+, s+>/(2 sigma^2).
/// The energy term M * amplitude^2 / (2 sigma^2) is configuration-independent.
double objective(const SampledTrace& y, const FlipConfig& config, double amplitude,
                 double noise_sigma);

/// One systematic-scan pass resampling each flip time uniformly between its
/// neighbors (tau_0 = 0, tau_{N+1} = T). Flip count and polarity unchanged.
FlipConfig gibbs_sweep(const FlipConfig& config, double duration, RandomStream& rng);

/// Maximizes the objective over sampled configurations. Candidate i draws
/// from rng.derive(i), so enlarging `samples` visits a superset of the
/// smaller run's candidates and the result is deterministic in (y, cfg, rng).
SearchResult search_max(const SampledTrace& y, const ScenarioConfig& scenario,
                        const SamplerConfig& cfg, const RandomStream& rng);

/// Evaluates an explicit candidate list (e.g. an exhaustive enumeration)
/// through the same objective path used by search_max.
SearchResult evaluate_candidates(const SampledTrace& y, std::span<const FlipConfig> candidates,
                                 double amplitude, double noise_sigma);

}  // namespace mrfm
