#include "mrfm/glr_search.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mrfm {

std::string_view to_string(SearchStrategy strategy) {
    switch (strategy) {
        case SearchStrategy::prior_only: return "prior-only";
        case SearchStrategy::gibbs_sweep: return "gibbs-sweep";
    }
    throw std::logic_error("unknown search strategy");
}

SearchStrategy strategy_from_string(std::string_view name) {
    if (name == "prior-only") return SearchStrategy::prior_only;
    if (name == "gibbs-sweep") return SearchStrategy::gibbs_sweep;
    throw std::invalid_argument("unknown search strategy '" + std::string(name) +
                                "' (expected prior-only or gibbs-sweep)");
}

double log_cosh(double x) {
    const double ax = std::abs(x);
    if (ax > 30.0) {
        // cosh(x) = e^|x| (1 + e^{-2|x|}) / 2; the naive form overflows near 710.
        return ax + std::log1p(std::exp(-2.0 * ax)) - 0.6931471805599453;
    }
    return std::log(std::cosh(ax));
}

PrefixSums::PrefixSums(std::span<const double> values) {
    sums_.resize(values.size() + 1);
    sums_[0] = 0.0;
    double run = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        run += values[i];
        sums_[i + 1] = run;
    }
}

double correlation_fast(const PrefixSums& prefix, const FlipConfig& config, double amplitude,
                        const SampleGrid& grid) {
    // <y, s+> = amplitude * sum_j (-1)^j (P_{b_{j+1}} - P_{b_j}) over the
    // flip-segment boundaries; touches flip_count + 2 prefix entries.
    double sign = 1.0;
    double acc = 0.0;
    double prev = prefix.at(0);
    for (double tau : config.flip_times) {
        const double at_boundary = prefix.at(flip_boundary_index(tau, grid));
        acc += sign * (at_boundary - prev);
        prev = at_boundary;
        sign = -sign;
    }
    acc += sign * (prefix.at(grid.sample_count) - prev);
    return amplitude * acc;
}

namespace {

struct ObjectiveEvaluator {
    PrefixSums prefix;
    const SampleGrid& grid;
    double amplitude;
    double inv_sigma_sq;
    double energy_term;

    ObjectiveEvaluator(const SampledTrace& y, double amp, double noise_sigma)
        : prefix(y.values),
          grid(y.grid),
          amplitude(amp),
          inv_sigma_sq(1.0 / (noise_sigma * noise_sigma)),
          energy_term(0.5 * static_cast<double>(y.grid.sample_count) * amp * amp * inv_sigma_sq) {}

    double operator()(const FlipConfig& config) const {
        return log_cosh(correlation_fast(prefix, config, amplitude, grid) * inv_sigma_sq) -
               energy_term;
    }
};

void check_likelihood_inputs(const SampledTrace& y, double amplitude, double noise_sigma) {
    if (!std::isfinite(amplitude) || amplitude <= 0.0)
        throw std::invalid_argument("glr: amplitude must be finite and > 0");
    if (!std::isfinite(noise_sigma) || noise_sigma <= 0.0)
        throw std::domain_error("glr: noise sigma must be > 0 (likelihood ratio degenerates)");
    if (y.values.size() != y.grid.sample_count)
        throw std::invalid_argument("glr: trace does not match its grid");
}

void gibbs_sweep_inplace(FlipConfig& config, double duration, RandomStream& rng) {
    auto& times = config.flip_times;
    const std::size_t n = times.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = i == 0 ? 0.0 : times[i - 1];          // already updated
        const double hi = i + 1 < n ? times[i + 1] : duration;  // not yet updated
        // Keep the draw strictly interior; if the slot is so narrow that no
        // representable value fits, the current (valid) value stays.
        for (int attempt = 0; attempt < 64; ++attempt) {
            const double t = lo + rng.uniform_open01() * (hi - lo);
            if (t > lo && t < hi) {
                times[i] = t;
                break;
            }
        }
    }
}

}  // namespace

double objective(const SampledTrace& y, const FlipConfig& config, double amplitude,
                 double noise_sigma) {
    check_likelihood_inputs(y, amplitude, noise_sigma);
    validate_flip_config(config, y.grid.duration);
    const ObjectiveEvaluator eval(y, amplitude, noise_sigma);
    return eval(config);
}

FlipConfig gibbs_sweep(const FlipConfig& config, double duration, RandomStream& rng) {
    validate_flip_config(config, duration);
    FlipConfig out = config;
    gibbs_sweep_inplace(out, duration, rng);
    return out;
}

SearchResult search_max(const SampledTrace& y, const ScenarioConfig& scenario,
                        const SamplerConfig& cfg, const RandomStream& rng) {
    if (cfg.samples < 1) throw std::invalid_argument("sampler: samples must be >= 1");
    if (y.grid != scenario.grid)
        throw std::invalid_argument("glr: trace grid does not match scenario grid");
    check_likelihood_inputs(y, scenario.amplitude, scenario.noise_sigma);

    const ObjectiveEvaluator eval(y, scenario.amplitude, scenario.noise_sigma);
    const bool sweeping = cfg.strategy == SearchStrategy::gibbs_sweep;

    SearchResult result;
    result.best_objective = -std::numeric_limits<double>::infinity();
    result.objective_trace.reserve(cfg.samples * (1 + (sweeping ? cfg.sweeps_per_sample : 0)));

    FlipConfig candidate;
    auto consider = [&](const FlipConfig& config) {
        const double value = eval(config);
        if (value > result.best_objective) {
            result.best_objective = value;
            result.best_config = config;
        }
        result.objective_trace.push_back(result.best_objective);
    };

    for (std::size_t i = 0; i < cfg.samples; ++i) {
        RandomStream stream = rng.derive(i);
        sample_flip_config_into(scenario.flip_rate, scenario.grid, stream, candidate);
        consider(candidate);
        if (sweeping) {
            for (std::size_t b = 0; b < cfg.burn_in; ++b)
                gibbs_sweep_inplace(candidate, scenario.grid.duration, stream);
            for (std::size_t s = 0; s < cfg.sweeps_per_sample; ++s) {
                gibbs_sweep_inplace(candidate, scenario.grid.duration, stream);
                consider(candidate);
            }
        }
    }
    return result;
}

SearchResult evaluate_candidates(const SampledTrace& y, std::span<const FlipConfig> candidates,
                                 double amplitude, double noise_sigma) {
    if (candidates.empty())
        throw std::invalid_argument("glr: candidate list must not be empty");
    check_likelihood_inputs(y, amplitude, noise_sigma);

    const ObjectiveEvaluator eval(y, amplitude, noise_sigma);
    SearchResult result;
    result.best_objective = -std::numeric_limits<double>::infinity();
    result.objective_trace.reserve(candidates.size());
    for (const FlipConfig& config : candidates) {
        const double value = eval(config);
        if (value > result.best_objective) {
            result.best_objective = value;
            result.best_config = config;
        }
        result.objective_trace.push_back(result.best_objective);
    }
    return result;
}

}  // namespace mrfm
