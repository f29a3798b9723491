#include "mrfm/telegraph.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mrfm {

void validate_flip_config(const FlipConfig& config, double duration) {
    if (config.initial_polarity != 1 && config.initial_polarity != -1)
        throw std::invalid_argument("flip config: initial polarity must be +1 or -1");
    double prev = 0.0;
    for (std::size_t i = 0; i < config.flip_times.size(); ++i) {
        const double tau = config.flip_times[i];
        if (!std::isfinite(tau) || tau <= prev || tau >= duration)
            throw std::invalid_argument("flip config: time " + std::to_string(i) +
                                        " violates 0 < tau_1 < ... < tau_N < T");
        prev = tau;
    }
}

void sample_flip_config_into(double rate, const SampleGrid& grid, RandomStream& rng,
                             FlipConfig& out) {
    if (!std::isfinite(rate) || rate < 0.0)
        throw std::invalid_argument("flip sampling: rate must be finite and >= 0");
    out.flip_times.clear();
    if (rate > 0.0) {
        // Exponential inter-arrival accumulation: the count is Poisson(rate*T)
        // and the arrival times are uniform order statistics on (0, T).
        double t = rng.exponential(rate);
        while (t < grid.duration) {
            out.flip_times.push_back(t);
            double next = t + rng.exponential(rate);
            while (next == t) next = t + rng.exponential(rate);
            t = next;
        }
    }
    out.initial_polarity = rng.coin_sign();
}

FlipConfig sample_flip_config(double rate, const SampleGrid& grid, RandomStream& rng) {
    FlipConfig out;
    sample_flip_config_into(rate, grid, rng, out);
    return out;
}

std::size_t flip_boundary_index(double tau, const SampleGrid& grid) {
    double raw = std::ceil(tau / grid.sample_period);
    if (raw < 0.0) raw = 0.0;
    auto idx = static_cast<std::size_t>(raw);
    if (idx > grid.sample_count) idx = grid.sample_count;
    // Fix up rounding so the result is exactly the first n with n*T_s >= tau.
    while (idx > 0 && sample_time(grid, idx - 1) >= tau) --idx;
    while (idx < grid.sample_count && sample_time(grid, idx) < tau) ++idx;
    return idx;
}

std::vector<std::size_t> flip_boundary_indices(const FlipConfig& config, const SampleGrid& grid) {
    std::vector<std::size_t> out;
    out.reserve(config.flip_times.size());
    for (double tau : config.flip_times) out.push_back(flip_boundary_index(tau, grid));
    return out;
}

SampledTrace synthesize_telegraph(const FlipConfig& config, double amplitude,
                                  const SampleGrid& grid) {
    if (!std::isfinite(amplitude) || amplitude <= 0.0)
        throw std::invalid_argument("telegraph: amplitude must be finite and > 0");
    validate_flip_config(config, grid.duration);

    SampledTrace out{grid, TraceRole::clean, std::vector<double>(grid.sample_count)};
    double level = config.initial_polarity > 0 ? amplitude : -amplitude;
    std::size_t n = 0;
    for (double tau : config.flip_times) {
        const std::size_t boundary = flip_boundary_index(tau, grid);
        for (; n < boundary; ++n) out.values[n] = level;
        level = -level;
    }
    for (; n < grid.sample_count; ++n) out.values[n] = level;
    return out;
}

}  // namespace mrfm
