#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace mrfm {

/// Uniform sampling grid on [0, T); sample n sits at t = n * sample_period.
struct SampleGrid {
    double duration = 0.0;       // T, seconds
    double sample_period = 0.0;  // T_s, seconds
    std::size_t sample_count = 0;

    bool operator==(const SampleGrid&) const = default;
};

inline double sample_time(const SampleGrid& grid, std::size_t n) {
    return static_cast<double>(n) * grid.sample_period;
}

inline SampleGrid make_grid(double duration, double sample_period) {
    if (!std::isfinite(duration) || duration <= 0.0)
        throw std::invalid_argument("grid: duration must be finite and > 0");
    if (!std::isfinite(sample_period) || sample_period <= 0.0 || sample_period > duration)
        throw std::invalid_argument("grid: sample period must be in (0, duration]");
    const double m = std::round(duration / sample_period);
    if (m < 2.0)
        throw std::invalid_argument("grid: at least 2 samples required");
    if (std::abs(m * sample_period - duration) > sample_period / 2.0)
        throw std::invalid_argument("grid: duration is not an integer multiple of the sample period");
    return SampleGrid{duration, sample_period, static_cast<std::size_t>(m)};
}

}  // namespace mrfm
