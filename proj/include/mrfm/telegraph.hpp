#pragma once

#include <cstddef>
#include <vector>

#include "mrfm/random.hpp"
#include "mrfm/sample_grid.hpp"
#include "mrfm/trace.hpp"

namespace mrfm {

/// One realization of the random telegraph's switching pattern: flip times
/// strictly inside (0, T), strictly increasing, plus the initial polarity.
struct FlipConfig {
    std::vector<double> flip_times;
    int initial_polarity = 1;  // +1 or -1

    std::size_t flip_count() const { return flip_times.size(); }

    bool operator==(const FlipConfig&) const = default;
};

/// Throws std::invalid_argument if flip times are not strictly increasing,
/// fall outside (0, duration), or the polarity is not +/-1.
void validate_flip_config(const FlipConfig& config, double duration);

/// Draws flips as a Poisson process of the given rate on (0, T) and a fair
/// +/-1 initial polarity. N is Poisson(rate * T); given N the flip times are
/// uniform order statistics.
FlipConfig sample_flip_config(double rate, const SampleGrid& grid, RandomStream& rng);

/// Same draw, reusing the capacity of `out` (hot-path variant).
void sample_flip_config_into(double rate, const SampleGrid& grid, RandomStream& rng,
                             FlipConfig& out);

/// Smallest sample index n with n * T_s >= tau, clamped to [0, M]. A flip at
/// an exact sample instant takes effect at that sample (post-flip polarity).
std::size_t flip_boundary_index(double tau, const SampleGrid& grid);

/// Boundary index of every flip time, in order. Two flips inside one sample
/// interval yield a duplicated index (they cancel on the grid).
std::vector<std::size_t> flip_boundary_indices(const FlipConfig& config, const SampleGrid& grid);

/// Samples the telegraph s(t) = phi * amplitude * (-1)^{#flips <= t} on the
/// grid. Every sample equals +/- amplitude; N = 0 gives a constant trace.
SampledTrace synthesize_telegraph(const FlipConfig& config, double amplitude,
                                  const SampleGrid& grid);

}  // namespace mrfm
