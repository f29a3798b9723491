#pragma once

#include <vector>

#include "mrfm/random.hpp"
#include "mrfm/sample_grid.hpp"

namespace mrfm {

enum class TraceRole { clean, noise, observation };

/// Uniformly sampled real-valued time series (baseband units: Hz).
struct SampledTrace {
    SampleGrid grid;
    TraceRole role = TraceRole::observation;
    std::vector<double> values;
};

/// Throws std::invalid_argument if the value count does not match the grid
/// or any sample is non-finite.
void validate_trace(const SampledTrace& trace);

/// All-zero trace, e.g. the spin-absent mean under hypothesis H0.
SampledTrace zero_trace(const SampleGrid& grid, TraceRole role);

/// Adds i.i.d. N(0, sigma^2) noise per sample; returns an observation trace.
/// sigma = 0 returns the input values unchanged.
SampledTrace add_awgn(const SampledTrace& trace, double sigma, RandomStream& rng);

}  // namespace mrfm
