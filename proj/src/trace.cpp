#include "mrfm/trace.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mrfm {

void validate_trace(const SampledTrace& trace) {
    if (trace.values.size() != trace.grid.sample_count)
        throw std::invalid_argument("trace: value count " + std::to_string(trace.values.size()) +
                                    " does not match grid sample count " +
                                    std::to_string(trace.grid.sample_count));
    for (double v : trace.values)
        if (!std::isfinite(v)) throw std::invalid_argument("trace: non-finite sample");
}

SampledTrace zero_trace(const SampleGrid& grid, TraceRole role) {
    return SampledTrace{grid, role, std::vector<double>(grid.sample_count, 0.0)};
}

SampledTrace add_awgn(const SampledTrace& trace, double sigma, RandomStream& rng) {
    if (!std::isfinite(sigma) || sigma < 0.0)
        throw std::invalid_argument("awgn: sigma must be finite and >= 0");
    SampledTrace out{trace.grid, TraceRole::observation, trace.values};
    if (sigma > 0.0)
        for (double& v : out.values) v += sigma * rng.normal();
    return out;
}

}  // namespace mrfm
