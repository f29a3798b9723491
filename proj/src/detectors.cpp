#include "mrfm/detectors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mrfm {

std::string_view to_string(DetectorKind kind) {
    switch (kind) {
        case DetectorKind::matched_filter: return "matched_filter";
        case DetectorKind::amplitude: return "amplitude";
        case DetectorKind::energy: return "energy";
        case DetectorKind::hybrid_glr: return "hybrid_glr";
    }
    throw std::logic_error("unknown detector kind");
}

DetectorKind detector_from_string(std::string_view name) {
    if (name == "matched_filter") return DetectorKind::matched_filter;
    if (name == "amplitude") return DetectorKind::amplitude;
    if (name == "energy") return DetectorKind::energy;
    if (name == "hybrid_glr") return DetectorKind::hybrid_glr;
    throw std::invalid_argument("unknown detector '" + std::string(name) +
                                "' (expected matched_filter, amplitude, energy or hybrid_glr)");
}

namespace {

void require_nonempty(const SampledTrace& y) {
    if (y.values.empty()) throw std::invalid_argument("detector: trace must be nonempty");
}

double check_finite(double value) {
    if (!std::isfinite(value)) throw std::range_error("detector: statistic is non-finite");
    return value;
}

}  // namespace

DetectorStatistic matched_filter_stat(const SampledTrace& y, const SampledTrace& s_true) {
    if (y.grid != s_true.grid || y.values.size() != s_true.values.size())
        throw std::invalid_argument("matched filter: observation and reference grids differ");
    require_nonempty(y);
    double acc = 0.0;
    for (std::size_t n = 0; n < y.values.size(); ++n) acc += y.values[n] * s_true.values[n];
    const double value = acc / static_cast<double>(y.values.size());
    return DetectorStatistic{DetectorKind::matched_filter, check_finite(value), {}};
}

DetectorStatistic amplitude_stat(const SampledTrace& y) {
    require_nonempty(y);
    double acc = 0.0;
    for (double v : y.values) acc += v;
    const double value = std::abs(acc / static_cast<double>(y.values.size()));
    return DetectorStatistic{DetectorKind::amplitude, check_finite(value), {}};
}

DetectorStatistic energy_stat(const SampledTrace& y) {
    require_nonempty(y);
    double acc = 0.0;
    for (double v : y.values) acc += v * v;
    const double value = y.grid.sample_period * acc;
    return DetectorStatistic{DetectorKind::energy, check_finite(value), {}};
}

DetectorStatistic hybrid_glr_stat(const SampledTrace& y, const ScenarioConfig& scenario,
                                  const SamplerConfig& sampler, const RandomStream& rng) {
    SearchResult result = search_max(y, scenario, sampler, rng);
    DetectorStatistic stat{DetectorKind::hybrid_glr, check_finite(result.best_objective), {}};
    stat.hybrid = HybridMeta{std::move(result.best_config), result.objective_trace.size()};
    return stat;
}

}  // namespace mrfm
