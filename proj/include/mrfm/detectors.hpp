#pragma once

#include <optional>
#include <string_view>

#include "mrfm/glr_search.hpp"
#include "mrfm/scenario.hpp"
#include "mrfm/trace.hpp"

namespace mrfm {

enum class DetectorKind { matched_filter, amplitude, energy, hybrid_glr };

std::string_view to_string(DetectorKind kind);
DetectorKind detector_from_string(std::string_view name);

struct HybridMeta {
    FlipConfig best_config;       // argmax configuration found by the search
    std::size_t evaluations = 0;  // candidate evaluations performed
};

/// Scalar test statistic; thresholding lives in the Monte Carlo harness.
struct DetectorStatistic {
    DetectorKind kind = DetectorKind::energy;
    double value = 0.0;
    std::optional<HybridMeta> hybrid;
};

/// Omniscient matched filter (1/M) sum y_n s_n against the true (or, under
/// H0, a prior-drawn) telegraph realization. Grids must match.
DetectorStatistic matched_filter_stat(const SampledTrace& y, const SampledTrace& s_true);

/// |(1/M) sum y_n|.
DetectorStatistic amplitude_stat(const SampledTrace& y);

/// T_s * sum y_n^2.
DetectorStatistic energy_stat(const SampledTrace& y);

/// Hybrid Bayes/GLR statistic: the search_max maximum of the scan objective.
/// Requires scenario.noise_sigma > 0.
DetectorStatistic hybrid_glr_stat(const SampledTrace& y, const ScenarioConfig& scenario,
                                  const SamplerConfig& sampler, const RandomStream& rng);

}  // namespace mrfm
