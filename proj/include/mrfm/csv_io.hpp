#pragma once

#include <cstddef>
#include <ostream>

#include "mrfm/monte_carlo.hpp"
#include "mrfm/trace.hpp"

namespace mrfm {

/// Header "pf,pd" then one "%.6f,%.6f" row per point. Returns bytes written.
std::size_t write_roc_csv(const RocCurve& curve, std::ostream& out);

/// Header "snr_db,pd" then one row per entry. Returns bytes written.
std::size_t write_power_csv(const PowerCurve& curve, std::ostream& out);

/// Header "t,s,y" then one row per sample. Returns bytes written.
std::size_t write_trace_csv(const SampledTrace& clean, const SampledTrace& observation,
                            std::ostream& out);

}  // namespace mrfm
