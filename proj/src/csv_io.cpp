#include "mrfm/csv_io.hpp"

#include <cstdio>
#include <stdexcept>
#include <string_view>

namespace mrfm {

namespace {

std::size_t put(std::ostream& out, std::string_view text) {
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("csv: write failed");
    return text.size();
}

std::size_t put_row2(std::ostream& out, double a, double b) {
    char buf[64];
    const int n = std::snprintf(buf, sizeof(buf), "%.6f,%.6f\n", a, b);
    return put(out, std::string_view(buf, static_cast<std::size_t>(n)));
}

std::size_t put_row3(std::ostream& out, double a, double b, double c) {
    char buf[96];
    const int n = std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f\n", a, b, c);
    return put(out, std::string_view(buf, static_cast<std::size_t>(n)));
}

}  // namespace

std::size_t write_roc_csv(const RocCurve& curve, std::ostream& out) {
    if (curve.points.empty()) throw std::invalid_argument("csv: ROC curve has no points");
    std::size_t bytes = put(out, "pf,pd\n");
    for (const RocPoint& p : curve.points) bytes += put_row2(out, p.pf, p.pd);
    return bytes;
}

std::size_t write_power_csv(const PowerCurve& curve, std::ostream& out) {
    if (curve.entries.empty()) throw std::invalid_argument("csv: power curve has no entries");
    std::size_t bytes = put(out, "snr_db,pd\n");
    for (const PowerPoint& p : curve.entries) bytes += put_row2(out, p.snr_db, p.pd);
    return bytes;
}

std::size_t write_trace_csv(const SampledTrace& clean, const SampledTrace& observation,
                            std::ostream& out) {
    if (clean.grid != observation.grid || clean.values.size() != observation.values.size())
        throw std::invalid_argument("csv: trace grids differ");
    validate_trace(clean);
    validate_trace(observation);
    std::size_t bytes = put(out, "t,s,y\n");
    for (std::size_t n = 0; n < clean.values.size(); ++n)
        bytes += put_row3(out, sample_time(clean.grid, n), clean.values[n], observation.values[n]);
    return bytes;
}

}  // namespace mrfm
