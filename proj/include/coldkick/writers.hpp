#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coldkick/config.hpp"
#include "coldkick/exclusion.hpp"
#include "coldkick/kick_error.hpp"
#include "coldkick/pipeline.hpp"

namespace coldkick {

// Round-trip-safe decimal rendering ("%.{precision}g", '.' separator).
std::string format_double(double v, int precision = 17);

// Per-sample RK4 cross-check columns (relative deviations), enabled by the
// CLI --oracle flag.
struct OracleColumns {
    std::vector<double> x2_rel, xp_rel, p2_rel;
};

struct KickErrorRow {
    std::string sweep;  // "dt2" or "t_csl"
    double parameter = 0.0;
    KickErrorReport report;
};

void write_trajectory(const std::string& path, const TrajectoryRecord& rec,
                      const Protocol& protocol, const NoiseModel& noise,
                      const OutputConfig& out, const std::optional<OracleColumns>& oracle);

void write_sweep(const std::string& path, const std::string& kind,
                 const std::vector<SweepPoint>& points, const Protocol& protocol,
                 const NoiseModel& noise, const OutputConfig& out);

// Grid rows to `path`; the boundary polyline goes to `boundary_path` (CSV
// format only; the JSON mirror embeds both).
void write_grid(const std::string& path, const std::string& boundary_path,
                const ExclusionGrid& grid, const MeasurementBand& band,
                const Protocol& protocol, const OutputConfig& out);

void write_kick_error(const std::string& path, const std::vector<KickErrorRow>& rows,
                      const Protocol& protocol, const Dcsl& noise, const OutputConfig& out);

std::string describe_noise(const NoiseModel& noise);

}  // namespace coldkick
