#pragma once

#include <optional>
#include <vector>

#include "coldkick/types.hpp"

namespace coldkick {

struct MeasurementBand {
    double mean = 120e-6;   // m
    double sigma = 40e-6;   // m
    double level = 0.95;
    double lo = 0.0;        // m
    double hi = 0.0;        // m

    static MeasurementBand normal(double mean, double sigma, double level);
    bool contains(double value) const { return value >= lo && value <= hi; }
};

// [mean - z sigma, mean + z sigma] with z = sqrt(2) erfinv(level).
std::pair<double, double> cl_interval(double mean, double sigma, double level);

struct GridCell {
    double lambda = 0.0;   // 1/s
    double r_c = 0.0;      // m
    double sigma_x = 0.0;  // m, per-axis prediction
    bool excluded = false;
    bool failed = false;
};

struct BoundaryPoint {
    double r_c = 0.0;
    double lambda_crit = 0.0;  // smallest excluded lambda in this column
};

struct ExclusionGrid {
    std::vector<double> lambda_axis;  // ascending
    std::vector<double> rc_axis;      // ascending
    std::vector<GridCell> cells;      // row-major: [i_lambda * n_rc + i_rc]
    std::vector<BoundaryPoint> boundary;
    std::string model_tag;

    const GridCell& at(size_t i_lambda, size_t i_rc) const {
        return cells[i_lambda * rc_axis.size() + i_rc];
    }
};

std::vector<double> log_axis(double lo, double hi, int points);

// Runs the protocol per (lambda, r_C) cell of the noise family template and
// marks cells whose per-axis prediction falls outside the band. Cells are
// independent; the merge order is fixed by index, so the result does not
// depend on the worker count.
ExclusionGrid scan_exclusion(const Protocol& protocol, const NoiseModel& family,
                             const std::vector<double>& lambda_axis,
                             const std::vector<double>& rc_axis, const MeasurementBand& band,
                             int workers = 1);

struct AnalyticCslBound {
    double K = 0.0;       // m^4 s, x2 excess per (lambda/r_C^2)
    double limit = 0.0;   // 1/(m^2 s), lambda/r_C^2 upper bound
    double qm_sigma = 0.0;  // m, per-axis prediction at lambda = 0
};

// The CSL excess of the final variance is exactly (lambda/r_C^2) K, so the
// band's upper edge translates into lambda/r_C^2 < limit.
AnalyticCslBound analytic_csl_bound(const Protocol& protocol, const MeasurementBand& band);

// Boosted-dCSL exclusion: a cell is excluded when the mean displacement
// (1/2) u B t^2 exceeds the displacement limit.
ExclusionGrid boost_exclusion(const Protocol& protocol, double t_csl, double u,
                              const std::vector<double>& lambda_axis,
                              const std::vector<double>& rc_axis, double displacement_limit,
                              int workers = 1);

// One grid per noise temperature.
std::vector<ExclusionGrid> boost_exclusion(const Protocol& protocol,
                                           const std::vector<double>& t_csl_list, double u,
                                           const std::vector<double>& lambda_axis,
                                           const std::vector<double>& rc_axis,
                                           double displacement_limit, int workers = 1);

}  // namespace coldkick
