#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coldkick/exclusion.hpp"
#include "coldkick/types.hpp"

namespace coldkick {

// Thrown for malformed or physically invalid configuration; the CLI maps it
// to exit code 2. Messages carry the offending key path.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class SweepKind { KickTime, NoiseTemperature, Rc };

struct ScanConfig {
    std::vector<double> lambda_axis;
    std::vector<double> rc_axis;
    MeasurementBand band = MeasurementBand::normal(120e-6, 40e-6, 0.95);
    double boost_u = 0.0;              // m/s, boost_exclusion scans
    double displacement_limit = 1e-6;  // m
};

struct SweepConfig {
    SweepKind kind = SweepKind::KickTime;
    std::vector<double> grid;
};

struct OutputConfig {
    std::string format = "csv";  // csv | json
    int precision = 17;          // significant digits
    double sampling = 0.01;      // s
};

struct RunConfig {
    Protocol protocol;
    bool calibrate = false;        // fit initial p2 so the QM sigma hits band mean
    bool dt3_from_origin = false;  // interpret dt3 as absolute detection time
    std::optional<NoiseModel> noise;
    std::optional<ScanConfig> scan;
    std::optional<SweepConfig> sweep;
    OutputConfig output;
};

// Dimensioned values must carry an explicit unit suffix ("35 ms", "1e-7 m",
// "1600 pK", "6.7 rad/s"); bare numbers are rejected. Unknown keys are
// rejected everywhere.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text, const std::string& origin = "<string>");

// Unit-suffixed scalar parser, exposed for tests. dimension is one of
// "time", "length", "temperature", "angular_frequency", "rate", "velocity",
// "mass", "dimensionless".
double parse_quantity(const std::string& text, const std::string& dimension,
                      const std::string& key_path);

// Resolves the calibrate flag: bisects the initial temperature until the
// lambda = 0 per-axis prediction equals the band mean.
Protocol resolve_protocol(const RunConfig& cfg);

}  // namespace coldkick
