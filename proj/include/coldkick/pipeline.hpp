#pragma once

#include <string>
#include <vector>

#include "coldkick/types.hpp"

namespace coldkick {

// Sampled trajectory of one protocol run. Stage boundaries appear once; the
// recorded moments are continuous across them by construction.
struct TrajectoryRecord {
    std::vector<double> times;          // s, strictly increasing, [0, t3]
    std::vector<GasMoments> moments;
    std::vector<int> stage;             // 0 free, 1 kick, 2 free
    double final_sigma_x = 0.0;         // m, per-axis sqrt(x2/3) at t3
    double final_energy = 0.0;          // J, p2/(2m) at t3
    double final_temperature = 0.0;     // K, 2E/(3 k_B)
    GasMoments final_moments;
};

struct SweepPoint {
    double parameter = 0.0;
    double sigma_x = 0.0;      // m, per-axis
    double energy = 0.0;       // J
    bool failed = false;
    std::string error;
};

// Full protocol: free flight dt1, harmonic kick dt2 at omega, free flight
// dt3, dispatched per stage to the propagator matching the noise model
// (QM runs as CSL with lambda = 0). Boosted dCSL also advances the means.
// `sampling` controls recording only; stage solutions are evaluated exactly
// at the sample times.
TrajectoryRecord run_protocol(const Protocol& protocol, const NoiseModel& noise,
                              double sampling = 0.01);

// Final observables only (no sampling).
GasMoments run_protocol_final(const Protocol& protocol, const NoiseModel& noise);

std::vector<SweepPoint> sweep_kick_time(const Protocol& protocol, const NoiseModel& noise,
                                        const std::vector<double>& dt2_grid, int workers = 1);

std::vector<SweepPoint> sweep_noise_temperature(const Protocol& protocol, const Dcsl& base,
                                                const std::vector<double>& t_grid,
                                                int workers = 1);

std::vector<SweepPoint> sweep_rc(const Protocol& protocol, const Dcsl& base,
                                 const std::vector<double>& rc_grid, int workers = 1);

double per_axis_sigma(const GasMoments& m);

}  // namespace coldkick
