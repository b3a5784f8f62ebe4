#pragma once

#include "coldkick/types.hpp"

namespace coldkick {

// Kick frequency from the protocol durations and the measured initial
// position-velocity correlation gamma^2:
//   omega = sqrt[(1/dt_min)(1/dt3 + (1 - gamma2)/dt1)].
double delta_kick_frequency(double dt_min, double dt1, double dt3, double gamma2);

// 3D equipartition: <p^2> = 3 m k_B T.
double moments_from_temperature(double temperature, const AtomSpecies& species);
double temperature_from_moments(double p2, const AtomSpecies& species);

// E = <p^2>/(2m), 3D total.
double kinetic_energy(const GasMoments& moments, const AtomSpecies& species);

// Dissipation parameter k = hbar^2/(8 m k_B T_CSL r_C^2).
double dcsl_k(double t_csl, const AtomSpecies& species, double r_c);

// Heating rate of <p^2> in free flight, 3 lambda A^2 hbar^2/(2 r_C^2).
double csl_heating_rate(double lambda, int nucleon_count, double r_c);

// Default protocol: 56 um per-axis initial spread, 1600 pK initial
// temperature, uncorrelated initial state.
Protocol default_protocol();

// Initial moments for a trap release at temperature T with per-axis position
// spread sigma_axis.
GasMoments initial_moments(double sigma_axis, double temperature, const AtomSpecies& species);

}  // namespace coldkick
