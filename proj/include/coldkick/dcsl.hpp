#pragma once

#include "coldkick/types.hpp"

namespace coldkick {

// Rate bundle of the dissipative model.
//   k      = hbar^2/(8 m k_B T_CSL r_C^2)
//   chi    = 4 k lambda A^2/(1+k)^5          (momentum relaxation rate)
//   big_b  = (1+k) chi / 2                   (correlation damping rate)
//   alpha  = 6 lambda A^2 r_C^2 k^2/(1+k)^3  (position diffusion)
//   p2_as  = 3 hbar^2/(8 k r_C^2)            (asymptotic momentum variance)
// heating_rate carries chi * p2_as = D/(1+k)^5 evaluated without the k
// cancellation; it tends to the white-noise heating rate as k -> 0.
struct DcslRates {
    double k = 0.0;
    double chi = 0.0;      // 1/s
    double big_b = 0.0;    // 1/s
    double alpha = 0.0;    // m^2/s
    double p2_as = 0.0;    // kg^2 m^2/s^2
    double heating_rate = 0.0;  // kg^2 m^2/s^3
};

enum class KickMode { AnalyticQm, Numeric };

DcslRates dcsl_rates(const Dcsl& noise, const AtomSpecies& species);

// Free flight under dCSL: p2 relaxes exponentially toward p2_as; xp and x2
// follow the exact solution of the triangular linear system, arranged so the
// k -> 0 limit reproduces the white-noise step at full precision.
GasMoments dcsl_free_step(const GasMoments& m0, const Dcsl& noise, const AtomSpecies& species,
                          double dt);

// Kick stage. AnalyticQm applies the noise-free harmonic solution (the
// error of doing so is certified by the kick-error module); Numeric
// integrates the full dCSL system with RK4.
GasMoments dcsl_harmonic_step(const GasMoments& m0, const Dcsl& noise,
                              const AtomSpecies& species, double omega, double dt,
                              KickMode mode = KickMode::AnalyticQm, double step = 1e-4);

// Free-flight mean motion under a noise boost u: p_mean relaxes toward m u
// with rate B, x_mean picks up the corresponding drift. Second moments are
// advanced with dcsl_free_step.
GasMoments boost_mean_step(const GasMoments& m0, const Dcsl& noise, const AtomSpecies& species,
                           double dt);

struct BoostBound {
    double u_max = 0.0;     // m/s; infinity when unbounded
    bool bounded = false;   // false when B = 0 (lambda = 0 or k = 0)
    double big_b = 0.0;     // 1/s
    bool small_bt = true;   // warn flag: B t_total << 1 assumption
};

// u_max = 2 displacement_limit / (B t_total^2).
BoostBound boost_velocity_bound(const Dcsl& noise, const AtomSpecies& species, double t_total,
                                double displacement_limit);

}  // namespace coldkick
