#pragma once

#include "coldkick/types.hpp"

namespace coldkick {

struct ColoredNoiseSpec {
    double tau = 1e-3;           // s, correlation time
    double cutoff_omega = 1e3;   // rad/s, Omega = 1/tau

    static ColoredNoiseSpec from_tau(double tau) {
        if (!(tau > 0.0)) throw std::domain_error("colored noise: tau must be > 0");
        return ColoredNoiseSpec{tau, 1.0 / tau};
    }
};

// One "<<" condition of the white-noise reduction, reported as a numeric
// margin; the verdict threshold is margin < 0.1.
struct ValidityCondition {
    double margin = 0.0;
    bool holds = false;
};

struct ValidityReport {
    ValidityCondition cond_omega_tau;  // omega tau << 1
    ValidityCondition cond_momentum;   // |Q||p_max| tau / (hbar m) << 1
    ValidityCondition cond_q2;         // Q^2 tau / (2 m hbar) << 1
    double regime_omega_min = 0.0;     // Hz, cutoff threshold applicable at this r_C
    bool all_hold() const {
        return cond_omega_tau.holds && cond_momentum.holds && cond_q2.holds;
    }
};

// Exponential noise correlator f(s) = e^{-|s|/tau}/(2 tau); even, unit area.
double noise_correlator(double s, double tau);

// g(x) = int_0^x f(y) cos(omega y) dy + e^{-x/tau} sin(omega x)/(2 omega tau),
// with the integral evaluated from its antiderivative.
double g_kernel(double x, double omega, double tau);

// Harmonic stage under exponentially correlated noise, local stage time t.
// The homogeneous part is the unitary evolution; the noise terms are single
// adaptive quadratures over the g kernel and the damped cosine.
GasMoments ccsl_harmonic_moments(const GasMoments& m0, const Ccsl& noise,
                                 const AtomSpecies& species, double omega, double t,
                                 double quad_rel_tol = 1e-10);

// Free stage closed forms; tau -> 0 reduces exactly to the white-noise step.
GasMoments ccsl_free_moments(const GasMoments& m0, const Ccsl& noise,
                             const AtomSpecies& species, double t);

// Checks the three conditions under which the colored-noise dynamics is
// indistinguishable from white-noise CSL, and reports the cutoff-frequency
// threshold applicable at the given r_C.
ValidityReport white_noise_validity(const Ccsl& noise, const Protocol& protocol);

}  // namespace coldkick
