#pragma once

#include "coldkick/types.hpp"

namespace coldkick {

// Coefficients of the harmonic-stage solution, fixed by the moments at the
// start of the stage:
//   c_w = 3 lambda A^2 hbar^2 / (2 m r_C^2 omega^2)
//   b_w = xp_sym(t0) - c_w
//   a_w = m omega x2(t0) - p2(t0)/(m omega)
struct HarmonicStepCoefficients {
    double a_w = 0.0;  // J s
    double b_w = 0.0;  // J s
    double c_w = 0.0;  // J s

    static HarmonicStepCoefficients from_state(const GasMoments& m0, const Csl& noise,
                                               const AtomSpecies& species, double omega);
};

// Coefficients of the single-expression final variance. The QM triple carries
// the initial-state dependence; the CSL triple depends only on the protocol
// times and omega.
struct ClosedFormCoefficients {
    double a_qm = 0.0, b_qm = 0.0, c_qm = 0.0;     // m^2
    double a_csl = 0.0, b_csl = 0.0, c_csl = 0.0;  // dimensionless time polynomials

    static ClosedFormCoefficients from_protocol(const Protocol& protocol);
};

struct FinalVarianceSplit {
    double qm_part = 0.0;   // m^2
    double csl_part = 0.0;  // m^2
    double total() const { return qm_part + csl_part; }
};

// Free flight under white-noise CSL for a duration dt. Means are unchanged.
GasMoments csl_free_step(const GasMoments& m0, const Csl& noise, const AtomSpecies& species,
                         double dt);

// Harmonic trap stage under white-noise CSL. Uniformly accurate in omega;
// the omega -> 0 limit reproduces csl_free_step to machine precision.
GasMoments csl_harmonic_step(const GasMoments& m0, const Csl& noise, const AtomSpecies& species,
                             double omega, double dt);

// Final position variance of the full free->kick->free protocol from the
// closed-form coefficients. Cross-check for the staged composition, which
// remains the authoritative prediction path.
FinalVarianceSplit csl_closed_form_final_x2(const Protocol& protocol, const Csl& noise);

}  // namespace coldkick
