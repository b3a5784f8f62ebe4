#pragma once

#include "coldkick/types.hpp"

namespace coldkick {

// Right-hand-side families for the second-moment ODE systems. Coded from the
// derivative equations directly, independent of the closed-form steps, so
// agreement between the two is a meaningful check.
enum class OdeKind { CslFree, CslHarmonic, DcslFree, DcslHarmonic, CcslHistory };

struct OdeSystem {
    OdeKind kind = OdeKind::CslFree;
    AtomSpecies species;
    double lambda = 0.0;  // 1/s
    double r_c = 1e-7;    // m
    double omega = 0.0;   // rad/s; used by the harmonic/history kinds
    double t_csl = 1.0;   // K; dCSL kinds
    double tau = 1e-3;    // s; cCSL history kind

    static OdeSystem csl(const Csl& n, const AtomSpecies& s, double omega_or_zero);
    static OdeSystem dcsl(const Dcsl& n, const AtomSpecies& s, double omega_or_zero);
    static OdeSystem ccsl(const Ccsl& n, const AtomSpecies& s, double omega_or_zero);
};

// step = min(t_span/1e5, 1e-4 s)
double default_oracle_step(double t_span);

// Classical fixed-step RK4 on (x2, xp_sym, p2). The step is rounded so the
// span divides evenly. Aborts with NumericalError on non-finite state.
// t_start shifts the time argument seen by non-autonomous forcing terms
// (the cCSL history kind); integration covers [t_start, t_start + t_end].
GasMoments rk4_integrate(const OdeSystem& system, const GasMoments& initial, double t_end,
                         double step, double t_start = 0.0);

// Spec-step integration over a full span. For the cCSL history kind the
// exp(-t/tau) forcing transient is integrated first at a step resolving tau,
// then the remainder at the default step.
GasMoments oracle_propagate(const OdeSystem& system, const GasMoments& initial, double t_span);

}  // namespace coldkick
