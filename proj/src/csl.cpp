#include "coldkick/csl.hpp"

#include <cmath>

#include "coldkick/model.hpp"
#include "coldkick/special.hpp"

namespace coldkick {

using special::sin_defect;
using special::sinc;

HarmonicStepCoefficients HarmonicStepCoefficients::from_state(const GasMoments& m0,
                                                              const Csl& noise,
                                                              const AtomSpecies& species,
                                                              double omega) {
    if (!(omega > 0.0)) throw std::domain_error("harmonic coefficients: omega must be > 0");
    noise.validate();
    const double m = species.mass;
    const double D = csl_heating_rate(noise.lambda, species.nucleon_count, noise.r_c);
    HarmonicStepCoefficients c;
    c.c_w = D / (m * omega * omega);
    c.b_w = m0.xp_sym - c.c_w;
    c.a_w = m * omega * m0.x2 - m0.p2 / (m * omega);
    return c;
}

GasMoments csl_free_step(const GasMoments& m0, const Csl& noise, const AtomSpecies& species,
                         double dt) {
    if (!(dt >= 0.0)) throw std::domain_error("csl_free_step: dt must be >= 0");
    noise.validate();
    species.validate();
    const double m = species.mass;
    const double D = csl_heating_rate(noise.lambda, species.nucleon_count, noise.r_c);
    GasMoments r = m0;
    r.x2 = m0.x2 + m0.xp_sym * dt / m + m0.p2 * dt * dt / (m * m) +
           D * dt * dt * dt / (3.0 * m * m);
    r.xp_sym = m0.xp_sym + 2.0 * m0.p2 * dt / m + D * dt * dt / m;
    r.p2 = m0.p2 + D * dt;
    // collapse noise leaves the average motion untouched; free drift only
    for (int i = 0; i < 3; ++i) r.x_mean[i] = m0.x_mean[i] + m0.p_mean[i] * dt / m;
    return r;
}

GasMoments csl_harmonic_step(const GasMoments& m0, const Csl& noise, const AtomSpecies& species,
                             double omega, double dt) {
    if (!(omega > 0.0)) throw std::domain_error("csl_harmonic_step: omega must be > 0");
    if (!(dt >= 0.0)) throw std::domain_error("csl_harmonic_step: dt must be >= 0");
    noise.validate();
    species.validate();
    const double m = species.mass;
    const double D = csl_heating_rate(noise.lambda, species.nucleon_count, noise.r_c);
    const double th = omega * dt;
    const double c = std::cos(th), s = std::sin(th);
    const double c2 = std::cos(2.0 * th), s2 = std::sin(2.0 * th);
    const double snc2 = sinc(2.0 * th);  // sin(2th)/(2th)
    const double snc1 = sinc(th);

    GasMoments r = m0;
    r.x2 = m0.x2 * c * c + (m0.xp_sym * dt / m) * snc2 +
           (m0.p2 * dt * dt / (m * m)) * snc1 * snc1 +
           (2.0 * D / (m * m)) * dt * dt * dt * sin_defect(2.0 * th);
    r.xp_sym = m0.xp_sym * c2 - m * omega * m0.x2 * s2 + (2.0 * m0.p2 * dt / m) * snc2 +
               (D / m) * dt * dt * snc1 * snc1;
    r.p2 = m0.p2 * c * c + m * m * omega * omega * m0.x2 * s * s -
           0.5 * m * omega * m0.xp_sym * s2 + 0.5 * D * dt * (1.0 + snc2);
    for (int i = 0; i < 3; ++i) {
        r.x_mean[i] = m0.x_mean[i] * c + m0.p_mean[i] * s / (m * omega);
        r.p_mean[i] = m0.p_mean[i] * c - m * omega * m0.x_mean[i] * s;
    }
    return r;
}

ClosedFormCoefficients ClosedFormCoefficients::from_protocol(const Protocol& protocol) {
    if (!(protocol.dt1 > 0.0 && protocol.dt2 > 0.0 && protocol.dt3 > 0.0))
        throw std::domain_error("closed form: protocol timings must be > 0");
    if (!(protocol.omega > 0.0)) throw std::domain_error("closed form: omega must be > 0");
    const double m = protocol.species.mass;
    const double w = protocol.omega;
    const double t1 = protocol.dt1;
    const double d = protocol.dt2;
    const double T3 = protocol.dt3;       // stage-3 duration, t3 - t2
    const double t2 = t1 + d;             // kick end, absolute
    const double t3 = t2 + T3;            // detection, absolute
    const double X0 = protocol.initial.x2;
    const double P0 = protocol.initial.p2;
    const double w2 = w * w, m2 = m * m;

    ClosedFormCoefficients k;
    k.a_qm = (P0 + (X0 * m2 + P0 * t1 * t1) * w2) * (1.0 + T3 * T3 * w2) / (2.0 * m2 * w2);
    k.b_qm = -(P0 - (X0 * m2 + P0 * (T3 * T3 + 4.0 * t1 * T3 + t1 * t1)) * w2) / (2.0 * m2 * w2) -
             (X0 * m2 + P0 * t1 * t1) * T3 * T3 * w2 / (2.0 * m2);
    k.c_qm = (P0 * (t3 - d) - (X0 * m2 + P0 * t1 * (t3 - d)) * T3 * w2) / (w * m2);

    k.a_csl = 6.0 * w * t3 +
              2.0 * w2 * w * (t2 * t2 * t2 + 2.0 * t3 * t3 * t3 + t1 * t1 * t1 -
                              3.0 * t3 * t3 * t2) +
              2.0 * t1 * t1 * t1 * T3 * T3 * w2 * w2 * w;
    k.b_csl = -2.0 * w * (3.0 * (t3 - d) +
                          w2 * t1 * (2.0 * t1 * t1 - 3.0 * (t3 - d) * (t3 - d)) +
                          w2 * w2 * t1 * t1 * t1 * T3 * T3);
    k.c_csl = -(3.0 + 3.0 * w2 * (T3 * T3 - 2.0 * (t3 - d) * (t3 - d)) +
                2.0 * w2 * w2 * t1 * t1 * T3 * (3.0 * t3 - t1 - 3.0 * d));
    return k;
}

FinalVarianceSplit csl_closed_form_final_x2(const Protocol& protocol, const Csl& noise) {
    noise.validate();
    const auto k = ClosedFormCoefficients::from_protocol(protocol);
    const double m = protocol.species.mass;
    const double w = protocol.omega;
    const double h = PhysicalConstants::hbar;
    const double A = static_cast<double>(protocol.species.nucleon_count);
    const double c2 = std::cos(2.0 * w * protocol.dt2);
    const double s2 = std::sin(2.0 * w * protocol.dt2);

    FinalVarianceSplit out;
    out.qm_part = k.a_qm + k.b_qm * c2 + k.c_qm * s2;
    const double prefactor =
        noise.lambda * A * A * h * h / (noise.r_c * noise.r_c * 8.0 * m * m * w * w * w);
    out.csl_part = prefactor * (k.a_csl + k.b_csl * c2 + k.c_csl * s2);
    return out;
}

}  // namespace coldkick
