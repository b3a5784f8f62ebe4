#include "coldkick/dcsl.hpp"

#include <cmath>

#include "coldkick/csl.hpp"
#include "coldkick/model.hpp"
#include "coldkick/oracle.hpp"
#include "coldkick/special.hpp"

namespace coldkick {

using special::phi1;
using special::phi2;
using special::psi_div;
using special::theta_div;

DcslRates dcsl_rates(const Dcsl& noise, const AtomSpecies& species) {
    noise.validate();
    species.validate();
    const double h = PhysicalConstants::hbar;
    const double a2 = static_cast<double>(species.nucleon_count) *
                      static_cast<double>(species.nucleon_count);
    DcslRates r;
    r.k = dcsl_k(noise.t_csl, species, noise.r_c);
    const double onek = 1.0 + r.k;
    const double onek3 = onek * onek * onek;
    const double onek5 = onek3 * onek * onek;
    r.chi = 4.0 * r.k * noise.lambda * a2 / onek5;
    r.big_b = 0.5 * onek * r.chi;
    r.alpha = 6.0 * noise.lambda * a2 * noise.r_c * noise.r_c * r.k * r.k / onek3;
    r.p2_as = 3.0 * h * h / (8.0 * r.k * noise.r_c * noise.r_c);
    r.heating_rate = csl_heating_rate(noise.lambda, species.nucleon_count, noise.r_c) / onek5;
    return r;
}

GasMoments dcsl_free_step(const GasMoments& m0, const Dcsl& noise, const AtomSpecies& species,
                          double dt) {
    if (!(dt >= 0.0)) throw std::domain_error("dcsl_free_step: dt must be >= 0");
    const DcslRates r = dcsl_rates(noise, species);
    const double m = species.mass;
    const double a = r.chi * dt;    // momentum relaxation exponent
    const double b = r.big_b * dt;  // correlation damping exponent
    const double Ea = std::exp(-a);
    const double Eb = std::exp(-b);

    GasMoments out = m0;
    // p2(t) = p2_as + e^{-a}(p2_0 - p2_as), written via the heating rate so
    // the k -> 0 limit carries no p2_as cancellation
    out.p2 = m0.p2 * Ea + r.heating_rate * dt * phi1(a);
    out.xp_sym = m0.xp_sym * Eb + (2.0 * m0.p2 / m) * dt * Ea * phi1(b - a) +
                 (2.0 * r.heating_rate / m) * dt * dt * psi_div(a, b);
    out.x2 = m0.x2 + r.alpha * dt + (m0.xp_sym / m) * dt * phi1(b) +
             (2.0 * m0.p2 / (m * m)) * dt * dt * psi_div(a, b) +
             (2.0 * r.heating_rate / (m * m)) * dt * dt * dt * theta_div(a, b);
    // mean free drift; the boosted variant is handled by boost_mean_step
    for (int i = 0; i < 3; ++i) {
        out.p_mean[i] = m0.p_mean[i] * Eb;
        out.x_mean[i] = m0.x_mean[i] + (m0.p_mean[i] / m) * dt * phi1(b);
    }
    return out;
}

GasMoments dcsl_harmonic_step(const GasMoments& m0, const Dcsl& noise,
                              const AtomSpecies& species, double omega, double dt, KickMode mode,
                              double step) {
    if (!(omega > 0.0)) throw std::domain_error("dcsl_harmonic_step: omega must be > 0");
    if (!(dt >= 0.0)) throw std::domain_error("dcsl_harmonic_step: dt must be >= 0");
    noise.validate();
    if (mode == KickMode::AnalyticQm || noise.lambda == 0.0) {
        return csl_harmonic_step(m0, Csl{0.0, noise.r_c}, species, omega, dt);
    }
    GasMoments out = rk4_integrate(OdeSystem::dcsl(noise, species, omega), m0, dt,
                                   std::min(step, dt > 0.0 ? dt : step));
    // means under the trap, noise damping neglected over the short kick
    const GasMoments qm = csl_harmonic_step(m0, Csl{0.0, noise.r_c}, species, omega, dt);
    out.x_mean = qm.x_mean;
    out.p_mean = qm.p_mean;
    return out;
}

GasMoments boost_mean_step(const GasMoments& m0, const Dcsl& noise, const AtomSpecies& species,
                           double dt) {
    if (!(dt >= 0.0)) throw std::domain_error("boost_mean_step: dt must be >= 0");
    const DcslRates r = dcsl_rates(noise, species);
    const double m = species.mass;
    const double b = r.big_b * dt;
    const double Eb = std::exp(-b);

    GasMoments out = dcsl_free_step(m0, noise, species, dt);
    for (int i = 0; i < 3; ++i) {
        const double u = noise.boost[i];
        out.p_mean[i] = m0.p_mean[i] * Eb + m * u * (1.0 - Eb);
        // x gain = u dt + (p0/m - u)(1-e^{-b})/B; the u-parts combine to
        // u dt b phi2(b) so the second-order drift survives when b is tiny
        out.x_mean[i] = m0.x_mean[i] + (m0.p_mean[i] / m) * dt * phi1(b) +
                        u * dt * b * phi2(b);
    }
    return out;
}

BoostBound boost_velocity_bound(const Dcsl& noise, const AtomSpecies& species, double t_total,
                                double displacement_limit) {
    if (!(t_total > 0.0)) throw std::domain_error("boost_velocity_bound: t_total must be > 0");
    if (!(displacement_limit > 0.0))
        throw std::domain_error("boost_velocity_bound: displacement_limit must be > 0");
    const DcslRates r = dcsl_rates(noise, species);
    BoostBound out;
    out.big_b = r.big_b;
    if (r.big_b <= 0.0) {
        out.bounded = false;
        out.u_max = HUGE_VAL;
        out.small_bt = true;
        return out;
    }
    out.bounded = true;
    out.u_max = 2.0 * displacement_limit / (r.big_b * t_total * t_total);
    out.small_bt = r.big_b * t_total < 0.1;
    return out;
}

}  // namespace coldkick
