#include "coldkick/ccsl.hpp"

#include <cmath>

#include "coldkick/csl.hpp"
#include "coldkick/model.hpp"
#include "coldkick/quadrature.hpp"
#include "coldkick/special.hpp"

namespace coldkick {

using special::one_minus_cos;

double noise_correlator(double s, double tau) {
    if (!(tau > 0.0)) throw std::domain_error("noise_correlator: tau must be > 0");
    return std::exp(-std::abs(s) / tau) / (2.0 * tau);
}

double g_kernel(double x, double omega, double tau) {
    if (!(x >= 0.0)) throw std::domain_error("g_kernel: x must be >= 0");
    if (!(tau > 0.0)) throw std::domain_error("g_kernel: tau must be > 0");
    const double wt = omega * tau;
    const double E = std::exp(-x / tau);
    // int_0^x e^{-y/tau} cos(omega y)/(2 tau) dy, antiderivative of the
    // damped cosine
    const double damped = (1.0 - E * (std::cos(omega * x) - wt * std::sin(omega * x))) /
                          (2.0 * (1.0 + wt * wt));
    if (omega == 0.0) return damped + E * x / (2.0 * tau);
    return damped + E * std::sin(omega * x) / (2.0 * omega * tau);
}

GasMoments ccsl_free_moments(const GasMoments& m0, const Ccsl& noise,
                             const AtomSpecies& species, double t) {
    if (!(t >= 0.0)) throw std::domain_error("ccsl_free_moments: t must be >= 0");
    noise.validate();
    species.validate();
    const double m = species.mass;
    const double tau = noise.tau;
    const double D = csl_heating_rate(noise.lambda, species.nucleon_count, noise.r_c);
    const double E = std::exp(-t / tau);
    const double omE = 1.0 - E;

    GasMoments r = m0;
    r.p2 = m0.p2 + D * (t - tau * omE);
    r.xp_sym = m0.xp_sym + 2.0 * m0.p2 * t / m +
               (D / m) * (t * t + 2.0 * tau * t * E - 2.0 * tau * tau * omE);
    r.x2 = m0.x2 + m0.xp_sym * t / m + m0.p2 * t * t / (m * m) +
           (D / (m * m)) * (t * t * t / 3.0 - 2.0 * tau * tau * t * (1.0 + E) +
                            4.0 * tau * tau * tau * omE);
    for (int i = 0; i < 3; ++i) r.x_mean[i] = m0.x_mean[i] + m0.p_mean[i] * t / m;
    return r;
}

GasMoments ccsl_harmonic_moments(const GasMoments& m0, const Ccsl& noise,
                                 const AtomSpecies& species, double omega, double t,
                                 double quad_rel_tol) {
    if (!(omega > 0.0)) throw std::domain_error("ccsl_harmonic_moments: omega must be > 0");
    if (!(t >= 0.0)) throw std::domain_error("ccsl_harmonic_moments: t must be >= 0");
    noise.validate();
    species.validate();
    const double m = species.mass;
    const double tau = noise.tau;
    const double D = csl_heating_rate(noise.lambda, species.nucleon_count, noise.r_c);

    // unitary part shared with the white-noise propagator at lambda = 0
    GasMoments r = csl_harmonic_step(m0, Csl{0.0, noise.r_c}, species, omega, t);
    if (noise.lambda == 0.0 || t == 0.0) return r;

    // the integrands carry an exp(-s/tau) layer at s = 0 that a rule across
    // the whole span cannot see when tau << t; integrate the layer window
    // separately
    const double split = std::min(10.0 * tau, t);
    const auto quad = [&](const std::function<double(double)>& f) {
        double v = integrate_gk(f, 0.0, split, quad_rel_tol, 1e-30).value;
        if (split < t) v += integrate_gk(f, split, t, quad_rel_tol, 1e-30).value;
        return v;
    };

    const auto g = [&](double s) { return g_kernel(s, omega, tau); };
    // int_0^t g(s) sin(2 omega (t-s)) ds
    const double q1 = quad([&](double s) { return g(s) * std::sin(2.0 * omega * (t - s)); });
    // int_0^t g(s) (1 - cos(2 omega (t-s))) ds
    const double q2 = quad([&](double s) { return g(s) * one_minus_cos(2.0 * omega * (t - s)); });
    // int_0^t f(s) cos(omega s) (t-s) ds, the collapsed double integral of
    // the damped cosine
    const double q3 = quad([&](double s) {
        return std::exp(-s / tau) * std::cos(omega * s) / (2.0 * tau) * (t - s);
    });

    r.xp_sym += (2.0 * D / (omega * m)) * q1;
    r.x2 += (D / (omega * omega * m * m)) * q2;
    r.p2 += 2.0 * D * q3 - D * q2;
    return r;
}

ValidityReport white_noise_validity(const Ccsl& noise, const Protocol& protocol) {
    noise.validate();
    protocol.validate();
    constexpr double kMarginThreshold = 0.1;
    const double h = PhysicalConstants::hbar;
    const double m = protocol.species.mass;
    const double tau = noise.tau;
    const double rc = noise.r_c;
    const double p_max = norm3(protocol.initial.p_mean) + std::sqrt(protocol.initial.p2);

    ValidityReport rep;
    rep.cond_omega_tau.margin = protocol.omega * tau;
    // |Q| = hbar/r_C from the Gaussian momentum-transfer cutoff
    rep.cond_momentum.margin = p_max * tau / (m * rc);
    rep.cond_q2.margin = h * tau / (2.0 * m * rc * rc);
    for (auto* c : {&rep.cond_omega_tau, &rep.cond_momentum, &rep.cond_q2})
        c->holds = c->margin < kMarginThreshold;

    if (rc >= 1e-5)
        rep.regime_omega_min = 1e3;
    else if (rc >= 1e-6)
        rep.regime_omega_min = 1e-3 / rc;
    else
        rep.regime_omega_min = 1e-9 / (rc * rc);
    return rep;
}

}  // namespace coldkick
