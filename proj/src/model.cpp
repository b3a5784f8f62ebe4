#include "coldkick/model.hpp"

#include <cmath>

namespace coldkick {

double delta_kick_frequency(double dt_min, double dt1, double dt3, double gamma2) {
    if (!(dt_min > 0.0 && dt1 > 0.0 && dt3 > 0.0))
        throw std::domain_error("delta_kick_frequency: durations must be > 0");
    if (!(gamma2 >= 0.0 && gamma2 <= 1.0))
        throw std::domain_error("delta_kick_frequency: gamma2 must be in [0, 1]");
    return std::sqrt((1.0 / dt_min) * (1.0 / dt3 + (1.0 - gamma2) / dt1));
}

double moments_from_temperature(double temperature, const AtomSpecies& species) {
    if (!(temperature >= 0.0))
        throw std::domain_error("moments_from_temperature: temperature must be >= 0");
    species.validate();
    return 3.0 * species.mass * PhysicalConstants::k_B * temperature;
}

double temperature_from_moments(double p2, const AtomSpecies& species) {
    if (!(p2 >= 0.0)) throw std::domain_error("temperature_from_moments: p2 must be >= 0");
    species.validate();
    return p2 / (3.0 * species.mass * PhysicalConstants::k_B);
}

double kinetic_energy(const GasMoments& moments, const AtomSpecies& species) {
    moments.validate();
    species.validate();
    return moments.p2 / (2.0 * species.mass);
}

double dcsl_k(double t_csl, const AtomSpecies& species, double r_c) {
    if (!(t_csl > 0.0)) throw std::domain_error("dcsl_k: t_csl must be > 0");
    if (!(r_c > 0.0)) throw std::domain_error("dcsl_k: r_c must be > 0");
    species.validate();
    const double h = PhysicalConstants::hbar;
    return h * h / (8.0 * species.mass * PhysicalConstants::k_B * t_csl * r_c * r_c);
}

double csl_heating_rate(double lambda, int nucleon_count, double r_c) {
    const double h = PhysicalConstants::hbar;
    const double a2 = static_cast<double>(nucleon_count) * static_cast<double>(nucleon_count);
    return 3.0 * lambda * a2 * h * h / (2.0 * r_c * r_c);
}

GasMoments initial_moments(double sigma_axis, double temperature, const AtomSpecies& species) {
    GasMoments m;
    m.x2 = 3.0 * sigma_axis * sigma_axis;
    m.p2 = moments_from_temperature(temperature, species);
    m.xp_sym = 0.0;
    return m;
}

Protocol default_protocol() {
    Protocol p;
    p.dt1 = 1.1;
    p.dt2 = 0.035;
    p.dt3 = 1.8;
    p.omega = 6.7;
    p.species = AtomSpecies::rb87();
    p.initial = initial_moments(56e-6, 1600e-12, p.species);
    return p;
}

}  // namespace coldkick
