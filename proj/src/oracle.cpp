#include "coldkick/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "coldkick/model.hpp"
#include "coldkick/special.hpp"

namespace coldkick {
namespace {

struct State {
    double x2, xp, p2;
};

struct Rhs {
    OdeKind kind;
    double m;
    double omega;
    double D;      // 3 lambda A^2 hbar^2 / (2 r_C^2)
    double tau;    // cCSL
    double chi, big_b, alpha, p2_as;  // dCSL

    State operator()(double t, const State& y) const {
        State d{};
        const double w2 = omega * omega;
        switch (kind) {
            case OdeKind::CslFree:
            case OdeKind::CslHarmonic:
                d.x2 = y.xp / m;
                d.xp = 2.0 * y.p2 / m - 2.0 * m * w2 * y.x2;
                d.p2 = D - m * w2 * y.xp;
                break;
            case OdeKind::DcslFree:
            case OdeKind::DcslHarmonic:
                d.x2 = y.xp / m + alpha;
                d.xp = 2.0 * y.p2 / m - 2.0 * m * w2 * y.x2 - big_b * y.xp;
                d.p2 = -m * w2 * y.xp - chi * y.p2 + chi * p2_as;
                break;
            case OdeKind::CcslHistory: {
                // forcing terms carry the noise memory; they depend on t only
                const double E = std::exp(-t / tau);
                double f_xp, f_p2;
                if (omega == 0.0) {
                    f_p2 = D * (1.0 - E);
                    f_xp = (2.0 * D / m) * (tau * (1.0 - E) - t * E);
                } else {
                    const double wt = omega * tau;
                    const double den = 1.0 + wt * wt;
                    const double cwt = std::cos(omega * t), swt = std::sin(omega * t);
                    f_p2 = D * (1.0 - E * (cwt - wt * swt)) / den;
                    f_xp = (2.0 * D / m) *
                           (tau * (1.0 - E * cwt) - E * t * special::sinc(omega * t)) / den;
                }
                d.x2 = y.xp / m;
                d.xp = 2.0 * y.p2 / m - 2.0 * m * w2 * y.x2 + f_xp;
                d.p2 = -m * w2 * y.xp + f_p2;
                break;
            }
        }
        return d;
    }
};

Rhs make_rhs(const OdeSystem& sys) {
    Rhs r{};
    r.kind = sys.kind;
    r.m = sys.species.mass;
    r.omega = (sys.kind == OdeKind::CslFree || sys.kind == OdeKind::DcslFree) ? 0.0 : sys.omega;
    r.D = csl_heating_rate(sys.lambda, sys.species.nucleon_count, sys.r_c);
    r.tau = sys.tau;
    if (sys.kind == OdeKind::DcslFree || sys.kind == OdeKind::DcslHarmonic) {
        const double k = dcsl_k(sys.t_csl, sys.species, sys.r_c);
        const double a2 = static_cast<double>(sys.species.nucleon_count) *
                          static_cast<double>(sys.species.nucleon_count);
        const double onek = 1.0 + k;
        r.chi = 4.0 * k * sys.lambda * a2 / (onek * onek * onek * onek * onek);
        r.big_b = 0.5 * onek * r.chi;
        r.alpha = 6.0 * sys.lambda * a2 * sys.r_c * sys.r_c * k * k / (onek * onek * onek);
        const double h = PhysicalConstants::hbar;
        r.p2_as = 3.0 * h * h / (8.0 * k * sys.r_c * sys.r_c);
    }
    return r;
}

}  // namespace

OdeSystem OdeSystem::csl(const Csl& n, const AtomSpecies& s, double omega_or_zero) {
    OdeSystem o;
    o.kind = omega_or_zero > 0.0 ? OdeKind::CslHarmonic : OdeKind::CslFree;
    o.species = s;
    o.lambda = n.lambda;
    o.r_c = n.r_c;
    o.omega = omega_or_zero;
    return o;
}

OdeSystem OdeSystem::dcsl(const Dcsl& n, const AtomSpecies& s, double omega_or_zero) {
    OdeSystem o;
    o.kind = omega_or_zero > 0.0 ? OdeKind::DcslHarmonic : OdeKind::DcslFree;
    o.species = s;
    o.lambda = n.lambda;
    o.r_c = n.r_c;
    o.omega = omega_or_zero;
    o.t_csl = n.t_csl;
    return o;
}

OdeSystem OdeSystem::ccsl(const Ccsl& n, const AtomSpecies& s, double omega_or_zero) {
    OdeSystem o;
    o.kind = OdeKind::CcslHistory;
    o.species = s;
    o.lambda = n.lambda;
    o.r_c = n.r_c;
    o.omega = omega_or_zero;
    o.tau = n.tau;
    return o;
}

double default_oracle_step(double t_span) {
    return std::min(t_span / 1e5, 1e-4);
}

GasMoments rk4_integrate(const OdeSystem& system, const GasMoments& initial, double t_end,
                         double step, double t_start) {
    if (!(step > 0.0)) throw std::domain_error("rk4_integrate: step must be > 0");
    if (!(t_end >= 0.0)) throw std::domain_error("rk4_integrate: t_end must be >= 0");
    GasMoments out = initial;
    if (t_end == 0.0) return out;

    const Rhs rhs = make_rhs(system);
    const long n = std::max(1L, std::lround(t_end / step));
    const double h = t_end / static_cast<double>(n);

    State y{initial.x2, initial.xp_sym, initial.p2};
    double t = t_start;
    for (long i = 0; i < n; ++i) {
        const State k1 = rhs(t, y);
        const State y2{y.x2 + 0.5 * h * k1.x2, y.xp + 0.5 * h * k1.xp, y.p2 + 0.5 * h * k1.p2};
        const State k2 = rhs(t + 0.5 * h, y2);
        const State y3{y.x2 + 0.5 * h * k2.x2, y.xp + 0.5 * h * k2.xp, y.p2 + 0.5 * h * k2.p2};
        const State k3 = rhs(t + 0.5 * h, y3);
        const State y4{y.x2 + h * k3.x2, y.xp + h * k3.xp, y.p2 + h * k3.p2};
        const State k4 = rhs(t + h, y4);
        y.x2 += h / 6.0 * (k1.x2 + 2.0 * k2.x2 + 2.0 * k3.x2 + k4.x2);
        y.xp += h / 6.0 * (k1.xp + 2.0 * k2.xp + 2.0 * k3.xp + k4.xp);
        y.p2 += h / 6.0 * (k1.p2 + 2.0 * k2.p2 + 2.0 * k3.p2 + k4.p2);
        t += h;
        if (!std::isfinite(y.x2) || !std::isfinite(y.xp) || !std::isfinite(y.p2))
            throw NumericalError("rk4_integrate: state became non-finite at t=" +
                                     std::to_string(t),
                                 0.0);
    }
    out.x2 = y.x2;
    out.xp_sym = y.xp;
    out.p2 = y.p2;
    return out;
}

GasMoments oracle_propagate(const OdeSystem& system, const GasMoments& initial, double t_span) {
    const double step = default_oracle_step(t_span);
    if (system.kind == OdeKind::CcslHistory && system.tau < 100.0 * step) {
        const double layer = std::min(25.0 * system.tau, t_span);
        const GasMoments mid =
            rk4_integrate(system, initial, layer, std::min(system.tau / 8.0, step));
        return rk4_integrate(system, mid, t_span - layer, step, layer);
    }
    return rk4_integrate(system, initial, t_span, step);
}

}  // namespace coldkick
