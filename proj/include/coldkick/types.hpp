#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

namespace coldkick {

// CODATA-fixed constants, SI.
struct PhysicalConstants {
    static constexpr double hbar = 1.054571817e-34;  // J s
    static constexpr double k_B = 1.380649e-23;      // J/K
};

using Vec3 = std::array<double, 3>;

inline double norm3(const Vec3& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

struct AtomSpecies {
    double mass = 1.44e-25;   // kg
    int nucleon_count = 87;   // A

    void validate() const {
        if (!(mass > 0.0)) throw std::domain_error("species: mass must be > 0");
        if (nucleon_count < 1) throw std::domain_error("species: nucleon_count must be >= 1");
    }
    static AtomSpecies rb87() { return AtomSpecies{1.44e-25, 87}; }
};

// Second moments of one atom, 3D totals over the Cartesian components.
// Per-axis position spread is sqrt(x2/3).
struct GasMoments {
    double x2 = 0.0;       // <x^2>, m^2
    double p2 = 0.0;       // <p^2>, kg^2 m^2/s^2
    double xp_sym = 0.0;   // <x.p + p.x>, J s
    Vec3 x_mean{0.0, 0.0, 0.0};  // m
    Vec3 p_mean{0.0, 0.0, 0.0};  // kg m/s

    void validate() const {
        if (!(x2 >= 0.0)) throw std::domain_error("moments: x2 must be >= 0");
        if (!(p2 >= 0.0)) throw std::domain_error("moments: p2 must be >= 0");
        if (!std::isfinite(xp_sym)) throw std::domain_error("moments: xp_sym must be finite");
    }
};

// Stage timings of the delta-kick protocol. Time origin is trap release;
// the kick occupies [dt1, dt1+dt2]; dt3 is measured from kick end.
struct Protocol {
    double dt1 = 1.1;     // s, first free flight
    double dt2 = 0.035;   // s, kick duration
    double dt3 = 1.8;     // s, second free flight (kick end -> detection)
    double omega = 6.7;   // rad/s, kick trap frequency
    AtomSpecies species = AtomSpecies::rb87();
    GasMoments initial;

    void validate() const {
        if (!(dt1 >= 0.0 && dt2 >= 0.0 && dt3 >= 0.0))
            throw std::domain_error("protocol: durations must be >= 0");
        if (!(omega >= 0.0)) throw std::domain_error("protocol: omega must be >= 0");
        species.validate();
        initial.validate();
    }
    double detection_time() const { return dt1 + dt2 + dt3; }
};

struct QmOnly {};

struct Csl {
    double lambda = 0.0;  // 1/s
    double r_c = 1e-7;    // m
    void validate() const {
        if (!(lambda >= 0.0)) throw std::domain_error("csl: lambda must be >= 0");
        if (!(r_c > 0.0)) throw std::domain_error("csl: r_c must be > 0");
    }
};

struct Ccsl {
    double lambda = 0.0;  // 1/s
    double r_c = 1e-7;    // m
    double tau = 1e-3;    // s, noise correlation time
    void validate() const {
        if (!(lambda >= 0.0)) throw std::domain_error("ccsl: lambda must be >= 0");
        if (!(r_c > 0.0)) throw std::domain_error("ccsl: r_c must be > 0");
        if (!(tau > 0.0)) throw std::domain_error("ccsl: tau must be > 0");
    }
};

struct Dcsl {
    double lambda = 0.0;  // 1/s
    double r_c = 1e-7;    // m
    double t_csl = 1.0;   // K, noise temperature
    Vec3 boost{0.0, 0.0, 0.0};  // m/s, noise drift velocity in the lab frame
    void validate() const {
        if (!(lambda >= 0.0)) throw std::domain_error("dcsl: lambda must be >= 0");
        if (!(r_c > 0.0)) throw std::domain_error("dcsl: r_c must be > 0");
        if (!(t_csl > 0.0)) throw std::domain_error("dcsl: t_csl must be > 0");
        for (double u : boost)
            if (!std::isfinite(u)) throw std::domain_error("dcsl: boost must be finite");
    }
};

using NoiseModel = std::variant<QmOnly, Csl, Ccsl, Dcsl>;

inline std::string noise_tag(const NoiseModel& n) {
    struct V {
        std::string operator()(const QmOnly&) const { return "qm"; }
        std::string operator()(const Csl&) const { return "csl"; }
        std::string operator()(const Ccsl&) const { return "ccsl"; }
        std::string operator()(const Dcsl&) const { return "dcsl"; }
    };
    return std::visit(V{}, n);
}

inline void validate(const NoiseModel& n) {
    std::visit([](const auto& m) {
        if constexpr (!std::is_same_v<std::decay_t<decltype(m)>, QmOnly>) m.validate();
    }, n);
}

// Raised when an iterative numerical procedure fails to reach its target.
class NumericalError : public std::runtime_error {
  public:
    NumericalError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_tolerance(achieved) {}
    double achieved_tolerance;
};

}  // namespace coldkick
