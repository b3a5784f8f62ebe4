#include "coldkick/pipeline.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "coldkick/ccsl.hpp"
#include "coldkick/csl.hpp"
#include "coldkick/dcsl.hpp"
#include "coldkick/model.hpp"

namespace coldkick {
namespace {

// Evaluate the stage solution at local time t from the stage-start moments.
GasMoments stage_free(const GasMoments& m0, const NoiseModel& noise, const AtomSpecies& sp,
                      double t) {
    struct V {
        const GasMoments& m0;
        const AtomSpecies& sp;
        double t;
        GasMoments operator()(const QmOnly&) const {
            return csl_free_step(m0, Csl{0.0, 1e-7}, sp, t);
        }
        GasMoments operator()(const Csl& n) const { return csl_free_step(m0, n, sp, t); }
        GasMoments operator()(const Ccsl& n) const { return ccsl_free_moments(m0, n, sp, t); }
        GasMoments operator()(const Dcsl& n) const {
            const bool boosted = n.boost[0] != 0.0 || n.boost[1] != 0.0 || n.boost[2] != 0.0;
            return boosted ? boost_mean_step(m0, n, sp, t) : dcsl_free_step(m0, n, sp, t);
        }
    };
    return std::visit(V{m0, sp, t}, noise);
}

GasMoments stage_kick(const GasMoments& m0, const NoiseModel& noise, const AtomSpecies& sp,
                      double omega, double t) {
    struct V {
        const GasMoments& m0;
        const AtomSpecies& sp;
        double omega, t;
        GasMoments operator()(const QmOnly&) const {
            return csl_harmonic_step(m0, Csl{0.0, 1e-7}, sp, omega, t);
        }
        GasMoments operator()(const Csl& n) const {
            return csl_harmonic_step(m0, n, sp, omega, t);
        }
        GasMoments operator()(const Ccsl& n) const {
            return ccsl_harmonic_moments(m0, n, sp, omega, t);
        }
        GasMoments operator()(const Dcsl& n) const {
            return dcsl_harmonic_step(m0, n, sp, omega, t, KickMode::AnalyticQm);
        }
    };
    return std::visit(V{m0, sp, omega, t}, noise);
}

}  // namespace

double per_axis_sigma(const GasMoments& m) { return std::sqrt(m.x2 / 3.0); }

TrajectoryRecord run_protocol(const Protocol& protocol, const NoiseModel& noise,
                              double sampling) {
    if (!(sampling > 0.0)) throw std::domain_error("run_protocol: sampling must be > 0");
    protocol.validate();
    validate(noise);
    const AtomSpecies& sp = protocol.species;

    struct Stage {
        double duration;
        int tag;
        std::function<GasMoments(const GasMoments&, double)> eval;
    };
    std::vector<Stage> stages;
    stages.push_back({protocol.dt1, 0, [&](const GasMoments& m, double t) {
                          return stage_free(m, noise, sp, t);
                      }});
    if (protocol.dt2 > 0.0) {
        if (!(protocol.omega > 0.0))
            throw std::domain_error("run_protocol: kick stage requires omega > 0");
        stages.push_back({protocol.dt2, 1, [&](const GasMoments& m, double t) {
                              return stage_kick(m, noise, sp, protocol.omega, t);
                          }});
    }
    stages.push_back({protocol.dt3, 2, [&](const GasMoments& m, double t) {
                          return stage_free(m, noise, sp, t);
                      }});

    TrajectoryRecord rec;
    GasMoments state = protocol.initial;
    double t0 = 0.0;
    rec.times.push_back(0.0);
    rec.moments.push_back(state);
    rec.stage.push_back(stages.front().tag);

    for (size_t si = 0; si < stages.size(); ++si) {
        const Stage& st = stages[si];
        try {
            const long nsamp = static_cast<long>(std::floor(st.duration / sampling));
            for (long i = 1; i <= nsamp; ++i) {
                const double tl = static_cast<double>(i) * sampling;
                if (tl >= st.duration) break;
                rec.times.push_back(t0 + tl);
                rec.moments.push_back(st.eval(state, tl));
                rec.stage.push_back(st.tag);
            }
            state = st.eval(state, st.duration);
        } catch (const std::exception& e) {
            throw std::runtime_error("stage " + std::to_string(si) + ": " + e.what());
        }
        t0 += st.duration;
        if (st.duration > 0.0) {
            rec.times.push_back(t0);
            rec.moments.push_back(state);
            rec.stage.push_back(st.tag);
        }
    }

    rec.final_moments = state;
    rec.final_sigma_x = per_axis_sigma(state);
    rec.final_energy = kinetic_energy(state, sp);
    rec.final_temperature = 2.0 * rec.final_energy / (3.0 * PhysicalConstants::k_B);
    return rec;
}

GasMoments run_protocol_final(const Protocol& protocol, const NoiseModel& noise) {
    protocol.validate();
    validate(noise);
    const AtomSpecies& sp = protocol.species;
    GasMoments state = stage_free(protocol.initial, noise, sp, protocol.dt1);
    if (protocol.dt2 > 0.0) {
        if (!(protocol.omega > 0.0))
            throw std::domain_error("run_protocol: kick stage requires omega > 0");
        state = stage_kick(state, noise, sp, protocol.omega, protocol.dt2);
    }
    return stage_free(state, noise, sp, protocol.dt3);
}

namespace {

// Shared sweep executor: grid points are independent, results merged by
// index so the output is identical for any worker count.
std::vector<SweepPoint> run_sweep(size_t n, int workers,
                                  const std::function<SweepPoint(size_t)>& eval) {
    std::vector<SweepPoint> out(n);
    if (workers > 1) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers)
        for (long i = 0; i < static_cast<long>(n); ++i) out[i] = eval(i);
#else
        for (size_t i = 0; i < n; ++i) out[i] = eval(i);
#endif
    } else {
        for (size_t i = 0; i < n; ++i) out[i] = eval(i);
    }
    return out;
}

SweepPoint guarded(double param, const std::function<GasMoments()>& run) {
    SweepPoint p;
    p.parameter = param;
    try {
        const GasMoments m = run();
        p.sigma_x = per_axis_sigma(m);
        p.energy = m.p2;  // filled as raw p2, converted below by callers
    } catch (const std::exception& e) {
        p.failed = true;
        p.error = e.what();
    }
    return p;
}

}  // namespace

std::vector<SweepPoint> sweep_kick_time(const Protocol& protocol, const NoiseModel& noise,
                                        const std::vector<double>& dt2_grid, int workers) {
    for (double d : dt2_grid)
        if (!(d >= 0.0)) throw std::domain_error("sweep_kick_time: grid values must be >= 0");
    const double mass = protocol.species.mass;
    return run_sweep(dt2_grid.size(), workers, [&](size_t i) {
        Protocol p = protocol;
        p.dt2 = dt2_grid[i];
        SweepPoint sp = guarded(dt2_grid[i], [&] { return run_protocol_final(p, noise); });
        if (!sp.failed) sp.energy /= 2.0 * mass;
        return sp;
    });
}

std::vector<SweepPoint> sweep_noise_temperature(const Protocol& protocol, const Dcsl& base,
                                                const std::vector<double>& t_grid, int workers) {
    for (double t : t_grid)
        if (!(t > 0.0)) throw std::domain_error("sweep_noise_temperature: grid must be > 0");
    const double mass = protocol.species.mass;
    return run_sweep(t_grid.size(), workers, [&](size_t i) {
        Dcsl n = base;
        n.t_csl = t_grid[i];
        SweepPoint sp =
            guarded(t_grid[i], [&] { return run_protocol_final(protocol, NoiseModel{n}); });
        if (!sp.failed) sp.energy /= 2.0 * mass;
        return sp;
    });
}

std::vector<SweepPoint> sweep_rc(const Protocol& protocol, const Dcsl& base,
                                 const std::vector<double>& rc_grid, int workers) {
    for (double r : rc_grid)
        if (!(r > 0.0)) throw std::domain_error("sweep_rc: grid must be > 0");
    const double mass = protocol.species.mass;
    return run_sweep(rc_grid.size(), workers, [&](size_t i) {
        Dcsl n = base;
        n.r_c = rc_grid[i];
        SweepPoint sp =
            guarded(rc_grid[i], [&] { return run_protocol_final(protocol, NoiseModel{n}); });
        if (!sp.failed) sp.energy /= 2.0 * mass;
        return sp;
    });
}

}  // namespace coldkick
