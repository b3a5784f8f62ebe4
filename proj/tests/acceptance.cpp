// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Every tolerance is pinned here, in code.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <vector>

#include "coldkick/ccsl.hpp"
#include "coldkick/csl.hpp"
#include "coldkick/dcsl.hpp"
#include "coldkick/exclusion.hpp"
#include "coldkick/kick_error.hpp"
#include "coldkick/model.hpp"
#include "coldkick/oracle.hpp"
#include "coldkick/pipeline.hpp"

using namespace coldkick;

namespace {

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
    if (!ok) ++failures;
}

double rel(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

double max_rel(const GasMoments& a, const GasMoments& b) {
    return std::max({rel(a.x2, b.x2), rel(a.xp_sym, b.xp_sym), rel(a.p2, b.p2)});
}

std::string fmt(const char* f, ...) {
    char buf[256];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

// 1. delta_kick_frequency(0.034, 1.1, 1.8, 0.017) = 6.53 +- 0.01 rad/s
void criterion1() {
    const double w = delta_kick_frequency(0.034, 1.1, 1.8, 0.017);
    report(1, "kick frequency", std::abs(w - 6.53) <= 0.01, fmt("omega = %.6f rad/s", w));
}

// 2. lambda = 0 default protocol: per-axis sigma where the experiment saw it
void criterion2() {
    const Protocol p = default_protocol();
    const double sigma = per_axis_sigma(run_protocol_final(p, QmOnly{}));
    report(2, "QM consistency", sigma >= 42e-6 && sigma <= 198e-6,
           fmt("sigma = %.2f um in [42, 198]", sigma * 1e6));
}

// 3. analytic lambda/r_C^2 limit within x2 of 5e6, scan boundary consistent
void criterion3() {
    const Protocol p = default_protocol();
    const MeasurementBand band = MeasurementBand::normal(120e-6, 40e-6, 0.95);
    const AnalyticCslBound b = analytic_csl_bound(p, band);
    const bool limit_ok = b.limit >= 2.5e6 && b.limit <= 1e7;

    const ExclusionGrid g = scan_exclusion(p, Csl{0.0, 1e-7}, log_axis(1e-20, 1e-2, 60),
                                           log_axis(1e-9, 1e-3, 60), band, 4);
    // boundary at the grid column closest to r_C = 1e-7 m
    double best_rc = 0.0, lambda_crit = 0.0;
    for (const auto& bp : g.boundary) {
        if (best_rc == 0.0 || std::abs(std::log10(bp.r_c / 1e-7)) <
                                  std::abs(std::log10(best_rc / 1e-7))) {
            best_rc = bp.r_c;
            lambda_crit = bp.lambda_crit;
        }
    }
    const bool scan_ok = lambda_crit >= 2.5e-8 && lambda_crit <= 1e-7;
    report(3, "CSL analytic bound", limit_ok && scan_ok,
           fmt("limit = %.3g /m^2/s (paper 5e6); boundary lambda = %.3g at rc = %.3g", b.limit,
               lambda_crit, best_rc));
}

// 4. heating signature at lambda = 1e-7, r_C = 1e-7
void criterion4() {
    const Protocol p = default_protocol();
    const double e0 = kinetic_energy(run_protocol_final(p, QmOnly{}), p.species);
    const double e1 = kinetic_energy(run_protocol_final(p, Csl{1e-7, 1e-7}), p.species);
    report(4, "heating signature", e1 - e0 > 5e-33, fmt("excess = %.3g J > 5e-33 J", e1 - e0));
}

// 5. lambda = 0 kick-time sweep: energy minimum near 20 ms at the 1e-34 J
// scale (compared per measured axis, like the position spread)
void criterion5() {
    const Protocol p = default_protocol();
    std::vector<double> grid;
    for (int i = 0; i <= 60; ++i) grid.push_back(0.005 + 0.0005 * i);
    const auto pts = sweep_kick_time(p, QmOnly{}, grid, 4);
    double best_t = 0.0, best_e = 1e300;
    for (const auto& pt : pts) {
        if (!pt.failed && pt.energy < best_e) {
            best_e = pt.energy;
            best_t = pt.parameter;
        }
    }
    const double e_axis = best_e / 3.0;
    const bool ok = best_t >= 0.015 && best_t <= 0.025 && e_axis >= 1e-34 / 3.0 &&
                    e_axis <= 3e-34;
    report(5, "kick-time sweep", ok,
           fmt("min at %.1f ms, E/axis = %.3g J (total %.3g J)", best_t * 1e3, e_axis, best_e));
}

// 6. dCSL regimes at lambda = 10^-3.5, r_C = 1e-7
void criterion6() {
    const Protocol p = default_protocol();
    const double lam = std::pow(10.0, -3.5);
    const double s_qm = per_axis_sigma(run_protocol_final(p, QmOnly{}));
    const double s_csl = per_axis_sigma(run_protocol_final(p, Csl{lam, 1e-7}));
    const double s_cold =
        per_axis_sigma(run_protocol_final(p, Dcsl{lam, 1e-7, 1e-8, {}}));
    const double s_hot = per_axis_sigma(run_protocol_final(p, Dcsl{lam, 1e-7, 1e-5, {}}));
    const double dev_cold = rel(s_cold, s_qm);
    const double dev_hot = rel(s_hot, s_csl);
    report(6, "dCSL regimes", dev_cold < 0.005 && dev_hot < 0.01,
           fmt("T=1e-8K vs QM: %.3g (<0.005); T=1e-5K vs CSL: %.3g (<0.01)", dev_cold, dev_hot));
}

// 7. boost velocity bound at the GRW-scale parameters
void criterion7() {
    const BoostBound b =
        boost_velocity_bound(Dcsl{1e-17, 1e-7, 1.0, {}}, AtomSpecies::rb87(), 3.0, 1e-6);
    const bool ok = b.bounded && b.u_max >= 0.5e13 && b.u_max <= 5e13;
    report(7, "boost bound", ok, fmt("u_max = %.3g m/s in [0.5, 5]e13", b.u_max));
}

// 8. Appendix error bound over the noise-temperature sweep. The kick-start
// state is evolved consistently per temperature; the kick frequency is the
// derived 6.53 rad/s of the frequency estimate (criterion 1).
void criterion8() {
    const Protocol p = default_protocol();
    const double w = 6.53;
    double worst = 0.0, worst_t = 0.0;
    for (double log_t = -12.0; log_t <= 2.0; log_t += 0.025) {
        const Dcsl noise{1e-5, 1e-7, std::pow(10.0, log_t), {}};
        const GasMoments m1 = dcsl_free_step(p.initial, noise, p.species, p.dt1);
        const KickErrorReport r = kick_error_bounds(m1, noise, p.species, w, 0.035);
        if (r.max_error() > worst) {
            worst = r.max_error();
            worst_t = std::pow(10.0, log_t);
        }
    }
    report(8, "appendix error bound", worst < 0.14,
           fmt("max error = %.4f at T_CSL = %.3g K (< 0.14)", worst, worst_t));
}

// 9. oracle equivalence across 100 random parameter tuples
void criterion9() {
    const Protocol p = default_protocol();
    const AtomSpecies sp = p.species;
    std::mt19937_64 rng(20260810ULL);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto log_uniform = [&](double lo, double hi) {
        return std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) * u01(rng));
    };

    double worst = 0.0;
    const char* worst_kind = "";
    int count = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const double lam = log_uniform(1e-20, 1e-3);
        const double rc = log_uniform(1e-9, 1e-3);
        const double t_csl = log_uniform(1e-12, 1e6);
        const double tau = log_uniform(1e-6, 1e-1);
        const Csl csl{lam, rc};
        const Ccsl ccsl{lam, rc, tau};
        const Dcsl dcsl{lam, rc, t_csl, {}};

        struct Case {
            const char* kind;
            GasMoments closed;
            GasMoments oracle;
        };
        const GasMoments m0 = p.initial;
        std::vector<Case> cases;
        cases.push_back({"csl-free", csl_free_step(m0, csl, sp, p.dt1),
                         oracle_propagate(OdeSystem::csl(csl, sp, 0.0), m0, p.dt1)});
        cases.push_back({"csl-harmonic", csl_harmonic_step(m0, csl, sp, p.omega, p.dt2),
                         oracle_propagate(OdeSystem::csl(csl, sp, p.omega), m0, p.dt2)});
        cases.push_back({"ccsl-free", ccsl_free_moments(m0, ccsl, sp, p.dt1),
                         oracle_propagate(OdeSystem::ccsl(ccsl, sp, 0.0), m0, p.dt1)});
        cases.push_back({"ccsl-harmonic", ccsl_harmonic_moments(m0, ccsl, sp, p.omega, p.dt2),
                         oracle_propagate(OdeSystem::ccsl(ccsl, sp, p.omega), m0, p.dt2)});
        cases.push_back({"dcsl-free", dcsl_free_step(m0, dcsl, sp, p.dt1),
                         oracle_propagate(OdeSystem::dcsl(dcsl, sp, 0.0), m0, p.dt1)});
        for (const auto& c : cases) {
            ++count;
            const double err = max_rel(c.closed, c.oracle);
            if (err > worst) {
                worst = err;
                worst_kind = c.kind;
            }
        }
    }
    report(9, "oracle equivalence", worst < 1e-6,
           fmt("%d checks, worst = %.3g (%s) < 1e-6", count, worst, worst_kind));
}

// 10. limit recovery and semigroup composition
void criterion10() {
    const Protocol p = default_protocol();
    const AtomSpecies sp = p.species;
    const GasMoments m0 = p.initial;

    // cCSL at tau = 1e-6 s vs white CSL over the full protocol
    const GasMoments cc = run_protocol_final(p, Ccsl{1e-5, 1e-7, 1e-6});
    const GasMoments wn = run_protocol_final(p, Csl{1e-5, 1e-7});
    const double dev_ccsl = max_rel(cc, wn);

    // dCSL at T = 1e6 K vs white CSL; the kick stage integrates the full
    // dissipative system so the comparison probes the model limit itself
    const Dcsl hot{1e-5, 1e-7, 1e6, {}};
    GasMoments dc = dcsl_free_step(m0, hot, sp, p.dt1);
    dc = dcsl_harmonic_step(dc, hot, sp, p.omega, p.dt2, KickMode::Numeric, 1e-5);
    dc = dcsl_free_step(dc, hot, sp, p.dt3);
    const double dev_dcsl = max_rel(dc, wn);

    // semigroup composition of the Markovian steps
    double dev_semi = 0.0;
    {
        const Csl n{1e-6, 1e-7};
        const GasMoments two = csl_free_step(csl_free_step(m0, n, sp, 0.7), n, sp, 1.1);
        dev_semi = std::max(dev_semi, max_rel(two, csl_free_step(m0, n, sp, 1.8)));
        const GasMoments twoh =
            csl_harmonic_step(csl_harmonic_step(m0, n, sp, 6.7, 0.02), n, sp, 6.7, 0.015);
        dev_semi = std::max(dev_semi, max_rel(twoh, csl_harmonic_step(m0, n, sp, 6.7, 0.035)));
        const Dcsl d{1e-5, 1e-7, 1e-3, {}};
        const GasMoments twod = dcsl_free_step(dcsl_free_step(m0, d, sp, 0.7), d, sp, 1.1);
        dev_semi = std::max(dev_semi, max_rel(twod, dcsl_free_step(m0, d, sp, 1.8)));
    }
    report(10, "limit recovery", dev_ccsl < 1e-3 && dev_dcsl < 1e-4 && dev_semi < 1e-12,
           fmt("ccsl %.3g (<1e-3), dcsl %.3g (<1e-4), semigroup %.3g (<1e-12)", dev_ccsl,
               dev_dcsl, dev_semi));
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    const double sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d/10 criteria passed in %.1f s\n", 10 - failures, sec);
    return failures == 0 ? 0 : 1;
}
