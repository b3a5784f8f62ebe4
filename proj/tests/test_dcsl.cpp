#include <doctest.h>

#include <cmath>

#include "coldkick/csl.hpp"
#include "coldkick/dcsl.hpp"
#include "coldkick/kick_error.hpp"
#include "coldkick/model.hpp"
#include "coldkick/oracle.hpp"

using namespace coldkick;

namespace {

double rel(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

double max_rel(const GasMoments& a, const GasMoments& b) {
    return std::max({rel(a.x2, b.x2), rel(a.xp_sym, b.xp_sym), rel(a.p2, b.p2)});
}

GasMoments default_initial() { return default_protocol().initial; }

}  // namespace

TEST_SUITE_BEGIN("dcsl");

TEST_CASE("rates: frozen value and structural identities") {
    const AtomSpecies sp = AtomSpecies::rb87();
    const DcslRates r = dcsl_rates(Dcsl{1e-17, 1e-7, 1.0, {}}, sp);
    // frozen one-line formula evaluation of B
    CHECK(rel(r.big_b, 1.0584855638792673e-20) < 1e-12);
    CHECK(rel(r.big_b, 0.5 * (1.0 + r.k) * r.chi) < 1e-14);
    const double h = PhysicalConstants::hbar;
    CHECK(rel(r.p2_as, 3.0 * h * h / (8.0 * r.k * 1e-14)) < 1e-14);
}

TEST_CASE("rates: lambda = 0 switches everything off") {
    const DcslRates r = dcsl_rates(Dcsl{0.0, 1e-7, 1.0, {}}, AtomSpecies::rb87());
    CHECK(r.chi == 0.0);
    CHECK(r.big_b == 0.0);
    CHECK(r.alpha == 0.0);
    CHECK(r.heating_rate == 0.0);
}

TEST_CASE("rates: chi p2_as approaches the white-noise heating rate as k -> 0") {
    const AtomSpecies sp = AtomSpecies::rb87();
    const DcslRates r = dcsl_rates(Dcsl{1e-8, 1e-7, 1e6, {}}, sp);
    const double d = csl_heating_rate(1e-8, sp.nucleon_count, 1e-7);
    CHECK(rel(r.heating_rate, d) < 1e-5);
    CHECK(rel(r.chi * r.p2_as, d) < 1e-5);
}

TEST_CASE("free step: p2 fixed point is exact") {
    const AtomSpecies sp = AtomSpecies::rb87();
    const Dcsl noise{3.16227766016838e-4, 1e-4, 1e-12, {}};  // k ~ 0.07, chi ~ 0.5/s
    const DcslRates r = dcsl_rates(noise, sp);
    const GasMoments m = dcsl_free_step(default_initial(), noise, sp, 1e4);
    CHECK(rel(m.p2, r.p2_as) < 1e-12);
}

TEST_CASE("free step: hot-noise limit matches white-noise CSL over 3 s") {
    const AtomSpecies sp = AtomSpecies::rb87();
    const GasMoments d = dcsl_free_step(default_initial(), Dcsl{1e-5, 1e-7, 1e6, {}}, sp, 3.0);
    const GasMoments c = csl_free_step(default_initial(), Csl{1e-5, 1e-7}, sp, 3.0);
    CHECK(max_rel(d, c) < 1e-4);
}

TEST_CASE("free step: cooling regime matches the RK4 oracle") {
    const AtomSpecies sp = AtomSpecies::rb87();
    const Dcsl noise{3.16227766016838e-4, 1e-4, 1e-12, {}};
    const GasMoments a = dcsl_free_step(default_initial(), noise, sp, 1.1);
    const GasMoments o = rk4_integrate(OdeSystem::dcsl(noise, sp, 0.0), default_initial(), 1.1,
                                       default_oracle_step(1.1));
    CHECK(max_rel(a, o) < 1e-8);
    CHECK(a.p2 < default_initial().p2);  // p2_0 > p2_as: dissipation cools
}

TEST_CASE("free step: semigroup composition") {
    const AtomSpecies sp = AtomSpecies::rb87();
    for (const Dcsl& noise :
         {Dcsl{3.16227766016838e-4, 1e-4, 1e-12, {}}, Dcsl{1e-5, 1e-7, 1.0, {}},
          Dcsl{1e-8, 1e-7, 1e-7, {}}}) {
        const GasMoments two = dcsl_free_step(dcsl_free_step(default_initial(), noise, sp, 0.7),
                                              noise, sp, 1.1);
        const GasMoments one = dcsl_free_step(default_initial(), noise, sp, 1.8);
        CHECK(max_rel(two, one) < 1e-12);
    }
}

TEST_CASE("free step: p2 approaches p2_as monotonically from either side") {
    const AtomSpecies sp = AtomSpecies::rb87();
    const Dcsl cold{3.16227766016838e-4, 1e-4, 1e-12, {}};  // p2_as below p2_0
    const Dcsl hot{3.16227766016838e-4, 1e-4, 1e-3, {}};    // p2_as above p2_0
    for (const Dcsl& noise : {cold, hot}) {
        const DcslRates r = dcsl_rates(noise, sp);
        double prev_gap = default_initial().p2 - r.p2_as;
        for (double t : {0.3, 0.8, 1.5, 3.0, 6.0}) {
            const double gap = dcsl_free_step(default_initial(), noise, sp, t).p2 - r.p2_as;
            CHECK(gap * prev_gap >= 0.0);               // sign never flips
            CHECK(std::abs(gap) < std::abs(prev_gap));  // strictly shrinking
            prev_gap = gap;
        }
    }
}

TEST_CASE("final spread grows with noise temperature") {
    const AtomSpecies sp = AtomSpecies::rb87();
    double prev = 0.0;
    for (double t_csl : {1e-12, 1e-6, 1.0, 1e6}) {
        const Dcsl noise{1e-5, 1e-7, t_csl, {}};
        GasMoments m = dcsl_free_step(default_initial(), noise, sp, 1.1);
        m = dcsl_harmonic_step(m, noise, sp, 6.7, 0.035);
        m = dcsl_free_step(m, noise, sp, 1.8);
        CHECK(m.x2 >= prev * (1.0 - 1e-12));
        prev = m.x2;
    }
}

TEST_CASE("harmonic step: modes coincide at lambda = 0") {
    const AtomSpecies sp = AtomSpecies::rb87();
    const Dcsl noise{0.0, 1e-7, 1.0, {}};
    const GasMoments a =
        dcsl_harmonic_step(default_initial(), noise, sp, 6.7, 0.035, KickMode::AnalyticQm);
    const GasMoments n =
        dcsl_harmonic_step(default_initial(), noise, sp, 6.7, 0.035, KickMode::Numeric);
    CHECK(a.x2 == n.x2);
    CHECK(a.p2 == n.p2);
    CHECK(a.xp_sym == n.xp_sym);
}

TEST_CASE("harmonic step: mode difference stays below the certified bound") {
    const AtomSpecies sp = AtomSpecies::rb87();
    const Dcsl noise{1e-5, 1e-7, 1.0, {}};
    const GasMoments m1 = dcsl_free_step(default_initial(), noise, sp, 1.1);
    const GasMoments qm = dcsl_harmonic_step(m1, noise, sp, 6.7, 0.035, KickMode::AnalyticQm);
    const GasMoments full = dcsl_harmonic_step(m1, noise, sp, 6.7, 0.035, KickMode::Numeric,
                                               1e-5);
    const KickErrorReport rep = kick_error_bounds(m1, noise, sp, 6.7, 0.035);
    // relative differences in the certified sense: |full - qm| over the
    // change of the unitary trajectory
    const double h = PhysicalConstants::hbar;
    const double m = sp.mass, w = 6.7;
    const double scale[3] = {m * w / h, 1.0 / h, 1.0 / (h * m * w)};
    const double num[3] = {std::abs(full.x2 - qm.x2) * scale[0],
                           std::abs(full.xp_sym - qm.xp_sym) * scale[1],
                           std::abs(full.p2 - qm.p2) * scale[2]};
    const double den[3] = {std::abs(qm.x2 - m1.x2) * scale[0],
                           std::abs(qm.xp_sym - m1.xp_sym) * scale[1],
                           std::abs(qm.p2 - m1.p2) * scale[2]};
    const double bounds[3] = {rep.err_x2, rep.err_xp, rep.err_p2};
    for (int i = 0; i < 3; ++i) {
        CHECK(num[i] / den[i] <= bounds[i] * (1.0 + 1e-6));
        CHECK(num[i] / den[i] < 0.14);
    }
}

TEST_CASE("harmonic step: numeric mode converges under step halving") {
    const AtomSpecies sp = AtomSpecies::rb87();
    const Dcsl noise{1e-5, 1e-7, 1.0, {}};
    const GasMoments m1 = dcsl_free_step(default_initial(), noise, sp, 1.1);
    const GasMoments a = dcsl_harmonic_step(m1, noise, sp, 6.7, 0.035, KickMode::Numeric, 1e-4);
    const GasMoments b = dcsl_harmonic_step(m1, noise, sp, 6.7, 0.035, KickMode::Numeric, 5e-5);
    CHECK(max_rel(a, b) < 1e-8);
}

TEST_CASE("boost: means stay pinned at zero without drift") {
    const AtomSpecies sp = AtomSpecies::rb87();
    const Dcsl noise{1e-17, 1e-7, 1.0, {0.0, 0.0, 0.0}};
    const GasMoments m = boost_mean_step(default_initial(), noise, sp, 3.0);
    for (int i = 0; i < 3; ++i) {
        CHECK(m.x_mean[i] == 0.0);
        CHECK(m.p_mean[i] == 0.0);
    }
}

TEST_CASE("boost: small-Bt displacement is (1/2) u B t^2") {
    const AtomSpecies sp = AtomSpecies::rb87();
    const Dcsl noise{1e-17, 1e-7, 1.0, {1e7, 0.0, 0.0}};
    const DcslRates r = dcsl_rates(noise, sp);
    const GasMoments m = boost_mean_step(default_initial(), noise, sp, 3.0);
    CHECK(rel(m.x_mean[0], 0.5 * 1e7 * r.big_b * 9.0) < 1e-9);
    CHECK(m.x_mean[1] == 0.0);
}

TEST_CASE("boost: p_mean relaxes to m u") {
    const AtomSpecies sp = AtomSpecies::rb87();
    // strong coupling so B dt >> 1 is reachable
    const Dcsl noise{1e-3, 1e-4, 1e-12, {2.5, 0.0, 0.0}};
    const DcslRates r = dcsl_rates(noise, sp);
    REQUIRE(r.big_b > 0.1);
    const GasMoments m = boost_mean_step(default_initial(), noise, sp, 50.0 / r.big_b);
    CHECK(rel(m.p_mean[0], sp.mass * 2.5) < 1e-12);
}

TEST_CASE("boost velocity bound") {
    const AtomSpecies sp = AtomSpecies::rb87();
    const Dcsl noise{1e-17, 1e-7, 1.0, {}};
    const BoostBound b = boost_velocity_bound(noise, sp, 3.0, 1e-6);
    CHECK(b.bounded);
    // frozen: 2e-6/(1.0584855638792673e-20 * 9)
    CHECK(rel(b.u_max, 2.0994355502383523e13) < 1e-10);
    CHECK(b.small_bt);
    const BoostBound b2 = boost_velocity_bound(noise, sp, 3.0, 2e-6);
    CHECK(rel(b2.u_max, 2.0 * b.u_max) < 1e-14);
    // B scales linearly in lambda at fixed k, so u_max scales inversely
    const BoostBound b10 = boost_velocity_bound(Dcsl{1e-16, 1e-7, 1.0, {}}, sp, 3.0, 1e-6);
    CHECK(rel(b10.u_max, b.u_max / 10.0) < 1e-12);
    // lambda = 0 leaves the velocity unbounded
    const BoostBound ub = boost_velocity_bound(Dcsl{0.0, 1e-7, 1.0, {}}, sp, 3.0, 1e-6);
    CHECK_FALSE(ub.bounded);
}

TEST_SUITE_END();
