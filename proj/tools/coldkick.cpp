#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "coldkick/ccsl.hpp"
#include "coldkick/config.hpp"
#include "coldkick/csl.hpp"
#include "coldkick/dcsl.hpp"
#include "coldkick/kick_error.hpp"
#include "coldkick/model.hpp"
#include "coldkick/oracle.hpp"
#include "coldkick/pipeline.hpp"
#include "coldkick/writers.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

using namespace coldkick;

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::string format;
    int workers = 1;
    bool oracle = false;
    double sampling = 0.0;  // 0: take from config
};

RunConfig load(const CommonOpts& o) {
    std::string path = o.config_path;
    if (path.empty()) {
        if (const char* env = std::getenv("COLDKICK_CONFIG")) path = env;
    }
    if (path.empty()) throw ConfigError("no config given (--config or COLDKICK_CONFIG)");
    RunConfig cfg = load_config(path);
    if (!o.format.empty()) {
        if (o.format != "csv" && o.format != "json")
            throw ConfigError("--format: expected csv | json");
        cfg.output.format = o.format;
    }
    if (o.sampling > 0.0) cfg.output.sampling = o.sampling;
    return cfg;
}

NoiseModel require_noise(const RunConfig& cfg) {
    if (!cfg.noise) throw ConfigError("noise model required");
    return *cfg.noise;
}

Dcsl require_dcsl(const RunConfig& cfg) {
    const NoiseModel n = require_noise(cfg);
    if (const Dcsl* d = std::get_if<Dcsl>(&n)) return *d;
    throw ConfigError("noise: this command requires a dcsl noise block");
}

// RK4 cross-check columns: per stage, re-integrate from the stage start to
// each sampled time and report relative deviations.
OracleColumns oracle_columns(const TrajectoryRecord& rec, const Protocol& protocol,
                             const NoiseModel& noise) {
    OracleColumns cols;
    const size_t n = rec.times.size();
    cols.x2_rel.assign(n, 0.0);
    cols.xp_rel.assign(n, 0.0);
    cols.p2_rel.assign(n, 0.0);

    const AtomSpecies& sp = protocol.species;
    auto system_for = [&](int stage) -> std::optional<OdeSystem> {
        const double w = stage == 1 ? protocol.omega : 0.0;
        if (std::holds_alternative<QmOnly>(noise))
            return OdeSystem::csl(Csl{0.0, 1e-7}, sp, w);
        if (const Csl* c = std::get_if<Csl>(&noise)) return OdeSystem::csl(*c, sp, w);
        if (const Ccsl* c = std::get_if<Ccsl>(&noise)) return OdeSystem::ccsl(*c, sp, w);
        if (const Dcsl* c = std::get_if<Dcsl>(&noise)) {
            if (stage == 1) return std::nullopt;  // analytic-QM kick is not the dCSL ODE
            return OdeSystem::dcsl(*c, sp, w);
        }
        return std::nullopt;
    };

    // junction records carry the completed stage's tag, so a record opens a
    // new stage exactly when its tag differs from its predecessor's
    size_t stage_start = 0;
    for (size_t i = 1; i < n; ++i) {
        if (rec.stage[i] != rec.stage[i - 1]) stage_start = i - 1;
        const auto sys = system_for(rec.stage[i]);
        if (!sys) continue;
        const double span = rec.times[i] - rec.times[stage_start];
        if (span <= 0.0) continue;
        const GasMoments o = oracle_propagate(*sys, rec.moments[stage_start], span);
        const GasMoments& m = rec.moments[i];
        auto rel = [](double a, double b) {
            const double s = std::max(std::abs(a), std::abs(b));
            return s > 0.0 ? std::abs(a - b) / s : 0.0;
        };
        cols.x2_rel[i] = rel(m.x2, o.x2);
        cols.xp_rel[i] = rel(m.xp_sym, o.xp_sym);
        cols.p2_rel[i] = rel(m.p2, o.p2);
    }
    return cols;
}

int cmd_simulate(const CommonOpts& o) {
    RunConfig cfg = load(o);
    const NoiseModel noise = require_noise(cfg);
    const Protocol protocol = resolve_protocol(cfg);
    const TrajectoryRecord rec = run_protocol(protocol, noise, cfg.output.sampling);
    std::optional<OracleColumns> oracle;
    if (o.oracle) oracle = oracle_columns(rec, protocol, noise);
    const std::string out = o.out_path.empty() ? "trajectory.csv" : o.out_path;
    write_trajectory(out, rec, protocol, noise, cfg.output, oracle);
    std::cout << "final sigma_x(axis) = " << format_double(rec.final_sigma_x) << " m, energy = "
              << format_double(rec.final_energy) << " J -> " << out << "\n";
    return kExitOk;
}

int cmd_scan(const CommonOpts& o) {
    RunConfig cfg = load(o);
    if (!cfg.scan) throw ConfigError("scan block required");
    const Protocol protocol = resolve_protocol(cfg);
    const ScanConfig& sc = *cfg.scan;
    const std::string out = o.out_path.empty() ? "grid.csv" : o.out_path;
    const std::string boundary = out + ".boundary.csv";

    if (sc.boost_u > 0.0) {
        const Dcsl base = require_dcsl(cfg);
        const ExclusionGrid grid =
            boost_exclusion(protocol, base.t_csl, sc.boost_u, sc.lambda_axis, sc.rc_axis,
                            sc.displacement_limit, o.workers);
        write_grid(out, boundary, grid, sc.band, protocol, cfg.output);
    } else {
        const NoiseModel family = require_noise(cfg);
        const ExclusionGrid grid =
            scan_exclusion(protocol, family, sc.lambda_axis, sc.rc_axis, sc.band, o.workers);
        write_grid(out, boundary, grid, sc.band, protocol, cfg.output);
    }
    std::cout << "grid -> " << out << "\n";
    return kExitOk;
}

int cmd_sweep(const CommonOpts& o) {
    RunConfig cfg = load(o);
    if (!cfg.sweep) throw ConfigError("sweep block required");
    const Protocol protocol = resolve_protocol(cfg);
    const std::string out = o.out_path.empty() ? "sweep.csv" : o.out_path;
    const NoiseModel noise = require_noise(cfg);
    std::vector<SweepPoint> points;
    std::string kind;
    switch (cfg.sweep->kind) {
        case SweepKind::KickTime:
            kind = "kick-time";
            points = sweep_kick_time(protocol, noise, cfg.sweep->grid, o.workers);
            break;
        case SweepKind::NoiseTemperature:
            kind = "noise-temperature";
            points = sweep_noise_temperature(protocol, require_dcsl(cfg), cfg.sweep->grid,
                                             o.workers);
            break;
        case SweepKind::Rc:
            kind = "rc";
            points = sweep_rc(protocol, require_dcsl(cfg), cfg.sweep->grid, o.workers);
            break;
    }
    write_sweep(out, kind, points, protocol, noise, cfg.output);
    std::cout << "sweep(" << kind << ") -> " << out << "\n";
    return kExitOk;
}

int cmd_kick_error(const CommonOpts& o) {
    RunConfig cfg = load(o);
    const Dcsl base = require_dcsl(cfg);
    const Protocol protocol = resolve_protocol(cfg);
    const std::string out = o.out_path.empty() ? "kick_error.csv" : o.out_path;

    std::vector<KickErrorRow> rows;
    // error curves vs kick duration at the configured noise temperature
    const GasMoments at_kick =
        dcsl_free_step(protocol.initial, base, protocol.species, protocol.dt1);
    for (int i = 1; i <= 35; ++i) {
        const double dt2 = protocol.dt2 * static_cast<double>(i) / 35.0;
        rows.push_back({"dt2", dt2,
                        kick_error_bounds(at_kick, base, protocol.species, protocol.omega, dt2)});
    }
    // error curves vs noise temperature at the configured kick duration;
    // the kick-start state is evolved consistently per temperature
    for (double t : log_axis(1e-12, 1e2, 57)) {
        Dcsl n = base;
        n.t_csl = t;
        const GasMoments m1 = dcsl_free_step(protocol.initial, n, protocol.species, protocol.dt1);
        rows.push_back({"t_csl", t,
                        kick_error_bounds(m1, n, protocol.species, protocol.omega, protocol.dt2)});
    }
    write_kick_error(out, rows, protocol, base, cfg.output);

    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, r.report.max_error());
    std::cout << "max error bound = " << format_double(worst) << " -> " << out << "\n";
    return kExitOk;
}

int cmd_boost_bound(const CommonOpts& o) {
    RunConfig cfg = load(o);
    const Dcsl base = require_dcsl(cfg);
    const Protocol protocol = resolve_protocol(cfg);
    const double limit = cfg.scan ? cfg.scan->displacement_limit : 1e-6;
    const BoostBound b =
        boost_velocity_bound(base, protocol.species, protocol.detection_time(), limit);
    std::cout << "B = " << format_double(b.big_b) << " 1/s\n";
    if (!b.bounded) {
        std::cout << "u_max unbounded (B = 0)\n";
    } else {
        std::cout << "u_max = " << format_double(b.u_max) << " m/s (displacement limit "
                  << format_double(limit) << " m over " << format_double(protocol.detection_time())
                  << " s)\n";
        if (!b.small_bt) std::cout << "warning: B t is not small; bound formula degrades\n";
    }
    if (!o.out_path.empty()) {
        std::ofstream f(o.out_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file: " + o.out_path);
        f << "big_b,u_max,bounded\n"
          << format_double(b.big_b, cfg.output.precision) << ","
          << format_double(b.u_max, cfg.output.precision) << "," << (b.bounded ? 1 : 0) << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Delta-kick cooled cloud simulator: collapse-noise moment dynamics, "
                 "parameter sweeps, and exclusion scans"};
    app.require_subcommand(1);

    CommonOpts opts;
    auto add_common = [&](CLI::App* sub, bool with_workers = true) {
        sub->add_option("--config", opts.config_path, "config file (or COLDKICK_CONFIG)");
        sub->add_option("--out", opts.out_path, "output file path");
        sub->add_option("--format", opts.format, "csv | json (overrides config)");
        if (with_workers) sub->add_option("--workers", opts.workers, "parallel workers");
    };

    auto* simulate = app.add_subcommand("simulate", "run one protocol, emit the trajectory");
    add_common(simulate, false);
    simulate->add_flag("--oracle", opts.oracle, "add RK4 cross-check columns");
    simulate->add_option("--sampling", opts.sampling, "sample interval in seconds");

    auto* scan = app.add_subcommand("scan", "(lambda, r_C) exclusion grid + boundary");
    add_common(scan);
    auto* sweep = app.add_subcommand("sweep", "kick-time / noise-temperature / rc sweep");
    add_common(sweep);
    auto* kick_error = app.add_subcommand("kick-error", "kick-stage error bounds and eigenvalues");
    add_common(kick_error, false);
    auto* boost_bound = app.add_subcommand("boost-bound", "noise drift velocity bound");
    add_common(boost_bound, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(opts);
        if (scan->parsed()) return cmd_scan(opts);
        if (sweep->parsed()) return cmd_sweep(opts);
        if (kick_error->parsed()) return cmd_kick_error(opts);
        if (boost_bound->parsed()) return cmd_boost_bound(opts);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
