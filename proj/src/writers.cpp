#include "coldkick/writers.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "coldkick/model.hpp"

namespace coldkick {

using nlohmann::json;

std::string format_double(double v, int precision) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    return buf;
}

std::string describe_noise(const NoiseModel& noise) {
    std::ostringstream os;
    struct V {
        std::ostringstream& os;
        void operator()(const QmOnly&) { os << "qm"; }
        void operator()(const Csl& n) {
            os << "csl lambda=" << format_double(n.lambda) << " 1/s rc=" << format_double(n.r_c)
               << " m";
        }
        void operator()(const Ccsl& n) {
            os << "ccsl lambda=" << format_double(n.lambda) << " 1/s rc=" << format_double(n.r_c)
               << " m tau=" << format_double(n.tau) << " s";
        }
        void operator()(const Dcsl& n) {
            os << "dcsl lambda=" << format_double(n.lambda) << " 1/s rc=" << format_double(n.r_c)
               << " m t_csl=" << format_double(n.t_csl) << " K";
            if (n.boost[0] != 0.0 || n.boost[1] != 0.0 || n.boost[2] != 0.0)
                os << " boost=(" << format_double(n.boost[0]) << "," << format_double(n.boost[1])
                   << "," << format_double(n.boost[2]) << ") m/s";
        }
    };
    std::visit(V{os}, noise);
    return os.str();
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);  // binary: identical bytes on every platform
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    return f;
}

void protocol_header(std::ostream& os, const Protocol& p) {
    os << "# protocol: dt1=" << format_double(p.dt1) << " s dt2=" << format_double(p.dt2)
       << " s dt3=" << format_double(p.dt3) << " s omega=" << format_double(p.omega)
       << " rad/s mass=" << format_double(p.species.mass)
       << " kg nucleons=" << p.species.nucleon_count << "\n";
    os << "# initial: x2=" << format_double(p.initial.x2)
       << " m^2 p2=" << format_double(p.initial.p2)
       << " kg^2m^2/s^2 xp_sym=" << format_double(p.initial.xp_sym) << " J s\n";
    os << "# conventions: per-axis sigma_x = sqrt(x2/3); temperature = 2E/(3 k_B); SI units\n";
}

json protocol_json(const Protocol& p) {
    return json{{"dt1_s", p.dt1},
                {"dt2_s", p.dt2},
                {"dt3_s", p.dt3},
                {"omega_rad_per_s", p.omega},
                {"mass_kg", p.species.mass},
                {"nucleons", p.species.nucleon_count},
                {"initial_x2_m2", p.initial.x2},
                {"initial_p2", p.initial.p2},
                {"initial_xp_sym", p.initial.xp_sym},
                {"conventions", "per-axis sigma_x = sqrt(x2/3); temperature = 2E/(3 k_B)"}};
}

}  // namespace

void write_trajectory(const std::string& path, const TrajectoryRecord& rec,
                      const Protocol& protocol, const NoiseModel& noise,
                      const OutputConfig& out, const std::optional<OracleColumns>& oracle) {
    const int pr = out.precision;
    if (out.format == "json") {
        json rows = json::array();
        for (size_t i = 0; i < rec.times.size(); ++i) {
            const GasMoments& m = rec.moments[i];
            json row{{"t_s", rec.times[i]},
                     {"stage", rec.stage[i]},
                     {"x2_m2", m.x2},
                     {"p2", m.p2},
                     {"xp_sym", m.xp_sym},
                     {"sigma_x_axis_m", per_axis_sigma(m)},
                     {"energy_J", kinetic_energy(m, protocol.species)},
                     {"temperature_K",
                      2.0 * kinetic_energy(m, protocol.species) / (3.0 * PhysicalConstants::k_B)}};
            if (oracle) {
                row["oracle_x2_rel"] = oracle->x2_rel[i];
                row["oracle_xp_rel"] = oracle->xp_rel[i];
                row["oracle_p2_rel"] = oracle->p2_rel[i];
            }
            rows.push_back(std::move(row));
        }
        json doc{{"protocol", protocol_json(protocol)},
                 {"noise", describe_noise(noise)},
                 {"final",
                  {{"sigma_x_axis_m", rec.final_sigma_x},
                   {"energy_J", rec.final_energy},
                   {"temperature_K", rec.final_temperature}}},
                 {"rows", rows}};
        auto f = open_out(path);
        f << doc.dump(2) << "\n";
        return;
    }

    auto f = open_out(path);
    protocol_header(f, protocol);
    f << "# noise: " << describe_noise(noise) << "\n";
    f << "t,stage,x2,p2,xp_sym,sigma_x_axis,energy,temperature";
    if (oracle) f << ",oracle_x2_rel,oracle_xp_rel,oracle_p2_rel";
    f << "\n";
    for (size_t i = 0; i < rec.times.size(); ++i) {
        const GasMoments& m = rec.moments[i];
        const double e = kinetic_energy(m, protocol.species);
        f << format_double(rec.times[i], pr) << "," << rec.stage[i] << ","
          << format_double(m.x2, pr) << "," << format_double(m.p2, pr) << ","
          << format_double(m.xp_sym, pr) << "," << format_double(per_axis_sigma(m), pr) << ","
          << format_double(e, pr) << ","
          << format_double(2.0 * e / (3.0 * PhysicalConstants::k_B), pr);
        if (oracle)
            f << "," << format_double(oracle->x2_rel[i], pr) << ","
              << format_double(oracle->xp_rel[i], pr) << ","
              << format_double(oracle->p2_rel[i], pr);
        f << "\n";
    }
}

void write_sweep(const std::string& path, const std::string& kind,
                 const std::vector<SweepPoint>& points, const Protocol& protocol,
                 const NoiseModel& noise, const OutputConfig& out) {
    const int pr = out.precision;
    if (out.format == "json") {
        json rows = json::array();
        for (const auto& p : points) {
            json row{{"parameter", p.parameter}, {"failed", p.failed}};
            if (p.failed)
                row["error"] = p.error;
            else {
                row["sigma_x_axis_m"] = p.sigma_x;
                row["energy_J"] = p.energy;
            }
            rows.push_back(std::move(row));
        }
        json doc{{"sweep", kind},
                 {"protocol", protocol_json(protocol)},
                 {"noise", describe_noise(noise)},
                 {"rows", rows}};
        auto f = open_out(path);
        f << doc.dump(2) << "\n";
        return;
    }
    auto f = open_out(path);
    protocol_header(f, protocol);
    f << "# noise: " << describe_noise(noise) << "\n";
    f << "# sweep: " << kind << "\n";
    f << "parameter,sigma_x_axis,energy,status\n";
    for (const auto& p : points) {
        if (p.failed)
            f << format_double(p.parameter, pr) << ",,,failed\n";
        else
            f << format_double(p.parameter, pr) << "," << format_double(p.sigma_x, pr) << ","
              << format_double(p.energy, pr) << ",ok\n";
    }
}

void write_grid(const std::string& path, const std::string& boundary_path,
                const ExclusionGrid& grid, const MeasurementBand& band,
                const Protocol& protocol, const OutputConfig& out) {
    const int pr = out.precision;
    if (out.format == "json") {
        json cells = json::array();
        for (const auto& c : grid.cells)
            cells.push_back(json{{"lambda", c.lambda},
                                 {"rc", c.r_c},
                                 {"sigma_x_axis_m", c.sigma_x},
                                 {"verdict", c.failed ? "failed"
                                                      : (c.excluded ? "excluded" : "allowed")}});
        json boundary = json::array();
        for (const auto& b : grid.boundary)
            boundary.push_back(json{{"rc", b.r_c}, {"lambda_crit", b.lambda_crit}});
        json doc{{"model", grid.model_tag},
                 {"band_m", {{"lo", band.lo}, {"hi", band.hi}, {"level", band.level}}},
                 {"protocol", protocol_json(protocol)},
                 {"cells", cells},
                 {"boundary", boundary}};
        auto f = open_out(path);
        f << doc.dump(2) << "\n";
        return;
    }
    {
        auto f = open_out(path);
        protocol_header(f, protocol);
        f << "# model: " << grid.model_tag << "\n";
        f << "# band: [" << format_double(band.lo) << ", " << format_double(band.hi)
          << "] m at level " << format_double(band.level) << "\n";
        f << "lambda,rc,sigma_x_axis,verdict\n";
        for (const auto& c : grid.cells)
            f << format_double(c.lambda, pr) << "," << format_double(c.r_c, pr) << ","
              << format_double(c.sigma_x, pr) << ","
              << (c.failed ? "failed" : (c.excluded ? "excluded" : "allowed")) << "\n";
    }
    {
        auto f = open_out(boundary_path);
        f << "# model: " << grid.model_tag << "\n";
        f << "rc,lambda_crit\n";
        for (const auto& b : grid.boundary)
            f << format_double(b.r_c, pr) << "," << format_double(b.lambda_crit, pr) << "\n";
    }
}

void write_kick_error(const std::string& path, const std::vector<KickErrorRow>& rows,
                      const Protocol& protocol, const Dcsl& noise, const OutputConfig& out) {
    const int pr = out.precision;
    if (out.format == "json") {
        json jrows = json::array();
        for (const auto& r : rows) {
            json eig = json::array();
            for (const auto& z : r.report.eigenvalues)
                eig.push_back(json{{"re", z.real()}, {"im", z.imag()}});
            jrows.push_back(json{{"sweep", r.sweep},
                                 {"parameter", r.parameter},
                                 {"err_x2", r.report.err_x2},
                                 {"err_xp", r.report.err_xp},
                                 {"err_p2", r.report.err_p2},
                                 {"eigenvalues", eig},
                                 {"norm_bound_ok", r.report.norm_bound_ok}});
        }
        json doc{{"protocol", protocol_json(protocol)},
                 {"noise", describe_noise(NoiseModel{noise})},
                 {"rows", jrows}};
        auto f = open_out(path);
        f << doc.dump(2) << "\n";
        return;
    }
    auto f = open_out(path);
    protocol_header(f, protocol);
    f << "# noise: " << describe_noise(NoiseModel{noise}) << "\n";
    f << "sweep,parameter,err_x2,err_xp,err_p2,eig1_re,eig1_im,eig2_re,eig2_im,eig3_re,eig3_im,"
         "norm_bound_ok\n";
    for (const auto& r : rows) {
        f << r.sweep << "," << format_double(r.parameter, pr) << ","
          << format_double(r.report.err_x2, pr) << "," << format_double(r.report.err_xp, pr)
          << "," << format_double(r.report.err_p2, pr);
        for (const auto& z : r.report.eigenvalues)
            f << "," << format_double(z.real(), pr) << "," << format_double(z.imag(), pr);
        f << "," << (r.report.norm_bound_ok ? 1 : 0) << "\n";
    }
}

}  // namespace coldkick
