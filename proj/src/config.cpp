#include "coldkick/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "coldkick/model.hpp"
#include "coldkick/pipeline.hpp"

namespace coldkick {
namespace {

using nlohmann::json;

const std::map<std::string, std::map<std::string, double>>& unit_tables() {
    static const std::map<std::string, std::map<std::string, double>> tables = {
        {"time", {{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}}},
        {"length", {{"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}}},
        {"temperature", {{"K", 1.0}, {"mK", 1e-3}, {"uK", 1e-6}, {"nK", 1e-9}, {"pK", 1e-12}}},
        {"angular_frequency", {{"rad/s", 1.0}}},
        {"rate", {{"1/s", 1.0}, {"Hz", 1.0}}},
        {"velocity", {{"m/s", 1.0}, {"km/s", 1e3}}},
        {"mass", {{"kg", 1.0}}},
    };
    return tables;
}

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError(path + ": " + msg);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) { ok = true; break; }
        if (!ok) fail(path + "." + it.key(), "unknown key");
    }
}

}  // namespace

double parse_quantity(const std::string& text, const std::string& dimension,
                      const std::string& key_path) {
    if (dimension == "dimensionless") {
        size_t pos = 0;
        double v;
        try {
            v = std::stod(text, &pos);
        } catch (const std::exception&) {
            fail(key_path, "not a number: '" + text + "'");
        }
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos != text.size()) fail(key_path, "unexpected suffix on dimensionless value");
        return v;
    }
    const auto& tables = unit_tables();
    const auto table_it = tables.find(dimension);
    if (table_it == tables.end()) fail(key_path, "internal: unknown dimension " + dimension);

    size_t pos = 0;
    double v;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        fail(key_path, "not a number: '" + text + "'");
    }
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    const std::string suffix = text.substr(pos);
    if (suffix.empty())
        fail(key_path, "missing unit suffix (expected a " + dimension + " unit)");
    const auto unit_it = table_it->second.find(suffix);
    if (unit_it == table_it->second.end())
        fail(key_path, "unit '" + suffix + "' is not a " + dimension + " unit");
    return v * unit_it->second;
}

namespace {

double quantity_field(const json& obj, const std::string& path, const std::string& key,
                      const std::string& dimension) {
    if (!obj.contains(key)) fail(path + "." + key, "missing required key");
    const json& v = obj.at(key);
    if (v.is_number())
        fail(path + "." + key, "dimensioned values need a unit suffix, e.g. \"35 ms\"");
    if (!v.is_string()) fail(path + "." + key, "expected a unit-suffixed string");
    return parse_quantity(v.get<std::string>(), dimension, path + "." + key);
}

double optional_quantity(const json& obj, const std::string& path, const std::string& key,
                         const std::string& dimension, double fallback) {
    if (!obj.contains(key)) return fallback;
    return quantity_field(obj, path, key, dimension);
}

AtomSpecies parse_species(const json& v, const std::string& path) {
    if (v.is_string()) {
        const std::string name = v.get<std::string>();
        if (name == "Rb87") return AtomSpecies::rb87();
        fail(path, "unknown species preset '" + name + "'");
    }
    if (!v.is_object()) fail(path, "expected \"Rb87\" or {mass, nucleons}");
    check_keys(v, path, {"mass", "nucleons"});
    AtomSpecies s;
    s.mass = quantity_field(v, path, "mass", "mass");
    if (!v.contains("nucleons") || !v.at("nucleons").is_number_integer())
        fail(path + ".nucleons", "expected an integer");
    s.nucleon_count = v.at("nucleons").get<int>();
    s.validate();
    return s;
}

NoiseModel parse_noise(const json& v, const std::string& path) {
    if (!v.is_object()) fail(path, "expected an object");
    if (!v.contains("model")) fail(path + ".model", "noise model required");
    const std::string model = v.at("model").is_string() ? v.at("model").get<std::string>() : "";
    if (model == "qm") {
        check_keys(v, path, {"model"});
        return QmOnly{};
    }
    if (model == "csl") {
        check_keys(v, path, {"model", "lambda", "rc"});
        Csl n;
        n.lambda = quantity_field(v, path, "lambda", "rate");
        n.r_c = quantity_field(v, path, "rc", "length");
        n.validate();
        return n;
    }
    if (model == "ccsl") {
        check_keys(v, path, {"model", "lambda", "rc", "tau"});
        Ccsl n;
        n.lambda = quantity_field(v, path, "lambda", "rate");
        n.r_c = quantity_field(v, path, "rc", "length");
        n.tau = quantity_field(v, path, "tau", "time");
        n.validate();
        return n;
    }
    if (model == "dcsl") {
        check_keys(v, path, {"model", "lambda", "rc", "t_csl", "boost"});
        Dcsl n;
        n.lambda = quantity_field(v, path, "lambda", "rate");
        n.r_c = quantity_field(v, path, "rc", "length");
        n.t_csl = quantity_field(v, path, "t_csl", "temperature");
        if (v.contains("boost")) {
            const json& b = v.at("boost");
            if (!b.is_array() || b.size() != 3)
                fail(path + ".boost", "expected 3 velocity components");
            for (int i = 0; i < 3; ++i) {
                if (!b[i].is_string())
                    fail(path + ".boost", "components need a velocity suffix, e.g. \"1e7 m/s\"");
                n.boost[i] =
                    parse_quantity(b[i].get<std::string>(), "velocity", path + ".boost");
            }
        }
        n.validate();
        return n;
    }
    fail(path + ".model", "unknown noise model '" + model + "' (qm|csl|ccsl|dcsl)");
}

std::vector<double> parse_log_axis(const json& obj, const std::string& path,
                                   const std::string& prefix, const std::string& dimension,
                                   double def_lo, double def_hi, int def_points) {
    const double lo = optional_quantity(obj, path, prefix + "_min", dimension, def_lo);
    const double hi = optional_quantity(obj, path, prefix + "_max", dimension, def_hi);
    int points = def_points;
    const std::string pkey = prefix + "_points";
    if (obj.contains(pkey)) {
        if (!obj.at(pkey).is_number_integer()) fail(path + "." + pkey, "expected an integer");
        points = obj.at(pkey).get<int>();
    }
    if (points < 1) fail(path + "." + pkey, "need at least one point");
    if (!(lo > 0.0 && hi >= lo)) fail(path + "." + prefix + "_min", "need 0 < min <= max");
    if (hi == lo) return std::vector<double>{lo};
    return log_axis(lo, hi, points);
}

}  // namespace

RunConfig parse_config(const std::string& json_text, const std::string& origin) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    if (!root.is_object()) throw ConfigError(origin + ": top level must be an object");
    check_keys(root, origin, {"protocol", "noise", "scan", "sweep", "output"});

    RunConfig cfg;
    cfg.protocol = default_protocol();

    if (root.contains("protocol")) {
        const json& p = root.at("protocol");
        const std::string path = origin + ".protocol";
        if (!p.is_object()) fail(path, "expected an object");
        check_keys(p, path,
                   {"dt1", "dt2", "dt3", "omega", "species", "initial_sigma_x",
                    "initial_temperature", "calibrate", "dt3_from_origin"});
        cfg.protocol.dt1 = optional_quantity(p, path, "dt1", "time", cfg.protocol.dt1);
        cfg.protocol.dt2 = optional_quantity(p, path, "dt2", "time", cfg.protocol.dt2);
        cfg.protocol.dt3 = optional_quantity(p, path, "dt3", "time", cfg.protocol.dt3);
        cfg.protocol.omega =
            optional_quantity(p, path, "omega", "angular_frequency", cfg.protocol.omega);
        if (p.contains("species"))
            cfg.protocol.species = parse_species(p.at("species"), path + ".species");
        const double sigma0 =
            optional_quantity(p, path, "initial_sigma_x", "length", 56e-6);
        double temp0 = 1600e-12;
        if (p.contains("calibrate")) {
            if (!p.at("calibrate").is_boolean()) fail(path + ".calibrate", "expected a boolean");
            cfg.calibrate = p.at("calibrate").get<bool>();
        }
        if (p.contains("initial_temperature"))
            temp0 = quantity_field(p, path, "initial_temperature", "temperature");
        if (p.contains("dt3_from_origin")) {
            if (!p.at("dt3_from_origin").is_boolean())
                fail(path + ".dt3_from_origin", "expected a boolean");
            cfg.dt3_from_origin = p.at("dt3_from_origin").get<bool>();
        }
        cfg.protocol.initial = initial_moments(sigma0, temp0, cfg.protocol.species);
        cfg.protocol.validate();
    }

    if (root.contains("noise"))
        cfg.noise = parse_noise(root.at("noise"), origin + ".noise");

    if (root.contains("scan")) {
        const json& s = root.at("scan");
        const std::string path = origin + ".scan";
        if (!s.is_object()) fail(path, "expected an object");
        check_keys(s, path,
                   {"lambda_min", "lambda_max", "lambda_points", "rc_min", "rc_max", "rc_points",
                    "band", "boost_u", "displacement_limit"});
        ScanConfig sc;
        sc.lambda_axis = parse_log_axis(s, path, "lambda", "rate", 1e-20, 1e-2, 60);
        sc.rc_axis = parse_log_axis(s, path, "rc", "length", 1e-9, 1e-3, 60);
        if (s.contains("band")) {
            const json& b = s.at("band");
            const std::string bp = path + ".band";
            if (!b.is_object()) fail(bp, "expected an object");
            check_keys(b, bp, {"mean", "sigma", "level"});
            const double mean = optional_quantity(b, bp, "mean", "length", 120e-6);
            const double sig = optional_quantity(b, bp, "sigma", "length", 40e-6);
            double level = 0.95;
            if (b.contains("level")) {
                if (!b.at("level").is_number()) fail(bp + ".level", "expected a number");
                level = b.at("level").get<double>();
            }
            if (!(level > 0.0 && level < 1.0)) fail(bp + ".level", "level must be in (0, 1)");
            sc.band = MeasurementBand::normal(mean, sig, level);
        }
        sc.boost_u = optional_quantity(s, path, "boost_u", "velocity", 0.0);
        sc.displacement_limit =
            optional_quantity(s, path, "displacement_limit", "length", 1e-6);
        cfg.scan = sc;
    }

    if (root.contains("sweep")) {
        const json& s = root.at("sweep");
        const std::string path = origin + ".sweep";
        if (!s.is_object()) fail(path, "expected an object");
        check_keys(s, path, {"kind", "min", "max", "points"});
        if (!s.contains("kind") || !s.at("kind").is_string())
            fail(path + ".kind", "expected kick-time | noise-temperature | rc");
        const std::string kind = s.at("kind").get<std::string>();
        SweepConfig sw;
        std::string dim;
        double def_lo, def_hi;
        if (kind == "kick-time") {
            sw.kind = SweepKind::KickTime;
            dim = "time";
            def_lo = 1e-3;
            def_hi = 0.035;
        } else if (kind == "noise-temperature") {
            sw.kind = SweepKind::NoiseTemperature;
            dim = "temperature";
            def_lo = 1e-12;
            def_hi = 1e2;
        } else if (kind == "rc") {
            sw.kind = SweepKind::Rc;
            dim = "length";
            def_lo = 1e-9;
            def_hi = 1e-3;
        } else {
            fail(path + ".kind", "unknown sweep kind '" + kind + "'");
        }
        const double lo = optional_quantity(s, path, "min", dim, def_lo);
        const double hi = optional_quantity(s, path, "max", dim, def_hi);
        int points = 61;
        if (s.contains("points")) {
            if (!s.at("points").is_number_integer()) fail(path + ".points", "expected an integer");
            points = s.at("points").get<int>();
        }
        if (points < 1) fail(path + ".points", "need at least one point");
        if (sw.kind == SweepKind::KickTime) {
            // linear grid; kick times may start at 0
            if (!(lo >= 0.0 && hi >= lo)) fail(path + ".min", "need 0 <= min <= max");
            sw.grid.resize(points);
            for (int i = 0; i < points; ++i)
                sw.grid[i] = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
        } else {
            if (!(lo > 0.0 && hi >= lo)) fail(path + ".min", "need 0 < min <= max");
            sw.grid = hi == lo ? std::vector<double>{lo} : log_axis(lo, hi, points);
        }
        cfg.sweep = sw;
    }

    if (root.contains("output")) {
        const json& o = root.at("output");
        const std::string path = origin + ".output";
        if (!o.is_object()) fail(path, "expected an object");
        check_keys(o, path, {"format", "precision", "sampling"});
        if (o.contains("format")) {
            if (!o.at("format").is_string()) fail(path + ".format", "expected csv | json");
            cfg.output.format = o.at("format").get<std::string>();
            if (cfg.output.format != "csv" && cfg.output.format != "json")
                fail(path + ".format", "expected csv | json");
        }
        if (o.contains("precision")) {
            if (!o.at("precision").is_number_integer())
                fail(path + ".precision", "expected an integer");
            cfg.output.precision = o.at("precision").get<int>();
            if (cfg.output.precision < 1 || cfg.output.precision > 17)
                fail(path + ".precision", "expected 1..17");
        }
        cfg.output.sampling = optional_quantity(o, path, "sampling", "time", 0.01);
        if (!(cfg.output.sampling > 0.0)) fail(path + ".sampling", "sampling must be > 0");
    }

    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

Protocol resolve_protocol(const RunConfig& cfg) {
    Protocol p = cfg.protocol;
    if (cfg.dt3_from_origin) {
        const double stage3 = p.dt3 - (p.dt1 + p.dt2);
        if (!(stage3 >= 0.0))
            throw ConfigError("protocol.dt3: absolute detection time precedes kick end");
        p.dt3 = stage3;
    }
    if (!cfg.calibrate) return p;

    // fit the initial temperature so the lambda = 0 per-axis sigma matches
    // the band mean (120 um by default)
    const double target = cfg.scan ? cfg.scan->band.mean : 120e-6;
    const double sigma0_axis = std::sqrt(p.initial.x2 / 3.0);
    double lo = std::log(1e-15), hi = std::log(1e-6);
    auto sigma_at = [&](double log_t) {
        Protocol q = p;
        q.initial = initial_moments(sigma0_axis, std::exp(log_t), q.species);
        return per_axis_sigma(run_protocol_final(q, NoiseModel{QmOnly{}}));
    };
    double f_lo = sigma_at(lo) - target, f_hi = sigma_at(hi) - target;
    if (f_lo * f_hi > 0.0)
        throw ConfigError("protocol.calibrate: no initial temperature in [1 fK, 1 uK] "
                          "reproduces the band mean");
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = sigma_at(mid) - target;
        if ((f_lo < 0.0) == (f_mid < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    p.initial = initial_moments(sigma0_axis, std::exp(0.5 * (lo + hi)), p.species);
    return p;
}

}  // namespace coldkick
