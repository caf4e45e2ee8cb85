#include "cli_support.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace mkdv::cli {

json load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    try {
        return json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
}

double get_number(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw ConfigError("'" + key + "' must be a number");
    return j.at(key).get<double>();
}

double require_number(const json& j, const std::string& key) {
    if (!j.contains(key)) throw ConfigError("missing required number '" + key + "'");
    return get_number(j, key, 0.0);
}

int get_int(const json& j, const std::string& key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
    return j.at(key).get<int>();
}

std::vector<double> get_numbers(const json& j, const std::string& key) {
    if (!j.contains(key)) throw ConfigError("missing required list '" + key + "'");
    const json& a = j.at(key);
    if (!a.is_array()) throw ConfigError("'" + key + "' must be a list of numbers");
    std::vector<double> out;
    for (const json& v : a) {
        if (!v.is_number()) throw ConfigError("'" + key + "' must contain only numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

void check_keys(const json& j, const std::string& where, const std::vector<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError("'" + where + "' must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw ConfigError("unknown key '" + it.key() + "' in '" + where + "'");
    }
}

namespace {

// uniform double in [0,1) from the top 53 bits, identical on every platform
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

PotentialSample read_table(const std::string& path, double left, double right) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open potential table " + path);
    std::vector<double> x, q;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        double a, b;
        if (!(ls >> a >> b)) {
            if (x.empty()) continue;  // header line
            throw ConfigError("malformed row in potential table: " + line);
        }
        x.push_back(a);
        q.push_back(b);
    }
    return PotentialSample(std::move(x), std::move(q), left, right);
}

}  // namespace

PotentialSample build_potential(const json& spec, std::uint64_t seed) {
    if (!spec.is_object()) throw ConfigError("'potential' block must be an object");
    const std::string type = spec.value("type", std::string("kink"));
    const double left = get_number(spec, "left", type == "constant" ? 1.0 : -1.0);
    const double right = get_number(spec, "right", 1.0);
    if (type == "table") {
        check_keys(spec, "potential", {"type", "path", "left", "right"});
        if (!spec.contains("path") || !spec.at("path").is_string()) throw ConfigError("table potential needs 'path'");
        return read_table(spec.at("path").get<std::string>(), left, right);
    }
    const double xmin = get_number(spec, "xmin", -30.0);
    const double xmax = get_number(spec, "xmax", 30.0);
    const int n = get_int(spec, "points", 4001);
    if (type == "constant") {
        check_keys(spec, "potential", {"type", "left", "right", "xmin", "xmax", "points"});
        if (left != right) throw ConfigError("constant potential needs equal boundary values");
        return PotentialSample::from_function([left](double) { return left; }, xmin, xmax, n, left, right);
    }
    if (type == "solitons") {
        check_keys(spec, "potential", {"type", "solitons", "t", "xmin", "xmax", "points", "left", "right"});
        if (!spec.contains("solitons")) throw ConfigError("soliton potential needs a 'solitons' list");
        const SolitonConfig cfg = build_solitons(spec.at("solitons"));
        const double t = get_number(spec, "t", 0.0);
        bool kink = false;
        for (const Soliton& s : cfg.solitons()) kink = kink || s.z == I;
        const double hi = kink ? 1.0 : -1.0;
        PotentialSample tmp = PotentialSample::from_function([&](double x) { return exact_nsoliton(cfg, x, t); },
                                                             xmin, xmax, n, -1.0, hi, false);
        return tmp;
    }
    if (type != "kink") throw ConfigError("unknown potential type '" + type + "'");
    check_keys(spec, "potential",
               {"type", "center", "width", "perturbation", "noise", "xmin", "xmax", "points", "left", "right"});
    if (left != -1.0 || right != 1.0) throw ConfigError("kink potential has boundary values -1 and +1");
    const double center = get_number(spec, "center", 0.0);
    const double width = get_number(spec, "width", 1.0);
    if (!(width > 0.0)) throw ConfigError("kink width must be positive");
    double amp = 0.0, pc = 0.0, pw = 1.0;
    if (spec.contains("perturbation")) {
        const json& p = spec.at("perturbation");
        check_keys(p, "perturbation", {"amplitude", "center", "width"});
        amp = get_number(p, "amplitude", 0.0);
        pc = get_number(p, "center", 0.0);
        pw = get_number(p, "width", 1.0);
        if (!(pw > 0.0)) throw ConfigError("perturbation width must be positive");
    }
    // random sum of sech² bumps; reproducible from the seed
    std::vector<std::array<double, 3>> bumps;
    if (spec.contains("noise")) {
        const json& nz = spec.at("noise");
        check_keys(nz, "noise", {"amplitude", "count", "spread"});
        const double a = get_number(nz, "amplitude", 0.0);
        const int count = get_int(nz, "count", 4);
        const double spread = get_number(nz, "spread", 5.0);
        std::mt19937_64 rng(seed);
        for (int k = 0; k < count; ++k) {
            const double ak = a * (2.0 * unit(rng) - 1.0);
            const double ck = spread * (2.0 * unit(rng) - 1.0);
            const double wk = 0.5 + unit(rng);
            bumps.push_back({ak, ck, wk});
        }
    }
    auto f = [=](double x) {
        double v = kink_profile(x, center, width) + amp * sech2((x - pc) / pw);
        for (const auto& b : bumps) v += b[0] * sech2((x - b[1]) / b[2]);
        return v;
    };
    return PotentialSample::from_function(f, xmin, xmax, n, -1.0, 1.0);
}

SolitonConfig build_solitons(const json& list) {
    if (!list.is_array()) throw ConfigError("'solitons' must be a list of {arg_deg, c_abs} objects");
    std::vector<double> args, mods;
    for (const json& s : list) {
        check_keys(s, "solitons[]", {"arg_deg", "c_abs"});
        const double deg = require_number(s, "arg_deg");
        if (!(deg > 0.0 && deg <= 90.0)) throw ConfigError("soliton angle must lie in (0, 90] degrees");
        args.push_back(deg == 90.0 ? 0.5 * pi : deg * pi / 180.0);
        mods.push_back(get_number(s, "c_abs", 1.0));
    }
    return SolitonConfig::from_polar(args, mods);
}

SimConfig build_sim_config(const json& spec) {
    check_keys(spec, "simulation",
               {"L", "N", "dt", "t_end", "scheme", "snapshots", "stability_factor", "core_left", "core_right",
                "max_speed", "clearance"});
    SimConfig c;
    c.L = get_number(spec, "L", c.L);
    c.N = get_int(spec, "N", c.N);
    c.dt = get_number(spec, "dt", c.dt);
    c.t_end = get_number(spec, "t_end", c.t_end);
    if (spec.contains("scheme")) c.scheme = scheme_from_string(spec.at("scheme").get<std::string>());
    c.snapshot_times = spec.contains("snapshots") ? get_numbers(spec, "snapshots") : std::vector<double>{c.t_end};
    c.stability_factor = get_number(spec, "stability_factor", c.stability_factor);
    c.core_left = get_number(spec, "core_left", c.core_left);
    c.core_right = get_number(spec, "core_right", c.core_right);
    c.max_speed = get_number(spec, "max_speed", c.max_speed);
    c.clearance = get_number(spec, "clearance", c.clearance);
    c.validate();
    return c;
}

std::vector<double> build_x_grid(const json& spec) {
    check_keys(spec, "x", {"min", "max", "points"});
    const double a = require_number(spec, "min"), b = require_number(spec, "max");
    const int n = get_int(spec, "points", 601);
    if (n < 2 || !(b > a)) throw ConfigError("x grid needs max > min and at least 2 points");
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = a + (b - a) * i / (n - 1);
    return x;
}

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v == 0.0 ? 0.0 : v);
    return buf;
}

TableWriter::TableWriter(RunContext& ctx, const std::string& name, const std::vector<std::string>& header)
    : path_((ctx.out_dir / name).string()) {
    ctx.outputs.push_back(name);
    for (std::size_t i = 0; i < header.size(); ++i) buffer_ += (i ? "\t" : "") + header[i];
    buffer_ += "\n";
}

void TableWriter::row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    for (double v : values) cells.push_back(fmt(v));
    row_text(cells);
}

void TableWriter::row_text(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) buffer_ += (i ? "\t" : "") + cells[i];
    buffer_ += "\n";
}

TableWriter::~TableWriter() {
    std::ofstream out(path_, std::ios::binary);
    out << buffer_;
}

void write_manifest(const RunContext& ctx, const std::string& command) {
    json m;
    m["command"] = command;
    m["config"] = ctx.config;
    m["seed"] = ctx.seed;
    m["threads"] = ctx.threads;
    m["outputs"] = ctx.outputs;
    m["results"] = ctx.results;
    std::ofstream out(ctx.out_dir / "manifest.json", std::ios::binary);
    out << m.dump(2) << "\n";
}

}  // namespace mkdv::cli
