#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <sstream>

#include "mkdv/direct_scattering.hpp"
#include "mkdv/parallel.hpp"
#include "mkdv/spectral_data.hpp"
#include "mkdv/uniformization.hpp"

namespace mkdv::cli {

namespace {

std::string time_tag(double t) {
    std::ostringstream os;
    os.precision(10);
    os << t;
    return os.str();
}

ScatteringGrid build_grid(const json& cfg) {
    ScatteringGrid g;
    if (!cfg.contains("scattering")) return g;
    const json& s = cfg.at("scattering");
    check_keys(s, "scattering", {"z_max", "points", "scale", "samples"});
    g.z_max = get_number(s, "z_max", g.z_max);
    g.points = get_int(s, "points", g.points);
    g.scale = get_number(s, "scale", g.scale);
    if (!(g.z_max > 1.0) || g.points < 33 || !(g.scale > 0.0)) throw ConfigError("invalid scattering grid");
    return g;
}

struct SpectralSource {
    SolitonConfig solitons;
    TraceInputs trace;
    bool from_potential = false;
};

SpectralSource spectral_source(const RunContext& ctx) {
    const json& c = ctx.config;
    SpectralSource src;
    if (c.contains("solitons") == c.contains("potential"))
        throw ConfigError("give exactly one of 'solitons' or 'potential'");
    if (c.contains("solitons")) {
        src.solitons = build_solitons(c.at("solitons"));
        src.trace = TraceInputs::reflectionless(src.solitons.zeros());
        return src;
    }
    const PotentialSample pot = build_potential(c.at("potential"), ctx.seed);
    const ScatteringData sd = compute_scattering_data(pot, build_grid(c));
    src.solitons = solitons_from_spectrum(sd.discrete);
    src.trace = TraceInputs::from_scattering(sd);
    src.from_potential = true;
    return src;
}

std::vector<double> sample_reals(int n) {
    // n points symmetric about 0, log-spaced in |z| over [0.1, 10], avoiding ±1
    std::vector<double> z;
    const int half = n / 2;
    for (int k = 0; k < half; ++k) {
        double v = std::pow(10.0, -1.0 + 2.0 * (k + 0.5) / half);
        if (std::abs(v - 1.0) < 1e-3) v *= 1.01;
        z.push_back(v);
        z.push_back(-v);
    }
    if (static_cast<int>(z.size()) < n) z.push_back(3.0);
    std::sort(z.begin(), z.end());
    return z;
}

struct FieldSource {
    std::string kind;
    json spec;
};

}  // namespace

void cmd_scatter(RunContext& ctx) {
    const json& c = ctx.config;
    check_keys(c, "config", {"potential", "scattering"});
    if (!c.contains("potential")) throw ConfigError("scatter needs a 'potential' block");
    const PotentialSample pot = build_potential(c.at("potential"), ctx.seed);
    const ScatteringGrid grid = build_grid(c);
    const int samples = c.contains("scattering") ? get_int(c.at("scattering"), "samples", 50) : 50;
    if (samples < 2) throw ConfigError("need at least 2 scattering samples");

    const ScatteringData sd = compute_scattering_data(pot, grid);
    const std::vector<double> zs = sample_reals(samples);
    std::vector<Mat2> S(zs.size()), Sneg(zs.size()), Sinv(zs.size());
    parallel_for(zs.size(), ctx.threads, [&](std::size_t i) {
        S[i] = scattering_matrix(zs[i], pot);
        Sneg[i] = scattering_matrix(-zs[i], pot);
        Sinv[i] = scattering_matrix(1.0 / zs[i], pot);
    });
    Mat2 s2;
    s2 << 0, -I, I, 0;
    double unit = 0, conj_sym = 0, inv_sym = 0, min_a = 1e300;
    const double bv_sign = pot.left_bv() * pot.right_bv();
    {
        TableWriter t(ctx, "r_table.txt", {"z", "re_r", "im_r", "re_a", "im_a"});
        for (std::size_t i = 0; i < zs.size(); ++i) {
            const cplx a = S[i](0, 0), b = S[i](1, 0);
            const cplx r = b / a;
            t.row({zs[i], r.real(), r.imag(), a.real(), a.imag()});
            unit = std::max(unit, std::abs(std::norm(a) - std::norm(b) - 1.0));
            conj_sym = std::max(conj_sym, (S[i] - Sneg[i].conjugate()).cwiseAbs().maxCoeff());
            // S(z) = (q₋q₊)·σ₂S(1/z)σ₂ for boundary values q₋, q₊
            inv_sym = std::max(inv_sym, (S[i] - bv_sign * (s2 * Sinv[i] * s2)).cwiseAbs().maxCoeff());
            min_a = std::min(min_a, std::abs(a));
        }
    }
    {
        TableWriter t(ctx, "r_grid.txt", {"z", "re_r", "im_r"});
        for (const auto& [z, r] : sd.r_samples()) t.row({z, r.real(), r.imag()});
    }
    {
        TableWriter t(ctx, "spectrum.txt", {"re_z", "im_z", "re_c", "im_c"});
        for (const DiscreteEigen& d : sd.discrete) t.row({d.z.real(), d.z.imag(), d.c.real(), d.c.imag()});
    }
    const double max_r = sd.max_abs_r();
    {
        TableWriter t(ctx, "symmetry.txt", {"check", "value", "tolerance", "status"});
        auto line = [&](const std::string& name, double v, double tol) {
            t.row_text({name, fmt(v), fmt(tol), v <= tol ? "pass" : "fail"});
        };
        line("unitarity", unit, 1e-6);
        line("conjugation_symmetry", conj_sym, 1e-6);
        line("inversion_symmetry", inv_sym, 1e-6);
        t.row_text({"min_abs_a", fmt(min_a), fmt(1.0), min_a >= 1.0 - 1e-9 ? "pass" : "fail"});
        t.row_text({"max_abs_r_grid", fmt(max_r), fmt(1e-5), max_r < 1e-5 ? "reflectionless" : "radiative"});
    }
    ctx.results["discrete_count"] = sd.discrete.size();
    ctx.results["max_abs_r"] = max_r;
    ctx.results["unitarity_error"] = unit;
    ctx.results["a_plus"] = {sd.a_plus.real(), sd.a_plus.imag()};
    ctx.results["a_minus"] = {sd.a_minus.real(), sd.a_minus.imag()};
}

void cmd_spectrum(RunContext& ctx) {
    const json& c = ctx.config;
    check_keys(c, "config", {"potential", "solitons", "scattering", "xi", "signature"});
    const std::vector<double> xis = c.contains("xi") ? get_numbers(c, "xi") : std::vector<double>{-4.0};
    const SpectralSource src = spectral_source(ctx);
    const auto zs = src.solitons.zeros();
    const auto cs = src.solitons.norming();
    {
        TableWriter t(ctx, "asymptotic.txt",
                      {"xi", "index", "re_z", "im_z", "re_c", "im_c", "re_c_tilde", "im_c_tilde", "x_shift", "label"});
        TableWriter ph(ctx, "phase_points.txt", {"xi", "class", "xi0", "T_infinity", "re_z", "im_z"});
        for (double xi : xis) {
            const std::string cls = to_string(classify_phase_points(xi));
            const auto pts = stationary_points(xi);
            const bool solitonic = xi > -6.0 && xi < -2.0;
            double tinf = std::nan(""), x0 = std::nan("");
            if (solitonic) {
                const AsymptoticSpectralData data = asymptotic_spectral_data(zs, cs, xi, src.trace);
                tinf = data.T_infinity;
                x0 = data.partition.xi0;
                for (std::size_t j = 0; j < data.solitons.size(); ++j) {
                    const SolitonRecord& r = data.solitons[j];
                    t.row_text({fmt(xi), std::to_string(j), fmt(r.z.real()), fmt(r.z.imag()), fmt(r.c.real()),
                                fmt(r.c.imag()), fmt(r.c_tilde.real()), fmt(r.c_tilde.imag()), fmt(r.x_shift),
                                r.label});
                }
            }
            for (const cplx& p : pts)
                ph.row_text({fmt(xi), cls, fmt(x0), fmt(tinf), fmt(p.real()), fmt(p.imag())});
        }
    }
    {
        const json sig = c.value("signature", json::object());
        check_keys(sig, "signature", {"extent", "points", "xi", "t"});
        const double ext = get_number(sig, "extent", 2.0);
        const int n = get_int(sig, "points", 41);
        const double xi = get_number(sig, "xi", xis.front());
        const double tt = get_number(sig, "t", 1.0);
        if (n < 2 || !(ext > 0.0)) throw ConfigError("invalid signature grid");
        TableWriter t(ctx, "signature.txt", {"re_z", "im_z", "re_2itheta"});
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                const cplx z{-ext + 2.0 * ext * i / (n - 1), -ext + 2.0 * ext * k / (n - 1)};
                const double v = std::abs(z) < 1e-12 ? std::nan("") : (2.0 * I * tt * theta(z, {xi, tt})).real();
                t.row({z.real(), z.imag(), v});
            }
    }
    ctx.results["soliton_count"] = zs.size();
    ctx.results["from_potential"] = src.from_potential;
}

void cmd_predict(RunContext& ctx) {
    const json& c = ctx.config;
    check_keys(c, "config", {"potential", "solitons", "scattering", "times", "x"});
    const std::vector<double> times = get_numbers(c, "times");
    for (double t : times)
        if (!(t > 0.0)) throw ConfigError("prediction times must be positive");
    if (!c.contains("x")) throw ConfigError("predict needs an 'x' grid block");
    const std::vector<double> x = build_x_grid(c.at("x"));
    const SpectralSource src = spectral_source(ctx);
    const AsymptoticPredictor pred(src.solitons, src.trace);
    json flagged = json::object();
    for (double t : times) {
        std::vector<double> q(x.size(), std::nan(""));
        std::vector<int> ok(x.size(), 0);
        for (std::size_t i = 0; i < x.size(); ++i) ok[i] = AsymptoticPredictor::in_region(x[i], t);
        parallel_for(x.size(), ctx.threads, [&](std::size_t i) {
            if (ok[i]) q[i] = pred(x[i], t);
        });
        TableWriter tw(ctx, "predict_t" + time_tag(t) + ".txt", {"x", "q", "in_region"});
        int out = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            tw.row_text({fmt(x[i]), fmt(q[i]), ok[i] ? "1" : "0"});
            out += !ok[i];
        }
        flagged[time_tag(t)] = out;
    }
    TableWriter tw(ctx, "xj.txt", {"index", "re_z", "im_z", "velocity", "x_shift", "branch_at_own_speed"});
    const auto& terms = pred.terms();
    for (std::size_t j = 0; j < terms.size(); ++j) {
        const std::string br = terms[j].branch == SolitonBranch::Sigma1 ? "sigma1" : "nabla";
        tw.row_text({std::to_string(j), fmt(terms[j].z.real()), fmt(terms[j].z.imag()),
                     fmt(soliton_velocity(terms[j].z)), fmt(terms[j].x_shift), br});
    }
    ctx.results["out_of_region_points"] = flagged;
}

void cmd_exact(RunContext& ctx) {
    const json& c = ctx.config;
    check_keys(c, "config", {"solitons", "times", "x"});
    if (!c.contains("solitons")) throw ConfigError("exact needs a 'solitons' list");
    if (!c.contains("x")) throw ConfigError("exact needs an 'x' grid block");
    const SolitonConfig cfg = build_solitons(c.at("solitons"));
    const std::vector<double> times = get_numbers(c, "times");
    const std::vector<double> x = build_x_grid(c.at("x"));
    double worst_cond = 1.0, worst_imag = 0.0;
    for (double t : times) {
        std::vector<NSolitonValue> v(x.size());
        parallel_for(x.size(), ctx.threads, [&](std::size_t i) { v[i] = exact_nsoliton_full(cfg, x[i], t); });
        TableWriter tw(ctx, "exact_t" + time_tag(t) + ".txt", {"x", "q", "imag", "condition"});
        for (std::size_t i = 0; i < x.size(); ++i) {
            tw.row({x[i], v[i].q, v[i].imag, v[i].condition});
            worst_cond = std::max(worst_cond, v[i].condition);
            worst_imag = std::max(worst_imag, std::abs(v[i].imag));
        }
    }
    ctx.results["max_condition"] = worst_cond;
    ctx.results["max_abs_imag"] = worst_imag;
}

namespace {

void write_snapshots(RunContext& ctx, const std::vector<FieldSnapshot>& snaps) {
    for (const FieldSnapshot& s : snaps) {
        TableWriter tw(ctx, "snapshot_t" + time_tag(s.t) + ".txt", {"x", "q"});
        for (std::size_t i = 0; i < s.x.size(); ++i) tw.row({s.x[i], s.q[i]});
    }
    TableWriter d(ctx, "diagnostics.txt", {"t", "residual_norm", "boundary_drift", "edge_deviation", "mass_like"});
    json diag = json::array();
    for (const FieldSnapshot& s : snaps) {
        d.row({s.t, s.diagnostics.residual_norm, s.diagnostics.boundary_drift, s.diagnostics.edge_deviation,
               s.diagnostics.mass_like});
        diag.push_back({{"t", s.t},
                        {"residual_norm", s.diagnostics.residual_norm},
                        {"boundary_drift", s.diagnostics.boundary_drift},
                        {"edge_deviation", s.diagnostics.edge_deviation},
                        {"mass_like", s.diagnostics.mass_like}});
    }
    ctx.results["diagnostics"] = diag;
}

std::vector<FieldSnapshot> ordered(std::vector<FieldSnapshot> s) {
    std::sort(s.begin(), s.end(), [](const FieldSnapshot& a, const FieldSnapshot& b) { return a.t < b.t; });
    s.erase(std::unique(s.begin(), s.end(), [](const FieldSnapshot& a, const FieldSnapshot& b) { return a.t == b.t; }),
            s.end());
    return s;
}

}  // namespace

void cmd_simulate(RunContext& ctx) {
    const json& c = ctx.config;
    check_keys(c, "config", {"potential", "simulation", "tracks"});
    if (!c.contains("potential") || !c.contains("simulation"))
        throw ConfigError("simulate needs 'potential' and 'simulation' blocks");
    const PotentialSample q0 = build_potential(c.at("potential"), ctx.seed);
    const SimConfig sim = build_sim_config(c.at("simulation"));
    std::vector<FieldSnapshot> snaps;
    try {
        snaps = ordered(evolve(q0, sim));
    } catch (const SimulationAborted& e) {
        write_snapshots(ctx, ordered(e.last_good));
        ctx.results["aborted"] = e.what();
        throw;
    }
    write_snapshots(ctx, snaps);
    TrackOptions topt;
    if (c.contains("tracks")) {
        check_keys(c.at("tracks"), "tracks", {"threshold", "include_front"});
        topt.threshold = get_number(c.at("tracks"), "threshold", topt.threshold);
        topt.include_front = c.at("tracks").value("include_front", true);
    }
    const auto tracks = extract_soliton_tracks(snaps, topt);
    TableWriter tw(ctx, "tracks.txt", {"track", "kind", "t", "position", "value"});
    json summary = json::array();
    for (std::size_t k = 0; k < tracks.size(); ++k) {
        for (const TrackPoint& p : tracks[k].points)
            tw.row_text({std::to_string(k), tracks[k].kind, fmt(p.t), fmt(p.position), fmt(p.value)});
        summary.push_back({{"kind", tracks[k].kind},
                           {"points", tracks[k].points.size()},
                           {"velocity", tracks[k].fitted_velocity()}});
    }
    ctx.results["tracks"] = summary;
}

namespace {

/// A field evaluator for one comparison side.
class Field {
public:
    Field(const json& spec, const RunContext& ctx, const std::vector<double>& times) : kind_(spec.value("kind", "")) {
        if (kind_ == "exact") {
            check_keys(spec, "source", {"kind", "solitons"});
            if (!spec.contains("solitons")) throw ConfigError("exact source needs 'solitons'");
            solitons_ = build_solitons(spec.at("solitons"));
        } else if (kind_ == "predicted") {
            check_keys(spec, "source", {"kind", "solitons", "potential", "scattering"});
            RunContext sub = ctx;
            sub.config = spec;
            sub.config.erase("kind");
            SpectralSource src = spectral_source(sub);
            predictor_ = std::make_shared<AsymptoticPredictor>(src.solitons, src.trace);
        } else if (kind_ == "simulated") {
            check_keys(spec, "source", {"kind", "potential", "simulation"});
            if (!spec.contains("potential") || !spec.contains("simulation"))
                throw ConfigError("simulated source needs 'potential' and 'simulation'");
            const PotentialSample q0 = build_potential(spec.at("potential"), ctx.seed);
            json simspec = spec.at("simulation");
            double tmax = *std::max_element(times.begin(), times.end());
            simspec["snapshots"] = times;
            if (!simspec.contains("t_end") || simspec["t_end"].get<double>() < tmax) simspec["t_end"] = tmax;
            const SimConfig sim = build_sim_config(simspec);
            for (FieldSnapshot& s : evolve(q0, sim)) snaps_.push_back(std::move(s));
        } else {
            throw ConfigError("source kind must be exact, predicted or simulated");
        }
    }

    const std::string& kind() const { return kind_; }
    const FieldSnapshot* snapshot(double t) const {
        for (const FieldSnapshot& s : snaps_)
            if (std::abs(s.t - t) < 1e-9) return &s;
        return nullptr;
    }
    std::vector<double> eval(const std::vector<double>& x, double t, int threads) const {
        if (kind_ == "exact") return exact_nsoliton(solitons_, x, t, threads);
        if (kind_ == "predicted") return predictor_->evaluate(x, t, threads);
        const FieldSnapshot* s = snapshot(t);
        if (!s) throw NumericalError("missing simulated snapshot");
        std::vector<double> out;
        for (double xv : x) {
            auto it = std::lower_bound(s->x.begin(), s->x.end(), xv - 1e-12);
            if (it == s->x.end() || std::abs(*it - xv) > 1e-9) throw ConfigError("comparison point off the simulation grid");
            out.push_back(s->q[it - s->x.begin()]);
        }
        return out;
    }

private:
    std::string kind_;
    SolitonConfig solitons_;
    std::shared_ptr<AsymptoticPredictor> predictor_;
    std::vector<FieldSnapshot> snaps_;
};

}  // namespace

void cmd_compare(RunContext& ctx) {
    const json& c = ctx.config;
    check_keys(c, "config", {"reference", "candidate", "times", "window", "dx", "criteria"});
    if (!c.contains("reference") || !c.contains("candidate")) throw ConfigError("compare needs 'reference' and 'candidate'");
    std::vector<double> times = get_numbers(c, "times");
    std::sort(times.begin(), times.end());
    for (double t : times)
        if (!(t > 0.0)) throw ConfigError("comparison times must be positive");
    if (!c.contains("window")) throw ConfigError("compare needs a 'window' block");
    const json& w = c.at("window");
    check_keys(w, "window", {"xi_min", "xi_max"});
    const double xi_lo = require_number(w, "xi_min"), xi_hi = require_number(w, "xi_max");
    if (!(xi_hi > xi_lo)) throw ConfigError("window needs xi_max > xi_min");
    const double dx = get_number(c, "dx", 0.05);

    const Field ref(c.at("reference"), ctx, times);
    const Field cand(c.at("candidate"), ctx, times);

    TableWriter tw(ctx, "errors.txt", {"t", "linf", "l2", "points"});
    std::vector<double> linf, l2;
    for (double t : times) {
        const double lo = xi_lo * t, hi = xi_hi * t;
        std::vector<double> x;
        const FieldSnapshot* s = ref.snapshot(t);
        if (!s) s = cand.snapshot(t);
        if (s) {
            for (double xv : s->x)
                if (xv >= lo && xv <= hi && AsymptoticPredictor::in_region(xv, t)) x.push_back(xv);
        } else {
            const int n = static_cast<int>(std::floor((hi - lo) / dx));
            for (int i = 0; i <= n; ++i) {
                const double xv = lo + i * dx;
                if (ref.kind() != "predicted" && cand.kind() != "predicted") x.push_back(xv);
                else if (AsymptoticPredictor::in_region(xv, t)) x.push_back(xv);
            }
        }
        if (x.empty()) throw ConfigError("comparison window contains no common points at t=" + time_tag(t));
        const std::vector<double> a = ref.eval(x, t, ctx.threads), b = cand.eval(x, t, ctx.threads);
        const double h = x.size() > 1 ? x[1] - x[0] : 1.0;
        double m = 0.0, s2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = std::abs(a[i] - b[i]);
            m = std::max(m, d);
            s2 += d * d;
        }
        linf.push_back(m);
        l2.push_back(std::sqrt(s2 * h));
        tw.row({t, linf.back(), l2.back(), static_cast<double>(x.size())});
    }

    double slope = std::nan("");
    if (times.size() >= 2 && std::all_of(linf.begin(), linf.end(), [](double v) { return v > 0.0; })) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(times.size());
        for (std::size_t k = 0; k < times.size(); ++k) {
            const double lx = std::log(times[k]), ly = std::log(linf[k]);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    bool decreasing = true;
    for (std::size_t k = 1; k < linf.size(); ++k) decreasing = decreasing && linf[k] < linf[k - 1];
    ctx.results["linf"] = linf;
    ctx.results["l2"] = l2;
    ctx.results["loglog_slope"] = std::isnan(slope) ? json(nullptr) : json(slope);
    ctx.results["monotone_decreasing"] = decreasing;

    std::vector<std::string> failures;
    if (c.contains("criteria")) {
        const json& cr = c.at("criteria");
        check_keys(cr, "criteria", {"decreasing", "max_slope", "max_error"});
        if (cr.value("decreasing", false) && !decreasing) failures.push_back("error is not monotonically decreasing");
        if (cr.contains("max_slope") && !(slope <= cr.at("max_slope").get<double>()))
            failures.push_back("log-log slope " + fmt(slope) + " exceeds the limit");
        if (cr.contains("max_error")) {
            const double lim = cr.at("max_error").get<double>();
            if (*std::max_element(linf.begin(), linf.end()) > lim) failures.push_back("window error exceeds max_error");
        }
    }
    ctx.results["passed"] = failures.empty();
    {
        TableWriter r(ctx, "verdict.txt", {"status", "detail"});
        if (failures.empty()) r.row_text({"pass", "-"});
        for (const std::string& f : failures) r.row_text({"fail", f});
    }
    if (!failures.empty()) {
        std::string msg = "comparison failed:";
        for (const std::string& f : failures) msg += " " + f + ";";
        throw AcceptanceFailure(msg);
    }
}

}  // namespace mkdv::cli
