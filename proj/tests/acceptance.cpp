// Acceptance suite: prints one PASS/FAIL line per criterion and exits non-zero if any fails.
#include <algorithm>
#include <chrono>
#include <filesystem>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "mkdv/direct_scattering.hpp"
#include "mkdv/mkdv_sim.hpp"
#include "mkdv/soliton_engine.hpp"
#include "mkdv/spectral_data.hpp"
#include "oracles.hpp"

using namespace mkdv;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

double perturbed(double x) { return std::tanh(x) + 0.1 * oracle::sech2(x); }

Outcome criterion1() {
    const PotentialSample pot = PotentialSample::from_function(perturbed, -30.0, 30.0, 4001);
    Mat2 s2;
    s2 << 0, -I, I, 0;
    double unit = 0, c1 = 0, c2 = 0;
    for (int k = 0; k < 50; ++k) {
        // log-spaced magnitudes in [0.1, 10], alternating sign, skipping the threshold points
        double z = std::pow(10.0, -1.0 + 2.0 * (k / 2 + 0.5) / 25.0);
        if (std::abs(z - 1.0) < 1e-2) z *= 1.03;
        if (k % 2) z = -z;
        const Mat2 S = scattering_matrix(z, pot);
        unit = std::max(unit, std::abs(std::norm(S(0, 0)) - std::norm(S(1, 0)) - 1.0));
        c1 = std::max(c1, (S - scattering_matrix(-z, pot).conjugate()).cwiseAbs().maxCoeff());
        c2 = std::max(c2, (S + s2 * scattering_matrix(1.0 / z, pot) * s2).cwiseAbs().maxCoeff());
    }
    // the Wronskian a against the fixed-step oracle
    double oracle_err = 0.0;
    for (double z : {-2.5, -0.4, 0.7, 1.9, 6.0}) {
        const cplx ref = oracle::a_coefficient(z, perturbed, 30.0, 60000);
        oracle_err = std::max(oracle_err, std::abs(a_coefficient(z, pot) - ref) / std::abs(ref));
    }
    const bool ok = unit < 1e-6 && c1 < 1e-6 && c2 < 1e-6 && oracle_err < 1e-6;
    return {ok, "unitarity " + num(unit) + ", conj sym " + num(c1) + ", inversion sym " + num(c2) +
                    ", a vs RK4 oracle " + num(oracle_err)};
}

Outcome criterion2() {
    const PotentialSample pot = PotentialSample::from_function(perturbed, -30.0, 30.0, 4001);
    const TraceInputs in = TraceInputs::from_scattering(compute_scattering_data(pot));
    double worst = 0.0, worst_oracle = 0.0;
    for (int k = 0; k < 20; ++k) {
        const double r = std::exp(-0.9 + 1.8 * ((k * 7) % 20) / 19.0);
        const double w = 0.15 + (pi - 0.3) * k / 19.0;
        const cplx z = std::polar(r, w);
        const cplx tf = trace_formula_a(z, in);
        const cplx wr = a_coefficient(z, pot);
        worst = std::max(worst, std::abs(tf - wr) / std::abs(wr));
        if (k % 4 == 0) {
            const cplx ref = oracle::a_coefficient(z, perturbed, 30.0, 60000);
            worst_oracle = std::max(worst_oracle, std::abs(tf - ref) / std::abs(ref));
        }
    }
    return {worst < 1e-4 && worst_oracle < 1e-4,
            "max relative error vs Wronskian " + num(worst) + ", vs RK4 oracle " + num(worst_oracle)};
}

Outcome criterion3() {
    const PotentialSample pot = PotentialSample::from_function([](double x) { return std::tanh(x); }, -30.0, 30.0, 4001);
    const ScatteringData sd = compute_scattering_data(pot);
    const bool one = sd.discrete.size() == 1;
    const double zerr = one ? std::abs(sd.discrete[0].z - I) : 1.0;
    const double phase = one ? std::arg(sd.discrete[0].c) : 0.0;
    const double phase_err = std::abs(phase - std::arg(I));
    const double rmax = sd.max_abs_r();
    const bool ok = one && zerr < 1e-6 && phase_err < 1e-6 && rmax < 1e-5;
    std::ostringstream os;
    os << "zeros " << sd.discrete.size() << ", |z-i| " << num(zerr) << ", arg c0 " << phase << " (target "
       << std::arg(I) << "), max|r| " << num(rmax);
    if (one) os << ", c0 = " << sd.discrete[0].c.real() << (sd.discrete[0].c.imag() < 0 ? "" : "+") << sd.discrete[0].c.imag() << "i";
    return {ok, os.str()};
}

Outcome criterion4() {
    // discrete residual: sixth-order space stencils, central time difference with tau = h^2
    std::ostringstream os;
    bool ok = true;
    const std::vector<SolitonConfig> cfgs = {SolitonConfig::from_polar({pi / 3}, {1.0}),
                                             SolitonConfig::from_polar({pi / 3, pi / 2}, {1.0, 1.0})};
    const std::vector<double> hs = {0.08, 0.04, 0.02};
    for (std::size_t n = 0; n < cfgs.size(); ++n) {
        std::vector<double> lx, ly, ly2;
        double finest = 0.0;
        for (double h : hs) {
            auto snap = [&](double t) {
                FieldSnapshot s;
                s.t = t;
                const long m = std::lround(24.0 / h);
                for (long i = 0; i <= m; ++i) s.x.push_back(-16.0 + h * i);
                s.q = exact_nsoliton(cfgs[n], s.x, t);
                return s;
            };
            const double tau = h * h;
            finest = pde_residual(snap(1.0 - tau), snap(1.0), snap(1.0 + tau));
            lx.push_back(std::log(h));
            ly.push_back(std::log(finest));
            double m2 = 0.0;
            auto q = [&](double x, double t) { return exact_nsoliton(cfgs[n], x, t); };
            for (int i = 0; i <= 200; ++i) m2 = std::max(m2, std::abs(oracle::pde_residual_2nd(q, -12.0 + 0.1 * i, 1.0, h / 4)));
            ly2.push_back(std::log(m2));
        }
        const double slope = oracle::fit_slope(lx, ly);
        ok = ok && slope >= 2.0 && finest < 1e-4;
        os << "N=" << n + 1 << ": slope " << slope << ", finest residual " << num(finest)
           << " (second-order central oracle slope " << oracle::fit_slope(lx, ly2) << "); ";
    }
    return {ok, os.str()};
}

Outcome criterion5() {
    std::ostringstream os;
    bool ok = true;
    for (double w : {pi / 6, pi / 3, pi / 2}) {
        const SolitonConfig cfg = SolitonConfig::from_polar({w}, {1.0});
        std::vector<FieldSnapshot> snaps;
        for (int k = 0; k <= 10; ++k) {
            const double t = k;
            FieldSnapshot s;
            s.t = t;
            for (double x = -70.0; x <= 10.0; x += 0.02) s.x.push_back(x);
            s.q = exact_nsoliton(cfg, s.x, t);
            snaps.push_back(std::move(s));
        }
        const auto tracks = extract_soliton_tracks(snaps);
        const double expect = -(4.0 * std::cos(w) * std::cos(w) + 2.0);
        double v = std::nan("");
        for (const Track& tr : tracks)
            if (tr.points.size() == snaps.size()) v = tr.fitted_velocity();
        const double rel = std::abs(v - expect) / std::abs(expect);
        ok = ok && rel < 0.02;
        os << "arg " << w << ": v " << v << " vs " << expect << "; ";
    }
    return {ok, os.str()};
}

Outcome criterion6() {
    const SolitonConfig cfg = SolitonConfig::from_polar({1.0, 1.03}, {1.0, 1.0});
    const AsymptoticPredictor pred(cfg, TraceInputs::reflectionless(cfg.zeros()));
    std::vector<double> lt, le, errs;
    for (double t : {10.0, 20.0, 40.0, 80.0}) {
        double m = 0.0;
        for (double x = -5.9 * t; x <= -2.1 * t; x += 0.05) m = std::max(m, std::abs(exact_nsoliton(cfg, x, t) - pred(x, t)));
        errs.push_back(m);
        lt.push_back(std::log(t));
        le.push_back(std::log(m));
    }
    bool mono = true;
    for (std::size_t k = 1; k < errs.size(); ++k) mono = mono && errs[k] < errs[k - 1];
    const double slope = oracle::fit_slope(lt, le);
    std::ostringstream os;
    os << "errors";
    for (double e : errs) os << " " << num(e);
    os << ", log-log slope " << slope;
    return {mono && slope <= -1.0, os.str()};
}

Outcome criterion7() {
    auto q0f = [](double x) { return std::tanh(x) + 0.05 * oracle::sech2(x - 3.0); };
    const PotentialSample scat = PotentialSample::from_function(q0f, -40.0, 40.0, 8001);
    const ScatteringData sd = compute_scattering_data(scat);
    const AsymptoticPredictor pred(solitons_from_spectrum(sd.discrete), TraceInputs::from_scattering(sd));
    SimConfig cfg;
    cfg.L = 128.0;
    cfg.N = 2561;
    cfg.dt = 0.005;
    cfg.t_end = 16.0;
    cfg.snapshot_times = {4.0, 8.0, 16.0};
    cfg.core_left = -1.0;
    cfg.core_right = 3.0;
    const auto snaps = evolve(PotentialSample::from_function(q0f, -128.0, 128.0, 2561), cfg);
    std::vector<double> errs;
    double drift = 0.0;
    for (const FieldSnapshot& s : snaps) {
        double m = 0.0;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double xi = s.x[i] / s.t;
            if (xi < -5.5 || xi >= -2.0) continue;
            m = std::max(m, std::abs(s.q[i] - pred(s.x[i], s.t)));
        }
        errs.push_back(m);
        drift = std::max(drift, s.diagnostics.boundary_drift);
    }
    bool mono = true;
    for (std::size_t k = 1; k < errs.size(); ++k) mono = mono && errs[k] < errs[k - 1];
    std::ostringstream os;
    os << sd.discrete.size() << " eigenvalue(s); window errors";
    for (double e : errs) os << " " << num(e);
    os << "; boundary drift " << num(drift);
    return {mono && drift < 1e-6, os.str()};
}

Outcome criterion8() {
    const SolitonConfig cfg = SolitonConfig::from_polar({0.5, 1.1}, {1.0, 1.0});
    const auto zs = cfg.zeros();
    const auto cs = cfg.norming();
    const TraceInputs in = TraceInputs::reflectionless(zs);
    std::vector<FieldSnapshot> snaps;
    for (int k = 0; k <= 10; ++k) {
        const double t = 40.0 + 4.0 * k;
        FieldSnapshot s;
        s.t = t;
        for (double x = -6.0 * t; x <= -1.5 * t; x += 0.01) s.x.push_back(x);
        s.q = exact_nsoliton(cfg, s.x, t);
        snaps.push_back(std::move(s));
    }
    const auto tracks = extract_soliton_tracks(snaps);
    std::ostringstream os;
    bool ok = true;
    int matched = 0;
    for (int j = 0; j < 2; ++j) {
        const double xj = phase_shift_xj(j, zs, cs, in);
        const double xj_plain = phase_shift_xj(j, zs, cs, std::vector<int>{}, in);
        const double v = soliton_velocity(zs[j]);
        for (const Track& tr : tracks) {
            if (tr.points.size() != snaps.size() || std::abs(tr.fitted_velocity() - v) > 0.05) continue;
            double off = 0.0, off_plain = 0.0;
            for (const TrackPoint& p : tr.points) {
                off += p.position - one_soliton_center(zs[j], p.t, xj);
                off_plain += p.position - one_soliton_center(zs[j], p.t, xj_plain);
            }
            off /= tr.points.size();
            off_plain /= tr.points.size();
            const double unit = 1.0 / (2.0 * zs[j].imag());
            ok = ok && std::abs(off) <= 0.02 * unit;
            ++matched;
            os << "soliton " << j << ": offset " << num(off / unit) << " units (without the product term "
               << num(off_plain / unit) << "); ";
        }
    }
    return {ok && matched == 2, os.str()};
}

Outcome criterion9(const std::string& cli) {
    const std::string out = (std::filesystem::temp_directory_path() / "mkdv_acceptance_selftest").string();
    const std::string cmd = "\"" + cli + "\" selftest --out \"" + out + "\" > \"" + out + ".log\" 2>&1";
    const int rc = std::system(cmd.c_str());
    const int code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return {code == 0, "selftest exit code " + std::to_string(code) + " (log " + out + ".log)"};
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "mkdv";
    std::vector<int> only;
    for (int i = 2; i < argc; ++i) only.push_back(std::atoi(argv[i]));
    const std::vector<std::function<Outcome()>> criteria = {
        criterion1, criterion2, criterion3, criterion4, criterion5,
        criterion6, criterion7, criterion8, [&] { return criterion9(cli); }};
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const int id = static_cast<int>(k) + 1;
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k]();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %d: %s  [%.1fs] %s\n", id, o.pass ? "PASS" : "FAIL", sec, o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
