#include "mkdv/mkdv_sim.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace mkdv {

namespace {

constexpr double kD1[3] = {3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};
constexpr double kD3[4] = {-61.0 / 30.0, 169.0 / 120.0, -3.0 / 10.0, 7.0 / 240.0};

inline double at(const std::vector<double>& q, long i, double left, double right) {
    if (i < 0) return left;
    if (i >= static_cast<long>(q.size())) return right;
    return q[i];
}

double boundary_drift(const std::vector<double>& q, double left, double right) {
    return std::max(std::abs(q.front() - left), std::abs(q.back() - right));
}

double edge_deviation(const std::vector<double>& q, double left, double right) {
    double d = 0.0;
    const std::size_t m = std::min<std::size_t>(10, q.size());
    for (std::size_t i = 0; i < m; ++i) {
        d = std::max(d, std::abs(q[i] - left));
        d = std::max(d, std::abs(q[q.size() - 1 - i] - right));
    }
    return d;
}

double mass_like(const std::vector<double>& q, double dx) {
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double w = (i == 0 || i + 1 == q.size()) ? 0.5 : 1.0;
        s += w * (q[i] * q[i] - 1.0);
    }
    return s * dx;
}

bool finite(const std::vector<double>& q) {
    return std::all_of(q.begin(), q.end(), [](double v) { return std::isfinite(v); });
}

struct Rhs {
    double dx, left, right;
    std::vector<double> d1, d3;

    /// N(q) = 6q²q_x and the full right-hand side −q_xxx + 6q²q_x on interior nodes.
    void nonlinear(const std::vector<double>& q, std::vector<double>& out) {
        derivative1(q, dx, left, right, d1);
        out.resize(q.size());
        for (std::size_t i = 0; i < q.size(); ++i) out[i] = 6.0 * q[i] * q[i] * d1[i];
        out.front() = 0.0;
        out.back() = 0.0;
    }
    void full(const std::vector<double>& q, std::vector<double>& out) {
        nonlinear(q, out);
        derivative3(q, dx, left, right, d3);
        for (std::size_t i = 1; i + 1 < q.size(); ++i) out[i] -= d3[i];
    }
};

}  // namespace

std::string to_string(TimeScheme s) { return s == TimeScheme::RK4 ? "rk4" : "imex"; }

TimeScheme scheme_from_string(const std::string& s) {
    if (s == "rk4" || s == "RK4" || s == "RK4-FD") return TimeScheme::RK4;
    if (s == "imex" || s == "IMEX" || s == "IMEX-FD") return TimeScheme::IMEX;
    throw ConfigError("unknown time scheme '" + s + "'");
}

std::vector<double> SimConfig::grid() const {
    std::vector<double> x(N);
    const double h = dx();
    for (int i = 0; i < N; ++i) x[i] = -L + h * i;
    return x;
}

void SimConfig::validate() const {
    if (N < 256) throw ConfigError("simulation needs at least 256 grid points");
    if (!(L > 0.0) || !(dt > 0.0) || !(t_end >= 0.0)) throw ConfigError("L, dt must be positive and t_end >= 0");
    const double h = dx();
    if (scheme == TimeScheme::RK4 && dt > stability_factor * h * h * h) {
        std::ostringstream os;
        os << "explicit step dt=" << dt << " exceeds " << stability_factor << "*dx^3=" << stability_factor * h * h * h;
        throw ConfigError(os.str());
    }
    const double t_max = std::max(t_end, snapshot_times.empty() ? 0.0
                                                                : *std::max_element(snapshot_times.begin(), snapshot_times.end()));
    if (core_left - max_speed * t_max < -L + clearance || core_right > L - clearance)
        throw ConfigError("domain too small: cores come within the clearance of the boundary");
    for (double ts : snapshot_times) {
        if (ts < 0.0 || ts > t_end + 1e-12) throw ConfigError("snapshot times must lie in [0, t_end]");
        const double steps = std::round(ts / dt);
        if (std::abs(steps * dt - ts) > 1e-9 * std::max(1.0, ts))
            throw ConfigError("snapshot times must be multiples of dt");
    }
}

void derivative1(const std::vector<double>& q, double dx, double left, double right, std::vector<double>& out) {
    const long n = static_cast<long>(q.size());
    out.resize(n);
    for (long i = 0; i < n; ++i) {
        double s = 0.0;
        for (long k = 1; k <= 3; ++k) s += kD1[k - 1] * (at(q, i + k, left, right) - at(q, i - k, left, right));
        out[i] = s / dx;
    }
}

void derivative3(const std::vector<double>& q, double dx, double left, double right, std::vector<double>& out) {
    const long n = static_cast<long>(q.size());
    out.resize(n);
    const double h3 = dx * dx * dx;
    for (long i = 0; i < n; ++i) {
        double s = 0.0;
        for (long k = 1; k <= 4; ++k) s += kD3[k - 1] * (at(q, i + k, left, right) - at(q, i - k, left, right));
        out[i] = s / h3;
    }
}

std::vector<FieldSnapshot> evolve(const PotentialSample& q0, const SimConfig& cfg) {
    cfg.validate();
    const std::vector<double> x = cfg.grid();
    const double dx = cfg.dx();
    const double left = q0.left_bv(), right = q0.right_bv();
    std::vector<double> q(cfg.N);
    for (int i = 0; i < cfg.N; ++i) q[i] = q0(x[i]);
    q.front() = left;
    q.back() = right;

    std::vector<long> snap_steps;
    for (double ts : cfg.snapshot_times) snap_steps.push_back(std::lround(ts / cfg.dt));
    const long last_snap = snap_steps.empty() ? 0 : *std::max_element(snap_steps.begin(), snap_steps.end());
    const long total = std::max(std::lround(cfg.t_end / cfg.dt), last_snap) + 1;

    Rhs rhs{dx, left, right, {}, {}};
    std::vector<FieldSnapshot> out(cfg.snapshot_times.size());
    std::vector<bool> filled(out.size(), false);
    std::vector<double> prev;

    auto record = [&](long step, const std::vector<double>& cur) {
        for (std::size_t k = 0; k < snap_steps.size(); ++k) {
            if (snap_steps[k] != step) continue;
            FieldSnapshot& s = out[k];
            s.t = cfg.snapshot_times[k];
            s.x = x;
            s.q = cur;
            s.diagnostics.boundary_drift = boundary_drift(cur, left, right);
            s.diagnostics.edge_deviation = edge_deviation(cur, left, right);
            s.diagnostics.mass_like = mass_like(cur, dx);
        }
    };
    auto residual_at = [&](long step, const std::vector<double>& before, const std::vector<double>& mid,
                           const std::vector<double>& after) {
        for (std::size_t k = 0; k < snap_steps.size(); ++k) {
            if (snap_steps[k] != step) continue;
            FieldSnapshot a{0.0, x, before, {}}, b{cfg.dt, x, mid, {}}, c{2.0 * cfg.dt, x, after, {}};
            out[k].diagnostics.residual_norm = pde_residual(a, b, c);
            filled[k] = true;
        }
    };
    auto completed = [&]() {
        std::vector<FieldSnapshot> good;
        for (std::size_t k = 0; k < out.size(); ++k)
            if (!out[k].q.empty()) good.push_back(out[k]);
        return good;
    };

    record(0, q);
    for (std::size_t k = 0; k < snap_steps.size(); ++k)
        if (snap_steps[k] == 0) filled[k] = true;

    // implicit operator A q = −D3 q on interior rows, with the ghost constants collected in g
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    Eigen::VectorXd gvec = Eigen::VectorXd::Zero(cfg.N);
    Eigen::SparseMatrix<double> A(cfg.N, cfg.N);
    if (cfg.scheme == TimeScheme::IMEX) {
        const double h3 = dx * dx * dx;
        std::vector<Eigen::Triplet<double>> trip;
        for (long i = 1; i + 1 < cfg.N; ++i) {
            for (long k = 1; k <= 4; ++k) {
                const double c = kD3[k - 1] / h3;
                for (auto [j, w] : {std::pair<long, double>{i + k, -c}, std::pair<long, double>{i - k, c}}) {
                    if (j < 0)
                        gvec(i) += w * left;
                    else if (j >= cfg.N)
                        gvec(i) += w * right;
                    else
                        trip.emplace_back(i, j, w);
                }
            }
        }
        A.setFromTriplets(trip.begin(), trip.end());
        Eigen::SparseMatrix<double> M(cfg.N, cfg.N);
        M.setIdentity();
        M = M - 0.5 * cfg.dt * A;
        M.makeCompressed();
        lu.compute(M);
        if (lu.info() != Eigen::Success) throw NumericalError("implicit operator factorization failed");
    }

    std::vector<double> k1, k2, k3, k4, tmp(cfg.N), nl;
    for (long step = 1; step < total + 1; ++step) {
        std::vector<double> next(cfg.N);
        if (cfg.scheme == TimeScheme::RK4) {
            const double h = cfg.dt;
            rhs.full(q, k1);
            for (int i = 0; i < cfg.N; ++i) tmp[i] = q[i] + 0.5 * h * k1[i];
            rhs.full(tmp, k2);
            for (int i = 0; i < cfg.N; ++i) tmp[i] = q[i] + 0.5 * h * k2[i];
            rhs.full(tmp, k3);
            for (int i = 0; i < cfg.N; ++i) tmp[i] = q[i] + h * k3[i];
            rhs.full(tmp, k4);
            for (int i = 0; i < cfg.N; ++i) next[i] = q[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        } else {
            // ARS(4,4,3): L-stable implicit part for −q_xxx, explicit part for 6q²q_x
            static constexpr double aI[5][5] = {{0, 0, 0, 0, 0},
                                                {0, 0.5, 0, 0, 0},
                                                {0, 1.0 / 6.0, 0.5, 0, 0},
                                                {0, -0.5, 0.5, 0.5, 0},
                                                {0, 1.5, -1.5, 0.5, 0.5}};
            static constexpr double aE[5][5] = {{0, 0, 0, 0, 0},
                                                {0.5, 0, 0, 0, 0},
                                                {11.0 / 18.0, 1.0 / 18.0, 0, 0, 0},
                                                {5.0 / 6.0, -5.0 / 6.0, 0.5, 0, 0},
                                                {0.25, 1.75, 0.75, -1.75, 0}};
            Eigen::Map<const Eigen::VectorXd> qv(q.data(), cfg.N);
            std::vector<Eigen::VectorXd> kI(5), kE(5);
            Eigen::VectorXd y = qv;
            for (int st = 0; st < 5; ++st) {
                if (st > 0) {
                    Eigen::VectorXd b = qv + 0.5 * cfg.dt * gvec;
                    for (int j = 0; j < st; ++j) {
                        if (aE[st][j] != 0.0) b += cfg.dt * aE[st][j] * kE[j];
                        if (aI[st][j] != 0.0) b += cfg.dt * aI[st][j] * kI[j];
                    }
                    b(0) = left;
                    b(cfg.N - 1) = right;
                    y = lu.solve(b);
                }
                if (st == 4) break;
                std::vector<double> yv(y.data(), y.data() + cfg.N);
                rhs.nonlinear(yv, nl);
                kE[st] = Eigen::Map<Eigen::VectorXd>(nl.data(), cfg.N);
                kI[st] = A * y + gvec;
            }
            std::copy(y.data(), y.data() + cfg.N, next.begin());
        }
        next.front() = left;
        next.back() = right;
        if (!finite(next)) {
            std::ostringstream os;
            os << "field became non-finite at t=" << step * cfg.dt;
            throw SimulationAborted(os.str(), completed());
        }
        if (!prev.empty()) residual_at(step - 1, prev, q, next);
        prev = std::move(q);
        q = std::move(next);
        record(step, q);
        bool all = std::all_of(filled.begin(), filled.end(), [](bool f) { return f; });
        if (all && step >= total - 1) break;
    }
    return out;
}

double pde_residual(const FieldSnapshot& a, const FieldSnapshot& b, const FieldSnapshot& c) {
    if (a.q.size() != b.q.size() || b.q.size() != c.q.size() || a.x.size() != a.q.size() || b.x != a.x || c.x != a.x)
        throw ConfigError("residual snapshots must share one grid");
    const double d1t = b.t - a.t, d2t = c.t - b.t;
    if (!(d1t > 0.0) || std::abs(d1t - d2t) > 1e-9 * std::max(1.0, d1t))
        throw ConfigError("residual snapshots must be uniformly spaced in time");
    const std::size_t n = b.q.size();
    const double dx = (b.x.back() - b.x.front()) / static_cast<double>(n - 1);
    std::vector<double> q1, q3;
    derivative1(b.q, dx, b.q.front(), b.q.back(), q1);
    derivative3(b.q, dx, b.q.front(), b.q.back(), q3);
    double s = 0.0;
    for (std::size_t i = 4; i + 4 < n; ++i) {
        const double qt = (c.q[i] - a.q[i]) / (2.0 * d1t);
        const double r = qt + q3[i] - 6.0 * b.q[i] * b.q[i] * q1[i];
        s += r * r;
    }
    return std::sqrt(s * dx);
}

double Track::fitted_velocity() const {
    const double n = static_cast<double>(points.size());
    if (points.size() < 2) return 0.0;
    double st = 0, sp = 0, stt = 0, stp = 0;
    for (const TrackPoint& p : points) {
        st += p.t;
        sp += p.position;
        stt += p.t * p.t;
        stp += p.t * p.position;
    }
    return (n * stp - st * sp) / (n * stt - st * st);
}

double Track::fitted_offset() const {
    if (points.empty()) return 0.0;
    const double v = fitted_velocity();
    double s = 0.0;
    for (const TrackPoint& p : points) s += p.position - v * p.t;
    return s / static_cast<double>(points.size());
}

namespace {

struct Feature {
    double position;
    double value;
    std::string kind;
};

std::vector<Feature> features_of(const FieldSnapshot& s, const TrackOptions& opt) {
    std::vector<Feature> f;
    const auto& q = s.q;
    const auto& x = s.x;
    const std::size_t n = q.size();
    const double left = q.front();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(q[i] > q[i - 1] && q[i] >= q[i + 1])) continue;
        if (q[i] - left < opt.threshold) continue;
        if (q[i] > 1.0 - opt.threshold) continue;
        const double den = q[i - 1] - 2.0 * q[i] + q[i + 1];
        const double off = den != 0.0 ? 0.5 * (q[i - 1] - q[i + 1]) / den : 0.0;
        const double h = x[i + 1] - x[i];
        const double val = q[i] - 0.25 * (q[i - 1] - q[i + 1]) * off;
        f.push_back({x[i] + off * h, val, "peak"});
    }
    if (opt.include_front && q.back() > 0.5 && left < -0.5) {
        // the kink front: the rightmost upward zero crossing
        for (std::size_t i = n - 1; i > 0; --i) {
            if (q[i - 1] < 0.0 && q[i] >= 0.0) {
                const double w = q[i - 1] / (q[i - 1] - q[i]);
                f.push_back({x[i - 1] + w * (x[i] - x[i - 1]), 0.0, "front"});
                break;
            }
        }
    }
    return f;
}

}  // namespace

std::vector<Track> extract_soliton_tracks(const std::vector<FieldSnapshot>& snaps, const TrackOptions& opt) {
    for (std::size_t k = 1; k < snaps.size(); ++k)
        if (!(snaps[k].t > snaps[k - 1].t)) throw ConfigError("snapshots must be ordered in time");
    std::vector<Track> tracks;
    for (const FieldSnapshot& s : snaps) {
        std::vector<Feature> feats = features_of(s, opt);
        std::vector<bool> used(feats.size(), false);
        const double h = s.x.size() > 1 ? s.x[1] - s.x[0] : 0.0;
        for (Track& tr : tracks) {
            const TrackPoint& last = tr.points.back();
            double predicted = last.position;
            if (tr.points.size() >= 2) {
                const TrackPoint& p0 = tr.points[tr.points.size() - 2];
                predicted += (last.position - p0.position) / (last.t - p0.t) * (s.t - last.t);
            }
            int best = -1;
            double bestd = std::numeric_limits<double>::infinity();
            int ties = 0;
            for (std::size_t k = 0; k < feats.size(); ++k) {
                if (used[k] || feats[k].kind != tr.kind) continue;
                const double d = std::abs(feats[k].position - predicted);
                if (d < bestd - h) {
                    bestd = d;
                    best = static_cast<int>(k);
                    ties = 0;
                } else if (std::abs(d - bestd) <= h) {
                    ++ties;
                }
            }
            if (best < 0) continue;
            if (ties > 0) std::cerr << "warning: ambiguous track association at t=" << s.t << "\n";
            used[best] = true;
            tr.points.push_back({s.t, feats[best].position, feats[best].value});
        }
        for (std::size_t k = 0; k < feats.size(); ++k)
            if (!used[k]) tracks.push_back({feats[k].kind, {{s.t, feats[k].position, feats[k].value}}});
    }
    std::sort(tracks.begin(), tracks.end(), [](const Track& a, const Track& b) {
        return a.points.back().position < b.points.back().position;
    });
    return tracks;
}

double window_linf(const std::vector<double>& x, const std::vector<double>& a, const std::vector<double>& b,
                   double lo, double hi) {
    double m = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < lo || x[i] > hi) continue;
        any = true;
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    if (!any) throw ConfigError("comparison window contains no grid points");
    return m;
}

double window_l2(const std::vector<double>& x, const std::vector<double>& a, const std::vector<double>& b,
                 double lo, double hi) {
    double s = 0.0;
    bool any = false;
    const double h = x.size() > 1 ? x[1] - x[0] : 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < lo || x[i] > hi) continue;
        any = true;
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    if (!any) throw ConfigError("comparison window contains no grid points");
    return std::sqrt(s * h);
}

}  // namespace mkdv
