#include "mkdv/direct_scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include "mkdv/uniformization.hpp"

namespace mkdv {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<cplx, 4>;

struct JostRhs {
    const PotentialSample* pot;
    cplx iz;
    cplx ioz;

    void operator()(const State& m, State& d, double x) const {
        const double q = (*pot)(x);
        d[0] = ioz * m[0] + q * m[1];
        d[1] = q * m[0] - iz * m[1];
        d[2] = iz * m[2] + q * m[3];
        d[3] = q * m[2] - ioz * m[3];
    }
};

State initial_state(cplx z, double bv) {
    const Mat2 Y = background_matrix(z, bv);
    return {Y(0, 0), Y(1, 0), Y(0, 1), Y(1, 1)};
}

void check_state(const State& s, cplx z) {
    for (const cplx& v : s) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            std::ostringstream os;
            os << "Jost integration produced a non-finite value at z=" << z;
            throw NumericalError(os.str());
        }
    }
}

State integrate_to(cplx z, const PotentialSample& pot, Side side, double x_end,
                   const ScatteringOptions& opt) {
    if (z == cplx{0.0, 0.0}) throw DomainError("z must be nonzero");
    JostRhs rhs{&pot, I * z, I / z};
    const bool plus = side == Side::Plus;
    State s = initial_state(z, plus ? pot.right_bv() : pot.left_bv());
    const double x_start = plus ? pot.xmax() : pot.xmin();
    if (x_start == x_end) return s;
    const double h0 = (plus ? -1.0 : 1.0) * std::min(pot.dx(), 0.1 / std::max(1.0, std::abs(z)));
    auto stepper =
        odeint::make_controlled(opt.atol, opt.rtol, odeint::runge_kutta_dopri5<State>());
    try {
        odeint::integrate_adaptive(stepper, rhs, s, x_start, x_end, h0);
    } catch (const std::exception& e) {
        throw NumericalError(std::string("Jost integration failed: ") + e.what());
    }
    check_state(s, z);
    return s;
}

cplx det2(const Vec2& a, const Vec2& b) { return a(0) * b(1) - a(1) * b(0); }

bool is_real(cplx z) { return std::abs(z.imag()) <= 1e-14 * std::max(1.0, std::abs(z)); }

}  // namespace

Mat2 background_matrix(cplx z, double bv) {
    if (z == cplx{0.0, 0.0}) throw DomainError("z must be nonzero");
    Mat2 Y;
    Y << 1.0, I * bv / z, -I * bv / z, 1.0;
    return Y;
}

Vec2 JostColumns::psi1(std::size_t i) const { return mu1[i] * std::exp(I * zeta(z) * x[i]); }
Vec2 JostColumns::psi2(std::size_t i) const { return mu2[i] * std::exp(-I * zeta(z) * x[i]); }

JostColumns jost_columns(cplx z, const PotentialSample& pot, Side side,
                         const ScatteringOptions& opt) {
    if (z == cplx{0.0, 0.0}) throw DomainError("z must be nonzero");
    pot.require_decayed(opt.decay_threshold);
    JostColumns out;
    out.z = z;
    out.side = side;
    out.x = pot.x();
    const std::size_t n = out.x.size();
    out.mu1.resize(n);
    out.mu2.resize(n);
    JostRhs rhs{&pot, I * z, I / z};
    const bool plus = side == Side::Plus;
    State s = initial_state(z, plus ? pot.right_bv() : pot.left_bv());
    std::vector<double> times(out.x);
    if (plus) std::reverse(times.begin(), times.end());
    auto stepper =
        odeint::make_controlled(opt.atol, opt.rtol, odeint::runge_kutta_dopri5<State>());
    const double h0 = (plus ? -1.0 : 1.0) * std::min(pot.dx(), 0.1 / std::max(1.0, std::abs(z)));
    std::size_t k = 0;
    auto observer = [&](const State& st, double) {
        const std::size_t idx = plus ? n - 1 - k : k;
        out.mu1[idx] = Vec2(st[0], st[1]);
        out.mu2[idx] = Vec2(st[2], st[3]);
        ++k;
    };
    try {
        odeint::integrate_times(stepper, rhs, s, times.begin(), times.end(), h0, observer);
    } catch (const std::exception& e) {
        throw NumericalError(std::string("Jost integration failed: ") + e.what());
    }
    check_state(s, z);
    return out;
}

double matching_point(const PotentialSample& pot) { return 0.5 * (pot.xmin() + pot.xmax()); }

JostAtPoint jost_at(cplx z, const PotentialSample& pot, double x0, bool need_all,
                    const ScatteringOptions& opt) {
    pot.require_decayed(opt.decay_threshold);
    JostAtPoint j;
    j.x0 = x0;
    const State p = integrate_to(z, pot, Side::Plus, x0, opt);
    const State m = integrate_to(z, pot, Side::Minus, x0, opt);
    j.mu1p = Vec2(p[0], p[1]);
    j.mu2p = Vec2(p[2], p[3]);
    j.mu1m = Vec2(m[0], m[1]);
    j.mu2m = Vec2(m[2], m[3]);
    (void)need_all;
    return j;
}

cplx wronskian_a(cplx z, const PotentialSample& pot, const ScatteringOptions& opt) {
    const JostAtPoint j = jost_at(z, pot, matching_point(pot), false, opt);
    return det2(j.mu1p, j.mu2m);
}

cplx a_coefficient(cplx z, const PotentialSample& pot, const ScatteringOptions& opt) {
    if (z.imag() < -1e-14) throw DomainError("a is defined on the closed upper half plane");
    const cplx d = 1.0 - 1.0 / (z * z);
    if (std::abs(d) < 1e-14) throw DomainError("a has removable pole points at z = +-1; use a_pm");
    return wronskian_a(z, pot, opt) / d;
}

ScatteringCoefficients scattering_coefficients(cplx z, const PotentialSample& pot,
                                               const ScatteringOptions& opt) {
    if (z == cplx{0.0, 0.0}) throw DomainError("z = 0 is a pole point");
    const cplx d = 1.0 - 1.0 / (z * z);
    if (std::abs(d) < 1e-14) throw DomainError("z = +-1 are pole points of a and b");
    if (z.imag() < -1e-14) throw DomainError("a is defined on the closed upper half plane");
    const double x0 = matching_point(pot);
    const JostAtPoint j = jost_at(z, pot, x0, true, opt);
    ScatteringCoefficients sc;
    sc.a = det2(j.mu1p, j.mu2m) / d;
    if (is_real(z))
        sc.b = std::exp(2.0 * I * zeta(z) * x0) * det2(j.mu1m, j.mu1p) / d;
    else
        sc.b = cplx{std::numeric_limits<double>::quiet_NaN(), 0.0};
    return sc;
}

cplx a_pm(int sign, const PotentialSample& pot, const ScatteringOptions& opt) {
    if (sign != 1 && sign != -1) throw DomainError("a_pm sign must be +1 or -1");
    return 0.5 * wronskian_a(cplx{static_cast<double>(sign), 0.0}, pot, opt);
}

namespace {

constexpr double kGenericThreshold = 1e-7;

ScatteringOptions near_threshold_options(double s, const ScatteringOptions& opt) {
    if (std::abs(std::abs(s) - 1.0) > 1e-2) return opt;
    ScatteringOptions tight = opt;
    tight.rtol = std::min(opt.rtol, 1e-13);
    tight.atol = std::min(opt.atol, 1e-15);
    return tight;
}

}  // namespace

cplx reflection(double z, const PotentialSample& pot, const ScatteringOptions& opt) {
    if (z == 0.0) throw DomainError("r is undefined at z = 0");
    if (std::abs(z) < opt.z_min) return -std::conj(reflection(1.0 / z, pot, opt));
    const double x0 = matching_point(pot);
    const JostAtPoint j = jost_at(cplx{z, 0.0}, pot, x0, true, near_threshold_options(z, opt));
    const cplx den = det2(j.mu1p, j.mu2m);
    if (std::abs(std::abs(z) - 1.0) < 1e-12) {
        if (std::abs(den) > kGenericThreshold) return z > 0.0 ? -I : I;
        const double d = 1e-4 * z;
        return 2.0 * reflection(z + d, pot, opt) - reflection(z + 2.0 * d, pot, opt);
    }
    if (std::abs(den) < 1e-13) throw NumericalError("vanishing Wronskian on the real axis");
    return std::exp(2.0 * I * zeta(cplx{z, 0.0}) * x0) * det2(j.mu1m, j.mu1p) / den;
}

Mat2 scattering_matrix(double z, const PotentialSample& pot, const ScatteringOptions& opt) {
    const double x0 = matching_point(pot);
    const JostAtPoint j = jost_at(cplx{z, 0.0}, pot, x0, true, opt);
    const cplx e = std::exp(I * zeta(cplx{z, 0.0}) * x0);
    Mat2 pp, pm;
    pp.col(0) = j.mu1p * e;
    pp.col(1) = j.mu2p / e;
    pm.col(0) = j.mu1m * e;
    pm.col(1) = j.mu2m / e;
    return pm.inverse() * pp;
}

int winding_number(cplx z, double radius, const PotentialSample& pot,
                   const ScatteringOptions& opt, int points) {
    double total = 0.0;
    cplx prev = wronskian_a(z + radius, pot, opt);
    for (int k = 1; k <= points; ++k) {
        const cplx w = z + radius * std::exp(I * (2.0 * pi * k / points));
        const cplx cur = wronskian_a(w, pot, opt);
        total += std::arg(cur / prev);
        prev = cur;
    }
    return static_cast<int>(std::lround(total / (2.0 * pi)));
}

cplx a_derivative(cplx z, const PotentialSample& pot, const ScatteringOptions& opt) {
    const double rad = std::min(1e-2, 0.5 * z.imag());
    if (!(rad > 0.0)) throw DomainError("a' is evaluated inside the upper half plane only");
    constexpr int n = 16;
    cplx acc = 0.0;
    for (int k = 0; k < n; ++k) {
        const cplx e = std::exp(I * (2.0 * pi * (k + 0.5) / n));
        acc += a_coefficient(z + rad * e, pot, opt) / e;
    }
    return acc / (static_cast<double>(n) * rad);
}

std::vector<cplx> find_discrete_spectrum(const PotentialSample& pot, const ScatteringOptions& opt) {
    pot.require_decayed(opt.decay_threshold);
    const bool kink = pot.left_bv() != pot.right_bv();
    // a is imaginary on the unit circle for kink data and real for same-sign data
    auto g = [&](double w) {
        const cplx a = a_coefficient(std::exp(I * w), pot, opt);
        return kink ? a.imag() : a.real();
    };
    const int n = std::max(16, opt.scan_points);
    const double h = 0.5 * pi / n;
    std::vector<double> ws;
    for (int k = 12; k >= 1; --k) ws.push_back(h * std::ldexp(1.0, -k));
    for (int k = 1; k < n; ++k) ws.push_back(h * k);
    if (!kink) ws.push_back(0.5 * pi);
    std::vector<double> gs(ws.size());
    for (std::size_t k = 0; k < ws.size(); ++k) gs[k] = g(ws[k]);

    std::vector<cplx> roots;
    for (std::size_t k = 0; k + 1 < ws.size(); ++k) {
        if (gs[k] == 0.0) {
            roots.push_back(std::exp(I * ws[k]));
            continue;
        }
        if ((gs[k] < 0.0) == (gs[k + 1] < 0.0) || gs[k + 1] == 0.0) continue;
        std::uintmax_t iters = 100;
        auto tol = boost::math::tools::eps_tolerance<double>(48);
        const auto br = boost::math::tools::toms748_solve(g, ws[k], ws[k + 1], gs[k], gs[k + 1], tol,
                                                          iters);
        roots.push_back(std::exp(I * (0.5 * (br.first + br.second))));
    }
    if (kink) {
        roots.push_back(I);
    } else if (std::abs(gs.back()) < 1e-9) {
        roots.push_back(I);
    }
    for (std::size_t k = 0; k < roots.size(); ++k) {
        if (std::abs(roots[k].real()) < 1e-14) roots[k] = I;
        double sep = 0.5 * roots[k].imag();
        for (std::size_t m = 0; m < roots.size(); ++m)
            if (m != k) sep = std::min(sep, 0.5 * std::abs(roots[k] - roots[m]));
        const double rad = std::min(1e-2, sep);
        const cplx da = a_derivative(roots[k], pot, opt);
        const int wn = winding_number(roots[k], rad, pot, opt);
        if (std::abs(da) < opt.simplicity_tol || wn != 1) {
            std::ostringstream os;
            os << "zero of a at " << roots[k] << " is not simple (|a'|=" << std::abs(da)
               << ", winding " << wn << ")";
            throw NumericalError(os.str());
        }
    }
    std::sort(roots.begin(), roots.end(),
              [](cplx a, cplx b) { return a.real() > b.real(); });
    return roots;
}

ConnectionCoefficients connection_coefficients(cplx zk, const PotentialSample& pot,
                                               const ScatteringOptions& opt) {
    if (!(zk.imag() > 0.0)) throw DomainError("connection coefficients need Im z_k > 0");
    ConnectionCoefficients cc;
    const double x0 = matching_point(pot);
    const JostAtPoint j = jost_at(zk, pot, x0, false, opt);
    const cplx ez = std::exp(I * zeta(zk) * x0);
    const Vec2 p1 = j.mu1p * ez;
    const Vec2 p2 = j.mu2m / ez;
    cc.gamma = p2.dot(p1) / p2.squaredNorm();
    cc.a_prime = a_derivative(zk, pot, opt);
    if (std::abs(cc.a_prime) < opt.simplicity_tol)
        throw NumericalError("a'(z_k) vanishes: zero is not simple");
    cc.c = cc.gamma / cc.a_prime;

    const JostColumns jm = jost_columns(zk, pot, Side::Minus, opt);
    std::vector<double> w(jm.x.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = jm.psi2(i).squaredNorm();
    // composite Simpson with a trapezoid panel when the count is even
    const double h = pot.dx();
    double norm = 0.0;
    std::size_t last = w.size() - 1;
    if (last % 2 == 1) {
        norm += 0.5 * h * (w[last - 1] + w[last]);
        --last;
    }
    for (std::size_t i = 0; i + 2 <= last; i += 2) norm += h / 3.0 * (w[i] + 4.0 * w[i + 1] + w[i + 2]);
    cc.c_alt = -2.0 * zk / norm;
    return cc;
}

double ScatteringGrid::u_of(double s) const {
    return std::log1p(std::sqrt(std::max(0.0, s - 1.0) / scale));
}
double ScatteringGrid::s_of(double u) const {
    const double e = std::expm1(u);
    return 1.0 + scale * e * e;
}
double ScatteringGrid::u_step() const { return u_of(z_max) / (points - 1); }

std::vector<double> half_line_grid(const ScatteringGrid& g) {
    if (g.points < 8 || !(g.scale > 0.0) || !(g.z_max > 1.0))
        throw ConfigError("invalid scattering grid");
    std::vector<double> s(g.points);
    const double h = g.u_step();
    for (int i = 0; i < g.points; ++i) s[i] = g.s_of(h * i);
    s.front() = 1.0;
    s.back() = g.z_max;
    return s;
}

std::vector<std::pair<double, cplx>> ScatteringData::r_samples() const {
    std::vector<std::pair<double, cplx>> out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        out.emplace_back(s[i], r[i]);
        out.emplace_back(-s[i], std::conj(r[i]));
        if (s[i] != 1.0) {
            out.emplace_back(1.0 / s[i], -std::conj(r[i]));
            out.emplace_back(-1.0 / s[i], -r[i]);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

double ScatteringData::max_abs_r() const {
    double m = 0.0;
    for (const cplx& v : r) m = std::max(m, std::abs(v));
    return m;
}

ScatteringData compute_scattering_data(const PotentialSample& pot, const ScatteringGrid& g,
                                       const ScatteringOptions& opt) {
    pot.require_decayed(opt.decay_threshold);
    ScatteringData sd;
    sd.left_bv = pot.left_bv();
    sd.right_bv = pot.right_bv();
    sd.grid = g;
    sd.s = half_line_grid(g);
    const double x0 = matching_point(pot);
    sd.r.resize(sd.s.size());
    sd.wronskian.resize(sd.s.size());
    for (std::size_t i = 0; i < sd.s.size(); ++i) {
        const cplx z{sd.s[i], 0.0};
        const JostAtPoint j = jost_at(z, pot, x0, true, near_threshold_options(sd.s[i], opt));
        sd.wronskian[i] = det2(j.mu1p, j.mu2m);
        const cplx num = std::exp(2.0 * I * zeta(z) * x0) * det2(j.mu1m, j.mu1p);
        sd.r[i] = i == 0 ? cplx{} : num / sd.wronskian[i];
    }
    // at s = 1 the Jost columns are parallel: r(1) = −i unless a stays bounded there
    if (std::abs(sd.wronskian[0]) > kGenericThreshold)
        sd.r[0] = -I;
    else
        sd.r[0] = sd.r[1] + (sd.r[1] - sd.r[2]) * (sd.s[1] - sd.s[0]) / (sd.s[2] - sd.s[1]);
    sd.a_plus = 0.5 * sd.wronskian.front();
    sd.a_minus = a_pm(-1, pot, opt);
    for (const cplx& z : find_discrete_spectrum(pot, opt)) {
        const ConnectionCoefficients cc = connection_coefficients(z, pot, opt);
        sd.discrete.push_back({z, cc.c, cc.gamma});
    }
    return sd;
}

}  // namespace mkdv
