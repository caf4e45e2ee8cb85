#include "mkdv/spectral_data.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/interpolators/cardinal_quintic_b_spline.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace mkdv {

namespace {

constexpr int kGaussOrder = 20;

struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;

    GaussRule() {
        using G = boost::math::quadrature::gauss<double, kGaussOrder>;
        const auto& a = G::abscissa();
        const auto& wt = G::weights();
        for (std::size_t i = 0; i < a.size(); ++i) {
            x.push_back(a[i]);
            w.push_back(wt[i]);
            if (a[i] != 0.0) {
                x.push_back(-a[i]);
                w.push_back(wt[i]);
            }
        }
    }
};

const GaussRule& gauss_rule() {
    static const GaussRule rule;
    return rule;
}

template <class F>
cplx gauss_panel(const F& f, double a, double b) {
    const GaussRule& g = gauss_rule();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) acc += g.w[i] * f(c + h * g.x[i]);
    return acc * h;
}

template <class F>
cplx adaptive_gauss(const F& f, double a, double b, cplx whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const cplx left = gauss_panel(f, a, m);
    const cplx right = gauss_panel(f, m, b);
    const cplx sum = left + right;
    const double err = std::abs(sum - whole);
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(left) + std::abs(right));
    if (depth <= 0 || err <= std::max(tol, floor) || m <= a || m >= b) return sum;
    return adaptive_gauss(f, a, m, left, 0.7 * tol, depth - 1) +
           adaptive_gauss(f, m, b, right, 0.7 * tol, depth - 1);
}

std::function<cplx(double)> fold(const std::function<cplx(double)>& f) {
    return [f](double s) {
        const double u = 1.0 / s;
        return f(s) + f(-s) + (f(u) + f(-u)) * (u * u);
    };
}

}  // namespace

struct TraceInputs::Table {
    ScatteringGrid grid;
    double kappa = 0.0;
    double tail = 0.0;
    std::unique_ptr<boost::math::interpolators::cardinal_quintic_b_spline<double>> spline;

    /// Singular part of L near s = 1, written in v = s − 1.
    double singular(double v) const { return kappa > 0.0 ? 2.0 * std::log(-std::expm1(-v)) : 0.0; }
    double smooth(double s) const { return (*spline)(grid.u_of(s)); }
};

TraceInputs TraceInputs::from_scattering(const ScatteringData& sd, const QuadratureSpec& q) {
    TraceInputs in;
    in.quad_ = q;
    for (const DiscreteEigen& d : sd.discrete) in.zeros_.push_back(d.z);
    const std::vector<double> expect = half_line_grid(sd.grid);
    if (sd.s.size() != expect.size() || sd.r.size() != sd.s.size() || sd.wronskian.size() != sd.s.size())
        throw ConfigError("reflection samples do not match their grid description");
    for (std::size_t i = 0; i < expect.size(); ++i)
        if (std::abs(sd.s[i] - expect[i]) > 1e-10 * expect[i])
            throw ConfigError("reflection samples do not match their grid description");
    auto t = std::make_shared<Table>();
    t->grid = sd.grid;
    const bool generic = std::abs(sd.wronskian.front()) > 1e-7;
    t->kappa = generic ? 1.0 : 0.0;
    const std::size_t n = sd.s.size();
    std::vector<double> g(n);
    bool nonzero = false;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = sd.s[i];
        const double v = s - 1.0;
        const double logd = std::log(std::abs(sd.wronskian[i]));
        if (generic) {
            const double lead = i == 0 ? 0.0 : 2.0 * std::log(v / -std::expm1(-v));
            g[i] = lead + 2.0 * std::log((s + 1.0) / (s * s)) - 2.0 * logd;
        } else if (i > 0) {
            g[i] = std::log1p(-std::norm(sd.r[i]));
        }
        if (!std::isfinite(g[i])) throw NumericalError("log(1-|r|^2) is not finite on the sample grid");
        if (std::abs(sd.r[i]) > 1e-14) nonzero = true;
    }
    if (!generic) g[0] = 3.0 * g[1] - 3.0 * g[2] + g[3];
    if (!nonzero && !generic) return reflectionless(in.zeros_, q);
    t->spline = std::make_unique<boost::math::interpolators::cardinal_quintic_b_spline<double>>(
        g.data(), g.size(), 0.0, sd.grid.u_step());
    const double zm = sd.grid.z_max;
    t->tail = (t->singular(zm - 1.0) + g.back()) * std::pow(zm, 4);
    in.table_ = std::move(t);
    return in;
}

TraceInputs TraceInputs::reflectionless(std::vector<cplx> zeros, const QuadratureSpec& q) {
    TraceInputs in;
    in.zeros_ = std::move(zeros);
    in.quad_ = q;
    return in;
}

double TraceInputs::z_max() const { return table_ ? table_->grid.z_max : 0.0; }

double TraceInputs::log_weight_half(double s) const {
    if (!table_) return 0.0;
    const Table& t = *table_;
    if (s > t.grid.z_max) return t.tail / std::pow(s, 4);
    return t.singular(s - 1.0) + t.smooth(s);
}

double TraceInputs::log_weight(double s) const {
    if (s == 0.0) throw DomainError("log(1-|r|^2) is evaluated on the real line without 0");
    double a = std::abs(s);
    if (a < 1.0) a = 1.0 / a;
    return log_weight_half(a);
}

cplx TraceInputs::integrate_half(const std::function<cplx(double)>& folded,
                                 const std::vector<double>& breaks) const {
    const Table& t = *table_;
    // integrate in v = s − 1 so that the logarithm at s = 1 keeps full precision
    auto body = [&](double v) {
        const double s = 1.0 + v;
        return (t.singular(v) + t.smooth(s)) * folded(s);
    };
    cplx total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i], b = breaks[i + 1];
        if (!(b > a)) continue;
        const cplx whole = gauss_panel(body, a, b);
        const double tol = std::max(quad_.abs_tol, quad_.rel_tol * std::abs(whole));
        total += adaptive_gauss(body, a, b, whole, tol, quad_.max_depth);
    }
    // tail s = z_max/u with L ≈ tail/s⁴
    const double zm = t.grid.z_max;
    auto tail = [&](double u) {
        if (u <= 0.0) return cplx{0.0, 0.0};
        return t.tail * u * u / (zm * zm * zm) * folded(zm / u);
    };
    const cplx whole = gauss_panel(tail, 0.0, 1.0);
    total += adaptive_gauss(tail, 0.0, 1.0, whole,
                            std::max(quad_.abs_tol, quad_.rel_tol * std::abs(whole)), quad_.max_depth);
    return total;
}

namespace {

std::vector<double> base_breaks(double z_max) {
    std::vector<double> br{0.0};
    for (int k = 60; k >= 1; --k) br.push_back(std::ldexp(1.0, -k));
    for (double v = 1.0; v < z_max - 1.0; v *= 1.25) br.push_back(v);
    br.push_back(z_max - 1.0);
    return br;
}

}  // namespace

cplx TraceInputs::integrate(const std::function<cplx(double)>& f, const std::vector<cplx>& hot) const {
    if (!table_) return 0.0;
    const double vmax = table_->grid.z_max - 1.0;
    std::vector<double> br = base_breaks(table_->grid.z_max);
    for (const cplx& z : hot) {
        double p = std::abs(z.real());
        double w = std::max(std::abs(z.imag()), 1e-14);
        if (p < 1.0 && p > 0.0) {
            w /= p * p;
            p = 1.0 / p;
        }
        if (p <= 0.0) continue;
        const double pv = p - 1.0;
        br.push_back(pv);
        for (double k = 1.0; k < 1e6; k *= 4.0) {
            br.push_back(pv - k * w);
            br.push_back(pv + k * w);
        }
    }
    std::vector<double> keep;
    for (double b : br)
        if (b >= 0.0 && b <= vmax) keep.push_back(b);
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    return integrate_half(fold(f), keep);
}

cplx TraceInputs::integrate_tanh_sinh(const std::function<cplx(double)>& f) const {
    if (!table_) return 0.0;
    const Table& t = *table_;
    const auto folded = fold(f);
    boost::math::quadrature::tanh_sinh<double> ts(12);
    auto part = [&](auto&& g, double a, double b) {
        const double re = ts.integrate([&](double v) { return g(v).real(); }, a, b);
        const double im = ts.integrate([&](double v) { return g(v).imag(); }, a, b);
        return cplx{re, im};
    };
    auto body = [&](double v) {
        const double s = 1.0 + v;
        return (t.singular(v) + t.smooth(s)) * folded(s);
    };
    const double zm = t.grid.z_max;
    auto tail = [&](double u) { return t.tail * u * u / (zm * zm * zm) * folded(zm / u); };
    cplx total = part(body, 0.0, 1.0);
    for (double a = 1.0; a < zm - 1.0; a *= 2.0) total += part(body, a, std::min(2.0 * a, zm - 1.0));
    return total + part(tail, 0.0, 1.0);
}

double TraceInputs::l1_norm() const {
    if (!table_) return 0.0;
    auto f = [](double) { return cplx{1.0, 0.0}; };
    // L ≤ 0 on the real line, so the integral of |L| is minus the integral of L
    return -integrate_half(fold(f), base_breaks(table_->grid.z_max)).real();
}

cplx blaschke_factor(cplx z, cplx zn) {
    if (std::abs(zn.real()) < 1e-10) return (z - I) / (z + I);
    return (z - zn) * (z + std::conj(zn)) / ((z - std::conj(zn)) * (z + zn));
}

cplx partition_factor(cplx z, cplx zk) {
    return (z - zk) * (z + std::conj(zk)) / ((z * zk - 1.0) * (z * std::conj(zk) + 1.0));
}

namespace {

void require_off_axis(cplx z, const TraceInputs& in) {
    if (std::abs(z.imag()) < in.quadrature().boundary_offset)
        throw DomainError("evaluation point is within the boundary offset of the real axis");
}

}  // namespace

cplx cauchy_log_integral(cplx z, const TraceInputs& in) {
    require_off_axis(z, in);
    return in.integrate([z](double s) { return 1.0 / (s - z); }, {z});
}

cplx trace_formula_a(cplx z, const TraceInputs& in) {
    if (!(z.imag() >= in.quadrature().boundary_offset))
        throw DomainError("trace formula is evaluated in the upper half plane");
    cplx logprod = 0.0;
    for (const cplx& zn : in.zeros()) logprod += std::log(blaschke_factor(z, zn));
    return std::exp(logprod - cauchy_log_integral(z, in) / (2.0 * pi * I));
}

cplx T_function(cplx z, const SpectrumPartition& part, const TraceInputs& in) {
    require_off_axis(z, in);
    const auto& zs = in.zeros();
    cplx logprod = 0.0;
    for (int k : part.delta) {
        const cplx zk = zs.at(k);
        if (std::abs(z - std::conj(zk)) < 1e-14 || std::abs(z + zk) < 1e-14)
            throw DomainError("T evaluated at a pole");
        logprod += std::log(partition_factor(z, zk));
    }
    // the 1/(2s) part of the kernel is odd and drops out of the folded integral
    return -std::exp(logprod - cauchy_log_integral(z, in) / (2.0 * pi * I));
}

cplx T_function(cplx z, double xi, const TraceInputs& in) {
    return T_function(z, partition_spectrum(in.zeros(), xi), in);
}

double T_infinity(const SpectrumPartition& part, const TraceInputs& in) {
    double v = -1.0;
    for (int k : part.delta) v /= std::norm(in.zeros().at(k));
    return v;
}

cplx T_boundary(double s, int side, const SpectrumPartition& part, const TraceInputs& in) {
    const double d = in.quadrature().boundary_offset * (side >= 0 ? 1.0 : -1.0);
    const cplx t1 = T_function(cplx{s, d}, part, in);
    const cplx t2 = T_function(cplx{s, 2.0 * d}, part, in);
    return 2.0 * t1 - t2;
}

cplx T_expansion_coefficient(const SpectrumPartition& part, const TraceInputs& in) {
    cplx sum = 0.0;
    for (int k : part.delta) sum += 4.0 * I * in.zeros().at(k).imag();
    const cplx total = in.integrate([](double) { return cplx{1.0, 0.0}; });
    return sum - total / (2.0 * pi * I);
}

cplx modified_connection_exponent(cplx zj, const TraceInputs& in) {
    require_off_axis(zj, in);
    return -cauchy_log_integral(zj, in) / (I * pi);
}

cplx modified_connection_exponent_tanh_sinh(cplx zj, const TraceInputs& in) {
    require_off_axis(zj, in);
    return -in.integrate_tanh_sinh([zj](double s) { return 1.0 / (s - zj); }) / (I * pi);
}

cplx modified_connection(cplx cj, cplx zj, const TraceInputs& in) {
    if (std::abs(std::abs(zj) - 1.0) > 1e-8 || !(zj.imag() > 0.0))
        throw DomainError("modified connection needs z_j on the upper unit circle");
    return cj * std::exp(modified_connection_exponent(zj, in));
}

std::vector<int> faster_set(int j, const std::vector<cplx>& zs) {
    std::vector<int> out;
    for (int k = 0; k < static_cast<int>(zs.size()); ++k)
        if (k != j && zs[k].real() > zs.at(j).real() + 1e-12) out.push_back(k);
    return out;
}

double phase_shift_xj(int j, const std::vector<cplx>& zs, const std::vector<cplx>& cs,
                      const std::vector<int>& delta, const TraceInputs& in) {
    const cplx zj = zs.at(j);
    if (std::abs(std::abs(zj) - 1.0) > 1e-8 || !(zj.imag() > 0.0))
        throw DomainError("phase shift needs z_j on the upper unit circle");
    const double cabs = std::abs(cs.at(j));
    if (cabs == 0.0) throw DomainError("phase shift is undefined for c_j = 0");
    const double im = zj.imag();
    double logsum = std::log(cabs / im);
    for (int k : delta) {
        if (k == j) continue;
        // the Δ factor enters squared, through T(z_j)²
        logsum += 2.0 * std::log(std::abs(partition_factor(zj, zs.at(k))));
    }
    if (!in.is_reflectionless()) {
        const double integral =
            in.integrate([zj](double s) { return cplx{1.0 / std::norm(s - zj), 0.0}; }, {zj}).real();
        logsum -= im / pi * integral;
    }
    return logsum / (2.0 * im);
}

double phase_shift_xj(int j, const std::vector<cplx>& zs, const std::vector<cplx>& cs,
                      const TraceInputs& in) {
    return phase_shift_xj(j, zs, cs, faster_set(j, zs), in);
}

AsymptoticSpectralData asymptotic_spectral_data(const std::vector<cplx>& zs,
                                                const std::vector<cplx>& cs, double xi,
                                                const TraceInputs& in) {
    if (zs.size() != cs.size()) throw ConfigError("spectrum and norming constants differ in length");
    AsymptoticSpectralData out;
    out.partition = partition_spectrum(zs, xi);
    out.T_infinity = T_infinity(out.partition, in);
    for (int j = 0; j < static_cast<int>(zs.size()); ++j) {
        SolitonRecord rec;
        rec.z = zs[j];
        rec.c = cs[j];
        rec.c_tilde = modified_connection(cs[j], zs[j], in);
        rec.x_shift = phase_shift_xj(j, zs, cs, in);
        const bool in_delta =
            std::find(out.partition.delta.begin(), out.partition.delta.end(), j) != out.partition.delta.end();
        rec.label = in_delta ? "delta" : "nabla";
        if (out.partition.lambda && *out.partition.lambda == j) rec.label += "+lambda";
        out.solitons.push_back(rec);
    }
    return out;
}

}  // namespace mkdv
