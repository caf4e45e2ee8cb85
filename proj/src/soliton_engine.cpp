#include "mkdv/soliton_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mkdv/parallel.hpp"
#include "mkdv/uniformization.hpp"

namespace mkdv {

namespace {

bool degenerate(cplx z) { return std::abs(z.real()) < 1e-10; }

/// One pole of the reduced system: residue constant = phase·e^{logmag}.
struct Pole {
    cplx z;
    double logmag;
    cplx phase;
};

struct Residues {
    std::vector<Vec2> R;
    double condition = 1.0;
};

using Block = Eigen::Matrix2d;

Block mul_block(cplx a) {
    Block b;
    b << a.real(), -a.imag(), a.imag(), a.real();
    return b;
}

Block conj_block(cplx a) {
    Block b;
    b << a.real(), a.imag(), a.imag(), -a.real();
    return b;
}

Residues solve_residues(const std::vector<Pole>& poles) {
    const int n = static_cast<int>(poles.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(4 * n, 4 * n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(4 * n);
    for (int k = 0; k < n; ++k) {
        const Pole& p = poles[k];
        cplx wR = 1.0, wC = 1.0;
        if (p.logmag > 0.0)
            wR = std::exp(-p.logmag) / p.phase;
        else
            wC = std::exp(p.logmag) * p.phase;
        const cplx rhs[2] = {wC * (-I / p.z), wC};
        for (int comp = 0; comp < 2; ++comp) {
            const int r = 4 * k + 2 * comp;
            A.block<2, 2>(r, r) += mul_block(wR);
            b(r) = rhs[comp].real();
            b(r + 1) = rhs[comp].imag();
        }
        for (int m = 0; m < n; ++m) {
            const cplx zm = poles[m].z;
            // σ₁ swaps components: row comp 0 couples to unknown comp 1 and vice versa
            const cplx a1 = wC / (p.z - std::conj(zm));
            A.block<2, 2>(4 * k, 4 * m + 2) -= conj_block(a1);
            A.block<2, 2>(4 * k + 2, 4 * m) -= conj_block(a1);
            if (!degenerate(zm)) {
                const cplx a2 = wC / (p.z + zm);
                A.block<2, 2>(4 * k, 4 * m + 2) += mul_block(a2);
                A.block<2, 2>(4 * k + 2, 4 * m) += mul_block(a2);
            }
        }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    Residues out;
    const double rc = lu.rcond();
    out.condition = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
    if (!(rc > 1e-15)) {
        std::ostringstream os;
        os << "residue system is singular (condition estimate " << out.condition << ")";
        throw NumericalError(os.str());
    }
    const Eigen::VectorXd sol = lu.solve(b);
    for (int k = 0; k < n; ++k)
        out.R.emplace_back(cplx{sol(4 * k), sol(4 * k + 1)}, cplx{sol(4 * k + 2), sol(4 * k + 3)});
    return out;
}

std::vector<Pole> poles_at(const SolitonConfig& cfg, double x, double t) {
    std::vector<Pole> poles;
    for (const Soliton& s : cfg.solitons()) {
        const double v = 4.0 * s.z.real() * s.z.real() + 2.0;
        const double ca = std::abs(s.c);
        poles.push_back({s.z, std::log(ca) + 2.0 * s.z.imag() * (x + v * t), s.c / ca});
    }
    return poles;
}

Mat2 assemble_m(const std::vector<Pole>& poles, const Residues& res, cplx z) {
    auto col1 = [&](cplx w) {
        Vec2 m(1.0, I / w);
        for (std::size_t k = 0; k < poles.size(); ++k) {
            const cplx p = poles[k].z;
            if (std::abs(w - p) < 1e-14) throw DomainError("m evaluated at a pole");
            m += res.R[k] / (w - p);
            if (!degenerate(p)) m -= res.R[k].conjugate() / (w + std::conj(p));
        }
        return m;
    };
    if (z == cplx{0.0, 0.0}) throw DomainError("m has a pole at z = 0");
    Mat2 out;
    out.col(0) = col1(z);
    const Vec2 c = col1(std::conj(z)).conjugate();
    out.col(1) = Vec2(c(1), c(0));
    return out;
}

NSolitonValue reconstruct(const std::vector<Pole>& poles, const Residues& res) {
    cplx sum = 0.0;
    for (std::size_t k = 0; k < poles.size(); ++k) {
        sum += res.R[k](1);
        if (!degenerate(poles[k].z)) sum -= std::conj(res.R[k](1));
    }
    const cplx q = -1.0 + I * sum;
    return {q.real(), q.imag(), res.condition};
}

}  // namespace

cplx norming_phase(cplx z) { return -z / std::abs(z); }

SolitonConfig::SolitonConfig(std::vector<Soliton> solitons) : solitons_(std::move(solitons)) {
    for (std::size_t i = 0; i < solitons_.size(); ++i) {
        Soliton& s = solitons_[i];
        if (std::abs(std::abs(s.z) - 1.0) > 1e-10 || s.z.real() < -1e-14 || !(s.z.imag() > 0.0))
            throw ConfigError("soliton eigenvalues must lie on the first-quadrant unit arc");
        if (degenerate(s.z)) s.z = I;
        if (!(std::abs(s.c) > 0.0) || !std::isfinite(std::abs(s.c)))
            throw ConfigError("norming constants must be nonzero and finite");
        if (std::abs(s.c / std::abs(s.c) - norming_phase(s.z)) > 1e-10)
            throw ConfigError("norming constant violates the phase law c = -z|c|");
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(solitons_[j].z - s.z) < 1e-10) throw ConfigError("soliton eigenvalues must be distinct");
    }
}

SolitonConfig SolitonConfig::from_polar(const std::vector<double>& arg_rad,
                                        const std::vector<double>& c_abs) {
    if (arg_rad.size() != c_abs.size()) throw ConfigError("soliton angle and modulus lists differ in length");
    std::vector<Soliton> s;
    for (std::size_t i = 0; i < arg_rad.size(); ++i) {
        cplx z = std::exp(I * arg_rad[i]);
        if (std::abs(arg_rad[i] - 0.5 * pi) < 1e-12) z = I;
        s.push_back({z, norming_phase(z) * c_abs[i]});
    }
    return SolitonConfig(std::move(s));
}

SolitonConfig solitons_from_spectrum(const std::vector<DiscreteEigen>& discrete, double tol) {
    std::vector<Soliton> out;
    for (const DiscreteEigen& d : discrete) {
        if (std::abs(std::abs(d.z) - 1.0) > tol) throw NumericalError("discrete eigenvalue is off the unit circle");
        cplx z = d.z / std::abs(d.z);
        if (std::abs(z.real()) < 1e-10) z = I;
        const cplx ph = norming_phase(z);
        if (std::abs(d.c / std::abs(d.c) - ph) > tol) throw NumericalError("norming constant violates c = -z|c|");
        out.push_back({z, ph * std::abs(d.c)});
    }
    return SolitonConfig(std::move(out));
}

std::vector<cplx> SolitonConfig::zeros() const {
    std::vector<cplx> out;
    for (const Soliton& s : solitons_) out.push_back(s.z);
    return out;
}

std::vector<cplx> SolitonConfig::norming() const {
    std::vector<cplx> out;
    for (const Soliton& s : solitons_) out.push_back(s.c);
    return out;
}

namespace {

NSolitonValue direct_value(const SolitonConfig& cfg, double x, double t) {
    const std::vector<Pole> poles = poles_at(cfg, x, t);
    return reconstruct(poles, solve_residues(poles));
}

}  // namespace

NSolitonValue exact_nsoliton_full(const SolitonConfig& cfg, double x, double t) {
    if (cfg.size() == 0) return {};
    constexpr double kMaxCondition = 1e9;
    try {
        const NSolitonValue v = direct_value(cfg, x, t);
        if (v.condition <= kMaxCondition) return v;
    } catch (const NumericalError&) {
    }
    // The residues blow up on isolated points where q itself stays smooth; interpolate across them.
    constexpr double h = 0.01;
    constexpr int offsets[6] = {-3, -2, -1, 1, 2, 3};
    NSolitonValue out{0.0, 0.0, 1.0};
    for (int i : offsets) {
        double w = 1.0;
        for (int j : offsets)
            if (j != i) w *= static_cast<double>(j) / static_cast<double>(j - i);
        const NSolitonValue v = direct_value(cfg, x + i * h, t);
        if (v.condition > kMaxCondition) throw NumericalError("residue system is singular near the evaluation point");
        out.q += w * v.q;
        out.imag += w * v.imag;
        out.condition = std::max(out.condition, v.condition);
    }
    return out;
}

double exact_nsoliton(const SolitonConfig& cfg, double x, double t) {
    return exact_nsoliton_full(cfg, x, t).q;
}

std::vector<double> exact_nsoliton(const SolitonConfig& cfg, const std::vector<double>& x, double t,
                                   int threads) {
    std::vector<double> out(x.size());
    parallel_for(x.size(), threads, [&](std::size_t i) { out[i] = exact_nsoliton(cfg, x[i], t); });
    return out;
}

Mat2 nsoliton_m(const SolitonConfig& cfg, double x, double t, cplx z) {
    const std::vector<Pole> poles = poles_at(cfg, x, t);
    if (poles.empty()) return assemble_m(poles, {}, z);
    return assemble_m(poles, solve_residues(poles), z);
}

MLambdaState make_mlambda_state(MLambdaBranch branch, cplx z_j0, double varphi) {
    MLambdaState st;
    st.branch = branch;
    st.z_j0 = z_j0;
    st.varphi = varphi;
    if (branch == MLambdaBranch::Empty) return st;
    if (std::abs(std::abs(z_j0) - 1.0) > 1e-10 || !(z_j0.imag() > 0.0) || z_j0.real() < -1e-14)
        throw ConfigError("z_j0 must lie on the first-quadrant unit arc");
    const bool kink = degenerate(z_j0);
    if ((branch == MLambdaBranch::KinkSigma1) != kink)
        throw ConfigError("the sigma1 branch is used exactly when z_j0 = i");
    if (kink) st.z_j0 = I;
    const double phi = branch == MLambdaBranch::Delta ? -varphi : varphi;
    const std::vector<Pole> poles{{st.z_j0, std::log(st.z_j0.imag()) + phi, norming_phase(st.z_j0)}};
    const Residues res = solve_residues(poles);
    st.alpha = res.R[0](0);
    st.beta = res.R[0](1);
    return st;
}

Mat2 m_lambda(cplx z, const MLambdaState& st) {
    if (st.branch == MLambdaBranch::Empty) return assemble_m({}, {}, z);
    const double phi = st.branch == MLambdaBranch::Delta ? -st.varphi : st.varphi;
    const std::vector<Pole> poles{{st.z_j0, std::log(st.z_j0.imag()) + phi, norming_phase(st.z_j0)}};
    Residues res;
    res.R.emplace_back(st.alpha, st.beta);
    return assemble_m(poles, res, z);
}

double soliton_velocity(cplx zj) {
    if (std::abs(std::abs(zj) - 1.0) > 1e-8) throw DomainError("velocity needs |z_j| = 1");
    return -(4.0 * zj.real() * zj.real() + 2.0);
}

double soliton_phase(cplx zj, double x, double t, double xj) {
    return 2.0 * zj.imag() * (x - soliton_velocity(zj) * t + xj);
}

double one_soliton(cplx zj, double x, double t, double xj, SolitonBranch branch) {
    if (std::abs(std::abs(zj) - 1.0) > 1e-8 || !(zj.imag() > 0.0))
        throw DomainError("one_soliton needs z_j on the upper unit circle");
    const bool kink = degenerate(zj);
    if ((branch == SolitonBranch::Sigma1) != kink)
        throw ConfigError("the sigma1 branch is used exactly when z_j = i");
    const double phi = soliton_phase(zj, x, t, xj);
    if (kink) {
        // −1 + 2/(1 + 2e^{−φ})
        return phi > 0.0 ? -1.0 + 2.0 / (1.0 + 2.0 * std::exp(-phi))
                         : -1.0 + 2.0 * std::exp(phi) / (std::exp(phi) + 2.0);
    }
    // −1 + 2sin²θ/(1 + e^{−φ} + ¼cos²θ e^{φ}), the Δ form reads the same in −φ_Δ
    const double s = zj.imag(), c = zj.real();
    const double e = std::exp(-std::abs(phi));
    const double den = phi > 0.0 ? e + e * e + 0.25 * c * c : e + 1.0 + 0.25 * c * c * e * e;
    return -1.0 + 2.0 * s * s * e / den;
}

double one_soliton_center(cplx zj, double t, double xj) {
    const double peak = degenerate(zj) ? std::log(2.0) : std::log(2.0 / zj.real());
    return peak / (2.0 * zj.imag()) + soliton_velocity(zj) * t - xj;
}

std::vector<SuperpositionTerm> superposition_terms(const SolitonConfig& cfg, double xi,
                                                   const TraceInputs& in) {
    std::vector<int> order(cfg.size());
    std::iota(order.begin(), order.end(), 0);
    const auto zs0 = cfg.zeros();
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return zs0[a].real() > zs0[b].real(); });
    std::vector<cplx> zs, cs;
    for (int k : order) {
        zs.push_back(cfg.solitons()[k].z);
        cs.push_back(cfg.solitons()[k].c);
    }
    const SpectrumPartition part = partition_spectrum(zs, xi);
    std::vector<SuperpositionTerm> terms;
    for (int j = 0; j < static_cast<int>(zs.size()); ++j) {
        SuperpositionTerm term;
        term.z = zs[j];
        term.x_shift = phase_shift_xj(j, zs, cs, in);
        if (degenerate(zs[j]))
            term.branch = SolitonBranch::Sigma1;
        else if (std::find(part.delta.begin(), part.delta.end(), j) != part.delta.end())
            term.branch = SolitonBranch::Delta;
        else
            term.branch = SolitonBranch::Nabla;
        terms.push_back(term);
    }
    return terms;
}

AsymptoticPredictor::AsymptoticPredictor(const SolitonConfig& cfg, const TraceInputs& in)
    : terms_(superposition_terms(cfg, -4.0, in)) {}

bool AsymptoticPredictor::in_region(double x, double t) {
    if (!(t > 0.0)) return false;
    const double xi = x / t;
    return xi > -6.0 && xi < -2.0;
}

double AsymptoticPredictor::operator()(double x, double t) const {
    if (!(t > 0.0)) throw DomainError("asymptotic superposition needs t > 0");
    const double xi = x / t;
    if (!(xi > -6.0 && xi < -2.0)) throw DomainError("x/t lies outside the solitonic region (-6,-2)");
    std::vector<cplx> zs;
    for (const SuperpositionTerm& term : terms_) zs.push_back(term.z);
    const SpectrumPartition part = partition_spectrum(zs, xi);
    double q = -1.0;
    for (std::size_t j = 0; j < terms_.size(); ++j) {
        SolitonBranch branch = SolitonBranch::Nabla;
        if (degenerate(terms_[j].z))
            branch = SolitonBranch::Sigma1;
        else if (std::find(part.delta.begin(), part.delta.end(), static_cast<int>(j)) != part.delta.end())
            branch = SolitonBranch::Delta;
        q += one_soliton(terms_[j].z, x, t, terms_[j].x_shift, branch) + 1.0;
    }
    return q;
}

std::vector<double> AsymptoticPredictor::evaluate(const std::vector<double>& x, double t, int threads) const {
    std::vector<double> out(x.size());
    parallel_for(x.size(), threads, [&](std::size_t i) { out[i] = (*this)(x[i], t); });
    return out;
}

double asymptotic_superposition(const SolitonConfig& cfg, const TraceInputs& in, double x, double t) {
    return AsymptoticPredictor(cfg, in)(x, t);
}

}  // namespace mkdv
