#include "mkdv/uniformization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mkdv {

namespace {

void require_nonzero(cplx z) {
    if (z == cplx{0.0, 0.0}) throw DomainError("uniformization variable z must be nonzero");
}

}  // namespace

std::string to_string(PhaseClass c) {
    switch (c) {
        case PhaseClass::NoRealPhasePoints: return "NoRealPhasePoints";
        case PhaseClass::FourRealAxisPoints: return "FourRealAxisPoints";
        case PhaseClass::ImaginaryAxisPoints: return "ImaginaryAxisPoints";
    }
    return "unknown";
}

cplx lambda(cplx z) {
    require_nonzero(z);
    return 0.5 * (z + 1.0 / z);
}

cplx zeta(cplx z) {
    require_nonzero(z);
    return 0.5 * (z - 1.0 / z);
}

cplx theta(cplx z, const PhaseParams& p) {
    const cplx l = lambda(z);
    return zeta(z) * (p.xi + 4.0 * l * l + 2.0);
}

cplx theta_prime(cplx z, const PhaseParams& p) {
    require_nonzero(z);
    const cplx z2 = z * z;
    return 1.5 * z2 + (p.xi + 3.0) / (2.0 * z2) + 1.5 / (z2 * z2) + 0.5 * (p.xi + 3.0);
}

cplx theta_prime_factored(cplx z, const PhaseParams& p) {
    require_nonzero(z);
    const cplx z2 = z * z;
    return 0.5 * (3.0 * (z2 + 1.0 / (z2 * z2)) + (p.xi + 3.0) * (1.0 / z2 + 1.0));
}

PhaseClass classify_phase_points(double xi) {
    if (!std::isfinite(xi)) throw DomainError("xi must be finite");
    if (xi == -6.0 || xi == -2.0)
        throw DomainError("degenerate threshold xi=" + std::to_string(xi));
    if (xi < -6.0) return PhaseClass::FourRealAxisPoints;
    if (xi < -2.0) return PhaseClass::NoRealPhasePoints;
    return PhaseClass::ImaginaryAxisPoints;
}

bool in_extended_no_real_range(double xi) { return xi > -6.0 && xi < 6.0; }

std::vector<cplx> stationary_points(double xi) {
    // 2zθ′ = 3s³ + (ξ−6)s with s = z + 1/z.
    std::vector<cplx> out{I, -I};
    const cplx s = std::sqrt(cplx{2.0 - xi / 3.0, 0.0});
    for (cplx sv : {s, -s}) {
        const cplx d = std::sqrt(sv * sv - 4.0);
        out.push_back(0.5 * (sv + d));
        out.push_back(0.5 * (sv - d));
    }
    return out;
}

double re_2itheta_on_circle(double omega, const PhaseParams& p) {
    if (!(p.t > 0.0)) throw DomainError("t must be positive");
    const double c = std::cos(omega);
    return -2.0 * p.t * std::sin(omega) * (p.xi + 2.0 + 4.0 * c * c);
}

double xi0(double xi) {
    if (!(xi > -6.0 && xi < -2.0)) throw DomainError("xi0 requires -6 < xi < -2");
    return std::sqrt(-(xi + 2.0) / 4.0);
}

double separation_bound(const std::vector<cplx>& spectrum) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        m = std::min(m, spectrum[i].imag());
        for (std::size_t j = i + 1; j < spectrum.size(); ++j)
            m = std::min(m, std::abs(spectrum[i].real() - spectrum[j].real()));
    }
    return 0.5 * m;
}

double default_rho(const std::vector<cplx>& spectrum) {
    if (spectrum.empty()) return 0.1;
    return 0.45 * separation_bound(spectrum);
}

SpectrumPartition partition_spectrum(const std::vector<cplx>& spectrum, double xi,
                                     std::optional<double> rho) {
    for (const cplx& z : spectrum) {
        if (std::abs(std::abs(z) - 1.0) > 1e-8 || z.real() < 0.0 || z.imag() <= 0.0)
            throw DomainError("spectrum points must lie on the first-quadrant unit arc");
    }
    SpectrumPartition part;
    part.xi = xi;
    part.xi0 = xi0(xi);
    part.rho = rho ? *rho : default_rho(spectrum);
    if (!(part.rho > 0.0)) throw ConfigError("rho must be positive");
    if (!spectrum.empty() && part.rho > separation_bound(spectrum))
        throw ConfigError("rho exceeds the separation bound " +
                          std::to_string(separation_bound(spectrum)));
    for (int k = 0; k < static_cast<int>(spectrum.size()); ++k) {
        const double re = spectrum[k].real();
        const double gap = re - part.xi0;
        if (gap > 1e-12)
            part.delta.push_back(k);
        else
            part.nabla.push_back(k);
        if (std::abs(gap) < part.rho || std::abs(gap) <= 1e-12) {
            if (part.lambda) throw ConfigError("more than one spectrum point within rho of xi0");
            part.lambda = k;
        }
    }
    return part;
}

double decay_sector_angle(double xi, double theta0) {
    if (!(xi > -6.0 && xi < -2.0)) throw DomainError("decay bound requires -6 < xi < -2");
    double phi = theta0;
    const double arg = (-4.0 - 6.0 * xi - std::abs(xi + 4.0)) / 12.0;
    if (std::abs(arg) <= 1.0) phi = std::min(phi, 0.5 * std::acos(arg));
    // keep the sector clear of the stationary points on the unit circle
    const double ws = std::acos(std::sqrt(2.0 - xi / 3.0) / 2.0);
    return std::min(phi, 0.5 * ws);
}

DecayBound phase_decay_bound_check(cplx z, const PhaseParams& p, double theta0) {
    if (!(p.t > 0.0)) throw DomainError("t must be positive");
    require_nonzero(z);
    const double phi = decay_sector_angle(p.xi, theta0);
    const double w = std::arg(z);
    const double aw = std::abs(w);
    const double dist = std::min(aw, pi - aw);
    if (dist > phi + 1e-15) throw DomainError("z lies outside the decay sectors");
    const double F = std::abs(z) + 1.0 / std::abs(z);
    DecayBound b;
    b.lhs = (2.0 * I * p.t * theta(z, p)).real();
    const double mag = F * F * p.t * std::abs(std::sin(w)) * (2.0 - std::abs(p.xi + 4.0)) / 6.0;
    b.upper = w >= 0.0;
    b.rhs = b.upper ? -mag : mag;
    return b;
}

}  // namespace mkdv
