#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mkdv/common.hpp"

namespace mkdv {

struct PhaseParams {
    double xi = 0.0;
    double t = 1.0;
};

enum class PhaseClass { NoRealPhasePoints, FourRealAxisPoints, ImaginaryAxisPoints };

std::string to_string(PhaseClass c);

cplx lambda(cplx z);
cplx zeta(cplx z);

cplx theta(cplx z, const PhaseParams& p);
cplx theta_prime(cplx z, const PhaseParams& p);
/// Same derivative written as ½{3(z²+z⁻⁴)+(ξ+3)(z⁻²+1)}.
cplx theta_prime_factored(cplx z, const PhaseParams& p);

PhaseClass classify_phase_points(double xi);

/// True on (−6,6), the wider range on which no stationary point lies on the real axis.
bool in_extended_no_real_range(double xi);

/// The six zeros of θ′, from the closed form in s = z + 1/z.
std::vector<cplx> stationary_points(double xi);

double re_2itheta_on_circle(double omega, const PhaseParams& p);

double xi0(double xi);

struct SpectrumPartition {
    double xi = 0.0;
    double xi0 = 0.0;
    double rho = 0.0;
    std::vector<int> delta;
    std::vector<int> nabla;
    std::optional<int> lambda;
};

double separation_bound(const std::vector<cplx>& spectrum);
double default_rho(const std::vector<cplx>& spectrum);

SpectrumPartition partition_spectrum(const std::vector<cplx>& spectrum, double xi,
                                     std::optional<double> rho = std::nullopt);

struct DecayBound {
    double lhs = 0.0;
    double rhs = 0.0;
    bool upper = true;

    bool holds() const { return upper ? lhs <= rhs : lhs >= rhs; }
};

/// Half-opening angle of the sectors around the real axis on which the decay bound is asserted.
double decay_sector_angle(double xi, double theta0 = 0.1);

DecayBound phase_decay_bound_check(cplx z, const PhaseParams& p, double theta0 = 0.1);

}  // namespace mkdv
