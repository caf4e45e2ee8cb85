#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "mkdv/common.hpp"
#include "mkdv/potential.hpp"

namespace mkdv {

using Vec2 = Eigen::Vector2cd;
using Mat2 = Eigen::Matrix2cd;

enum class Side { Plus, Minus };

struct ScatteringOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double decay_threshold = 1e-6;
    /// Below this |z| the reflection coefficient is taken from its value at 1/z.
    double z_min = 0.02;
    int scan_points = 2048;
    double simplicity_tol = 1e-6;
};

Mat2 background_matrix(cplx z, double bv);

/// Columns μ₁, μ₂ of the normalized Jost matrix on the potential grid.
struct JostColumns {
    cplx z;
    Side side = Side::Plus;
    std::vector<double> x;
    std::vector<Vec2> mu1;
    std::vector<Vec2> mu2;

    Vec2 psi1(std::size_t i) const;
    Vec2 psi2(std::size_t i) const;
};

JostColumns jost_columns(cplx z, const PotentialSample& pot, Side side,
                         const ScatteringOptions& opt = {});

/// Jost columns of both families at a single matching point x0.
struct JostAtPoint {
    double x0 = 0.0;
    Vec2 mu1p, mu2p, mu1m, mu2m;
};

JostAtPoint jost_at(cplx z, const PotentialSample& pot, double x0, bool need_all,
                    const ScatteringOptions& opt = {});

double matching_point(const PotentialSample& pot);

/// det[ψ₁⁺, ψ₂⁻]; smooth on the closed upper half plane including z = ±1.
cplx wronskian_a(cplx z, const PotentialSample& pot, const ScatteringOptions& opt = {});

struct ScatteringCoefficients {
    cplx a;
    cplx b;
};

ScatteringCoefficients scattering_coefficients(cplx z, const PotentialSample& pot,
                                               const ScatteringOptions& opt = {});

cplx a_coefficient(cplx z, const PotentialSample& pot, const ScatteringOptions& opt = {});

/// ½ det[ψ₁⁺(±1), ψ₂⁻(±1)] for sign = ±1.
cplx a_pm(int sign, const PotentialSample& pot, const ScatteringOptions& opt = {});

cplx reflection(double z, const PotentialSample& pot, const ScatteringOptions& opt = {});

/// Scattering matrix S with ψ⁺ = ψ⁻ S at real z.
Mat2 scattering_matrix(double z, const PotentialSample& pot, const ScatteringOptions& opt = {});

std::vector<cplx> find_discrete_spectrum(const PotentialSample& pot,
                                         const ScatteringOptions& opt = {});

int winding_number(cplx z, double radius, const PotentialSample& pot,
                   const ScatteringOptions& opt = {}, int points = 32);

cplx a_derivative(cplx z, const PotentialSample& pot, const ScatteringOptions& opt = {});

struct ConnectionCoefficients {
    cplx gamma;
    cplx a_prime;
    cplx c;
    /// −2z/∫|ψ₂⁻|²dx
    cplx c_alt;
    /// 2z/∫|ψ₂⁺|²dx as printed; divergent integrals give 0
    cplx c_printed_alt;
};

ConnectionCoefficients connection_coefficients(cplx zk, const PotentialSample& pot,
                                               const ScatteringOptions& opt = {});

struct DiscreteEigen {
    cplx z;
    cplx c;
    cplx gamma;
};

/// Half-line grid s = 1 + A(e^u − 1)², uniform in u: clustered at s = 1 and geometric far out.
struct ScatteringGrid {
    double z_max = 60.0;
    double scale = 0.01;
    int points = 513;

    double u_of(double s) const;
    double s_of(double u) const;
    double u_step() const;
};

std::vector<double> half_line_grid(const ScatteringGrid& g);

struct ScatteringData {
    double left_bv = -1.0;
    double right_bv = 1.0;
    ScatteringGrid grid;
    /// Samples on [1, z_max]: abscissa, r, and det[ψ₁⁺,ψ₂⁻].
    std::vector<double> s;
    std::vector<cplx> r;
    std::vector<cplx> wronskian;
    std::vector<DiscreteEigen> discrete;
    cplx a_plus;
    cplx a_minus;

    /// All sample points on ℝ∖{0} filled by the real-line symmetries, sorted.
    std::vector<std::pair<double, cplx>> r_samples() const;
    double max_abs_r() const;
};

ScatteringData compute_scattering_data(const PotentialSample& pot, const ScatteringGrid& g = {},
                                       const ScatteringOptions& opt = {});

}  // namespace mkdv
