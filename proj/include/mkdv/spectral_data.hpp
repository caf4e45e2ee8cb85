#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mkdv/common.hpp"
#include "mkdv/direct_scattering.hpp"
#include "mkdv/uniformization.hpp"

namespace mkdv {

struct QuadratureSpec {
    double rel_tol = 1e-12;
    double abs_tol = 1e-15;
    int max_depth = 18;
    /// Smallest admissible distance of an evaluation point from the real axis.
    double boundary_offset = 1e-6;
};

/// The weight L(s) = log(1−|r(s)|²) together with the discrete spectrum.
class TraceInputs {
public:
    TraceInputs() = default;

    static TraceInputs from_scattering(const ScatteringData& sd, const QuadratureSpec& q = {});
    static TraceInputs reflectionless(std::vector<cplx> zeros, const QuadratureSpec& q = {});

    /// L(s) for any real s ≠ 0.
    double log_weight(double s) const;
    bool is_reflectionless() const { return !table_; }
    const std::vector<cplx>& zeros() const { return zeros_; }
    const QuadratureSpec& quadrature() const { return quad_; }
    double z_max() const;

    /// ∫_ℝ L(s) f(s) ds by adaptive Gauss–Legendre; hot lists points near which f varies fast.
    cplx integrate(const std::function<cplx(double)>& f, const std::vector<cplx>& hot = {}) const;
    /// Same integral by tanh–sinh rules, used as an independent check.
    cplx integrate_tanh_sinh(const std::function<cplx(double)>& f) const;

    double l1_norm() const;

private:
    struct Table;
    std::shared_ptr<const Table> table_;
    std::vector<cplx> zeros_;
    QuadratureSpec quad_;
    double log_weight_half(double s) const;
    cplx integrate_half(const std::function<cplx(double)>& folded,
                        const std::vector<double>& breaks) const;
};

cplx blaschke_factor(cplx z, cplx zn);
cplx partition_factor(cplx z, cplx zk);

/// ∫_ℝ L(s)/(s−z) ds for Im z ≥ the boundary offset.
cplx cauchy_log_integral(cplx z, const TraceInputs& in);

cplx trace_formula_a(cplx z, const TraceInputs& in);

cplx T_function(cplx z, const SpectrumPartition& part, const TraceInputs& in);
cplx T_function(cplx z, double xi, const TraceInputs& in);
double T_infinity(const SpectrumPartition& part, const TraceInputs& in);
/// Boundary value of T on the real axis from above (side=+1) or below (side=−1).
cplx T_boundary(double s, int side, const SpectrumPartition& part, const TraceInputs& in);
/// Coefficient of −1/z in T/T(∞): Σ_Δ 4i Im z_k − (1/2πi)∫L ds.
cplx T_expansion_coefficient(const SpectrumPartition& part, const TraceInputs& in);

cplx modified_connection_exponent(cplx zj, const TraceInputs& in);
cplx modified_connection_exponent_tanh_sinh(cplx zj, const TraceInputs& in);
cplx modified_connection(cplx cj, cplx zj, const TraceInputs& in);

/// Indices whose real part exceeds that of soliton j (the Δ set on its own ray).
std::vector<int> faster_set(int j, const std::vector<cplx>& zs);

double phase_shift_xj(int j, const std::vector<cplx>& zs, const std::vector<cplx>& cs,
                      const std::vector<int>& delta, const TraceInputs& in);
double phase_shift_xj(int j, const std::vector<cplx>& zs, const std::vector<cplx>& cs,
                      const TraceInputs& in);

struct SolitonRecord {
    cplx z;
    cplx c;
    cplx c_tilde;
    double x_shift = 0.0;
    std::string label;
};

struct AsymptoticSpectralData {
    std::vector<SolitonRecord> solitons;
    SpectrumPartition partition;
    double T_infinity = -1.0;
};

AsymptoticSpectralData asymptotic_spectral_data(const std::vector<cplx>& zs,
                                                const std::vector<cplx>& cs, double xi,
                                                const TraceInputs& in);

}  // namespace mkdv
