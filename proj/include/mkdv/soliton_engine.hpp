#pragma once

#include <vector>

#include "mkdv/common.hpp"
#include "mkdv/direct_scattering.hpp"
#include "mkdv/spectral_data.hpp"

namespace mkdv {

struct Soliton {
    cplx z;
    cplx c;
};

/// Reflectionless data: eigenvalues on the upper unit arc with norming constants c = −z|c|.
class SolitonConfig {
public:
    SolitonConfig() = default;
    explicit SolitonConfig(std::vector<Soliton> solitons);

    /// Builds z = e^{i arg} and c = −z·|c|.
    static SolitonConfig from_polar(const std::vector<double>& arg_rad, const std::vector<double>& c_abs);

    const std::vector<Soliton>& solitons() const { return solitons_; }
    std::size_t size() const { return solitons_.size(); }
    std::vector<cplx> zeros() const;
    std::vector<cplx> norming() const;

private:
    std::vector<Soliton> solitons_;
};

cplx norming_phase(cplx z);

/// Projects numerically computed eigenvalues and norming constants onto the reflectionless parameter set.
SolitonConfig solitons_from_spectrum(const std::vector<DiscreteEigen>& discrete, double tol = 1e-5);

struct NSolitonValue {
    double q = -1.0;
    double imag = 0.0;
    double condition = 1.0;
};

NSolitonValue exact_nsoliton_full(const SolitonConfig& cfg, double x, double t);
double exact_nsoliton(const SolitonConfig& cfg, double x, double t);
std::vector<double> exact_nsoliton(const SolitonConfig& cfg, const std::vector<double>& x, double t,
                                   int threads = 1);

/// Solution matrix m(z; x, t) of the reflectionless problem.
Mat2 nsoliton_m(const SolitonConfig& cfg, double x, double t, cplx z);

enum class MLambdaBranch { Empty, NablaGeneric, KinkSigma1, Delta };

struct MLambdaState {
    MLambdaBranch branch = MLambdaBranch::Empty;
    cplx z_j0 = I;
    double varphi = 0.0;
    cplx alpha;
    cplx beta;
};

/// Fills alpha and beta, the residue of the first column at z_j0.
MLambdaState make_mlambda_state(MLambdaBranch branch, cplx z_j0, double varphi);

Mat2 m_lambda(cplx z, const MLambdaState& state);

enum class SolitonBranch { Nabla, Sigma1, Delta };

double soliton_phase(cplx zj, double x, double t, double xj);
double one_soliton(cplx zj, double x, double t, double xj, SolitonBranch branch);
/// Position of the extremum of one_soliton at time t.
double one_soliton_center(cplx zj, double t, double xj);

double soliton_velocity(cplx zj);

struct SuperpositionTerm {
    cplx z;
    double x_shift = 0.0;
    SolitonBranch branch = SolitonBranch::Nabla;
};

std::vector<SuperpositionTerm> superposition_terms(const SolitonConfig& cfg, double xi,
                                                   const TraceInputs& in);
double asymptotic_superposition(const SolitonConfig& cfg, const TraceInputs& in, double x, double t);

/// The superposition with phase shifts computed once, for evaluation on many (x, t).
class AsymptoticPredictor {
public:
    AsymptoticPredictor(const SolitonConfig& cfg, const TraceInputs& in);

    double operator()(double x, double t) const;
    std::vector<double> evaluate(const std::vector<double>& x, double t, int threads = 1) const;
    static bool in_region(double x, double t);
    const std::vector<SuperpositionTerm>& terms() const { return terms_; }

private:
    std::vector<SuperpositionTerm> terms_;
};

}  // namespace mkdv
