#include "doctest.h"

#include "mkdv/direct_scattering.hpp"
#include "mkdv/spectral_data.hpp"
#include "oracles.hpp"

using namespace mkdv;

namespace {

const ScatteringData& bumped_data() {
    static const ScatteringData sd = compute_scattering_data(PotentialSample::from_function(
        [](double x) { return std::tanh(x) + 0.1 * oracle::sech2(x); }, -30.0, 30.0, 4001));
    return sd;
}

}  // namespace

TEST_CASE("trace formula for a single reflectionless eigenvalue") {
    const TraceInputs in = TraceInputs::reflectionless({I});
    for (cplx z : {cplx(0.3, 0.2), cplx(-2.0, 1.0), cplx(0.0, 5.0)})
        CHECK(std::abs(trace_formula_a(z, in) - (z - I) / (z + I)) < 1e-13);
    CHECK_THROWS(trace_formula_a(cplx(1.5, 0.0), in));
}

TEST_CASE("trace formula matches the Wronskian for a radiating potential") {
    const TraceInputs in = TraceInputs::from_scattering(bumped_data());
    const PotentialSample pot = PotentialSample::from_function(
        [](double x) { return std::tanh(x) + 0.1 * oracle::sech2(x); }, -30.0, 30.0, 4001);
    for (cplx z : {cplx(0.4, 0.3), cplx(-1.2, 0.6), cplx(0.0, 2.5), cplx(3.0, 0.1)}) {
        const cplx w = a_coefficient(z, pot);
        CHECK(std::abs(trace_formula_a(z, in) - w) < 1e-6 * std::abs(w));
    }
    CHECK(in.l1_norm() > 0.0);
}

TEST_CASE("T function") {
    SUBCASE("empty product gives the constant -1") {
        const TraceInputs in = TraceInputs::reflectionless({I});
        for (cplx z : {cplx(0.2, 0.4), cplx(-3.0, 1.0)}) CHECK(std::abs(T_function(z, -4.0, in) + 1.0) < 1e-14);
    }
    SUBCASE("unit modulus at infinity and conjugation symmetry") {
        const TraceInputs in = TraceInputs::from_scattering(bumped_data());
        const auto part = partition_spectrum(in.zeros(), -4.0);
        CHECK(std::abs(std::abs(T_infinity(part, in)) - 1.0) < 1e-10);
        const cplx z(0.7, 0.5);
        const cplx t1 = T_function(z, part, in);
        CHECK(std::abs(t1 * std::conj(T_function(std::conj(1.0 / z), part, in))) > 0.0);
        CHECK_THROWS(T_function(cplx(0.5, 0.0), part, in));
    }
}

TEST_CASE("modified connection coefficients") {
    const TraceInputs free = TraceInputs::reflectionless({std::polar(1.0, 1.0)});
    const cplx c = -std::polar(1.0, 1.0) * 1.7;
    CHECK(std::abs(modified_connection(c, std::polar(1.0, 1.0), free) - c) < 1e-14);

    const TraceInputs in = TraceInputs::from_scattering(bumped_data());
    const cplx zj = std::polar(1.0, 1.2);
    const cplx e = modified_connection_exponent(zj, in);
    CHECK(std::abs(e.imag()) < 1e-8);
    CHECK(std::abs(e - modified_connection_exponent_tanh_sinh(zj, in)) < 1e-8);
    const cplx mc = modified_connection(c, zj, in);
    CHECK(std::abs(std::arg(mc) - std::arg(c)) < 1e-8);
}

TEST_CASE("phase shifts") {
    const TraceInputs in = TraceInputs::reflectionless({I});
    CHECK(std::abs(phase_shift_xj(0, {I}, {I}, in)) < 1e-14);
    CHECK(phase_shift_xj(0, {I}, {I * std::exp(2.0)}, in) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS(phase_shift_xj(0, {I}, {0.0}, in));

    const std::vector<cplx> zs = {std::polar(1.0, 0.6), std::polar(1.0, 1.3)};
    const TraceInputs in2 = TraceInputs::reflectionless(zs);
    std::vector<cplx> cs = {-zs[0] * 1.3, -zs[1] * 0.4};
    const double x0 = phase_shift_xj(1, zs, cs, in2);
    const double d = 0.37;
    cs[1] *= std::exp(2.0 * zs[1].imag() * d);
    CHECK(std::abs(phase_shift_xj(1, zs, cs, in2) - x0 - d) < 1e-10);
    CHECK(faster_set(1, zs) == std::vector<int>{0});
    CHECK(faster_set(0, zs).empty());
}

TEST_CASE("asymptotic spectral data records") {
    const std::vector<cplx> zs = {std::polar(1.0, 0.5), std::polar(1.0, 1.2)};
    const std::vector<cplx> cs = {-zs[0], -zs[1] * 2.0};
    const auto asd = asymptotic_spectral_data(zs, cs, -4.0, TraceInputs::from_scattering(bumped_data()));
    CHECK(asd.solitons.size() == 2);
    CHECK(std::abs(std::abs(asd.T_infinity) - 1.0) < 1e-10);
    for (const SolitonRecord& r : asd.solitons) CHECK(std::abs(std::arg(r.c_tilde) - std::arg(r.c)) < 1e-8);
}
