#include "doctest.h"

#include "mkdv/direct_scattering.hpp"
#include "mkdv/soliton_engine.hpp"
#include "oracles.hpp"

using namespace mkdv;

namespace {

double perturbed(double x) { return std::tanh(x) + 0.1 * oracle::sech2(x); }

const PotentialSample& kink() {
    static const PotentialSample p =
        PotentialSample::from_function([](double x) { return std::tanh(x); }, -30.0, 30.0, 4001);
    return p;
}

const PotentialSample& bumped() {
    static const PotentialSample p = PotentialSample::from_function(perturbed, -30.0, 30.0, 4001);
    return p;
}

}  // namespace

TEST_CASE("potential sample validation") {
    CHECK_THROWS_AS(PotentialSample({0.0, 1.0}, {-1.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(PotentialSample({0.0, 1.0, 3.0}, {-1.0, 0.0, 1.0}), ConfigError);
    const PotentialSample slow = PotentialSample::from_function([](double x) { return std::tanh(x / 8.0); }, -20, 20, 401);
    CHECK_THROWS(slow.require_decayed(1e-6));
    CHECK_THROWS(jost_columns(2.0, slow, Side::Plus));
}

TEST_CASE("Jost columns on an exact background are the background matrix") {
    const PotentialSample plus = PotentialSample::from_function([](double) { return 1.0; }, -10, 10, 201, 1.0, 1.0);
    const JostColumns j = jost_columns(2.0, plus, Side::Plus);
    const Mat2 Y = background_matrix(2.0, 1.0);
    for (std::size_t i = 0; i < j.x.size(); i += 50) {
        CHECK(std::abs(j.mu1[i](0) - Y(0, 0)) < 1e-12);
        CHECK(std::abs(j.mu1[i](1) - Y(1, 0)) < 1e-12);
        CHECK(std::abs(j.mu2[i](0) - Y(0, 1)) < 1e-12);
        CHECK(std::abs(j.mu2[i](1) - Y(1, 1)) < 1e-12);
    }
}

TEST_CASE("Jost determinant identity") {
    for (cplx z : {cplx(0.0, 2.0), cplx(1.7, 0.0), cplx(-0.6, 0.0)}) {
        for (Side side : {Side::Plus, Side::Minus}) {
            const JostColumns j = jost_columns(z, kink(), side);
            double worst = 0.0;
            for (std::size_t i = 0; i < j.x.size(); i += 97) {
                const Vec2 a = j.mu1[i], b = j.mu2[i];
                // off the real axis one column grows exponentially, so compare relative to the column sizes
                const double scale = std::max(1.0, a.norm() * b.norm());
                worst = std::max(worst, std::abs(a(0) * b(1) - a(1) * b(0) - (1.0 - 1.0 / (z * z))) / scale);
            }
            CHECK(worst < 1e-7);
        }
    }
}

TEST_CASE("Jost columns against the fixed-step oracle") {
    const cplx z(0.5, 0.5);
    const auto f = [](double x) { return std::tanh(x); };
    const JostAtPoint j = jost_at(z, kink(), 0.0, true);
    const auto m1 = oracle::jost_column(z, f, 1, 1.0, -30.0, 30.0, 0.0, 60000);
    const auto m2 = oracle::jost_column(z, f, 2, -1.0, -30.0, 30.0, 0.0, 60000);
    CHECK(std::abs(j.mu1p(0) - m1[0]) < 1e-7);
    CHECK(std::abs(j.mu1p(1) - m1[1]) < 1e-7);
    CHECK(std::abs(j.mu2m(0) - m2[0]) < 1e-7);
    CHECK(std::abs(j.mu2m(1) - m2[1]) < 1e-7);
}

TEST_CASE("scattering coefficients") {
    SUBCASE("exact background") {
        const PotentialSample bg = PotentialSample::from_function([](double) { return 1.0; }, -10, 10, 201, 1.0, 1.0);
        for (double z : {0.4, 2.0, -3.0}) {
            const auto sc = scattering_coefficients(z, bg);
            CHECK(std::abs(sc.a - 1.0) < 1e-10);
            CHECK(std::abs(sc.b) < 1e-10);
        }
        CHECK(find_discrete_spectrum(bg).empty());
    }
    SUBCASE("kink is reflectionless and unitary") {
        double unit = 0.0, bmax = 0.0;
        for (int k = 0; k < 50; ++k) {
            double z = std::pow(10.0, -1.0 + 2.0 * (k + 0.5) / 50.0);
            if (std::abs(z - 1.0) < 1e-2) z *= 1.05;
            if (k % 2) z = -z;
            const auto sc = scattering_coefficients(z, kink());
            unit = std::max(unit, std::abs(std::norm(sc.a) - std::norm(sc.b) - 1.0));
            bmax = std::max(bmax, std::abs(sc.b));
        }
        CHECK(unit < 1e-7);
        CHECK(bmax < 1e-5);
    }
    SUBCASE("pole points are rejected") {
        CHECK_THROWS(scattering_coefficients(1.0, kink()));
        CHECK_THROWS(scattering_coefficients(-1.0, kink()));
        CHECK_THROWS(scattering_coefficients(0.0, kink()));
    }
    SUBCASE("a against the fixed-step oracle") {
        for (cplx z : {cplx(2.0, 0.0), cplx(0.3, 0.8), cplx(-1.5, 0.4)}) {
            const cplx ref = oracle::a_coefficient(z, perturbed, 30.0, 60000);
            CHECK(std::abs(a_coefficient(z, bumped()) - ref) < 1e-8 * std::abs(ref));
        }
    }
}

TEST_CASE("large z asymptotics of a") {
    const double integral = oracle::trapezoid([](double x) { return perturbed(x) * perturbed(x) - 1.0; }, -30, 30, 60000);
    const cplx z = 50.0;
    const cplx lhs = z * (a_coefficient(z, bumped()) - 1.0);
    CHECK(std::abs(lhs - I * integral) < 5e-2 * std::abs(integral));
}

TEST_CASE("reflection coefficient") {
    double rmax = 0.0;
    for (double z : {-7.0, -1.3, -0.5, 0.01, 0.2, 0.9, 1.1, 4.0}) {
        const cplx r = reflection(z, bumped());
        CHECK(std::abs(r) < 1.0);
        CHECK(std::abs(reflection(1.0 / z, bumped()) + std::conj(r)) < 1e-8);
        rmax = std::max(rmax, std::abs(reflection(z, kink())));
    }
    CHECK(rmax < 1e-5);
    CHECK(std::abs(reflection(1.0, bumped()) + I) < 1e-6);
    CHECK(std::abs(reflection(-1.0, bumped()) - I) < 1e-6);
}

TEST_CASE("discrete spectrum and norming constants") {
    SUBCASE("kink") {
        const auto zs = find_discrete_spectrum(kink());
        REQUIRE(zs.size() == 1);
        CHECK(std::abs(zs[0] - I) < 1e-6);
        const auto cc = connection_coefficients(zs[0], kink());
        CHECK(std::abs(cc.gamma.imag()) < 1e-8);
        CHECK(std::abs(cc.c - cc.c_alt) < 1e-5);
        CHECK(std::abs(std::abs(cc.c) - 2.0) < 1e-5);
    }
    SUBCASE("two-soliton round trip") {
        const SolitonConfig cfg = SolitonConfig::from_polar({oracle::pi / 3, oracle::pi / 2}, {1.5, 0.7});
        const PotentialSample pot = PotentialSample::from_function(
            [&](double x) { return exact_nsoliton(cfg, x, 0.0); }, -30.0, 30.0, 4001);
        const ScatteringData sd = compute_scattering_data(pot);
        REQUIRE(sd.discrete.size() == 2);
        for (const DiscreteEigen& d : sd.discrete) {
            const auto& sols = cfg.solitons();
            const auto it = std::min_element(sols.begin(), sols.end(), [&](const Soliton& a, const Soliton& b) {
                return std::abs(a.z - d.z) < std::abs(b.z - d.z);
            });
            CHECK(std::abs(it->z - d.z) < 1e-6);
            CHECK(std::abs(it->c - d.c) < 1e-5);
        }
        CHECK(sd.max_abs_r() < 1e-5);
    }
}

TEST_CASE("scattering matrix symmetries") {
    Mat2 s2;
    s2 << 0, -I, I, 0;
    for (double z : {-3.0, -0.7, 0.45, 2.2}) {
        const Mat2 S = scattering_matrix(z, bumped());
        CHECK((S - scattering_matrix(-z, bumped()).conjugate()).cwiseAbs().maxCoeff() < 1e-6);
        CHECK((S + s2 * scattering_matrix(1.0 / z, bumped()) * s2).cwiseAbs().maxCoeff() < 1e-6);
        CHECK(std::abs(S(0, 0)) >= 1.0 - 1e-12);
    }
}
