#include "doctest.h"

#include "mkdv/uniformization.hpp"
#include "oracles.hpp"

using namespace mkdv;

namespace {
bool near(cplx a, cplx b, double tol) { return std::abs(a - b) < tol; }
}  // namespace

TEST_CASE("lambda and zeta at fixed points") {
    CHECK(near(lambda(1.0), 1.0, 1e-15));
    CHECK(near(zeta(1.0), 0.0, 1e-15));
    CHECK(near(lambda(I), 0.0, 1e-15));
    CHECK(near(zeta(I), I, 1e-15));
    CHECK(near(lambda(2.0), 1.25, 1e-15));
    CHECK(near(zeta(2.0), 0.75, 1e-15));
    CHECK_THROWS_AS(lambda(0.0), DomainError);
    CHECK_THROWS_AS(zeta(0.0), DomainError);
}

TEST_CASE("theta values") {
    CHECK(near(theta(I, {-4.0, 1.0}), -2.0 * I, 1e-14));
    for (double xi : {-10.0, -4.0, 0.0, 3.0}) CHECK(near(theta(1.0, {xi, 1.0}), 0.0, 1e-14));
    CHECK_THROWS_AS(theta(0.0, {-4.0, 1.0}), DomainError);
}

TEST_CASE("theta on the circle matches the integral of theta_prime") {
    const PhaseParams p{-4.0, 1.0};
    // integrate θ′(e^{iω}) i e^{iω} dω from 0 to π/4 with Simpson's rule
    const int n = 2000;
    const double w1 = oracle::pi / 4;
    cplx acc = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double w = w1 * k / n;
        const cplx z = std::polar(1.0, w);
        const double wt = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        acc += wt * theta_prime(z, p) * I * z;
    }
    acc *= w1 / (3.0 * n);
    CHECK(near(theta(std::polar(1.0, w1), p), acc, 1e-10));
}

TEST_CASE("theta_prime agrees with finite differences and its factored form") {
    const PhaseParams p{-3.3, 2.0};
    for (cplx z : {cplx(0.7, 0.4), cplx(-1.3, 0.2), cplx(0.1, 2.0)}) {
        const double h = 1e-5;
        const cplx fd = (theta(z + h, p) - theta(z - h, p)) / (2.0 * h);
        CHECK(near(theta_prime(z, p), fd, 1e-7 * std::max(1.0, std::abs(fd))));
        CHECK(near(theta_prime(z, p), theta_prime_factored(z, p), 1e-12 * std::max(1.0, std::abs(fd))));
    }
}

TEST_CASE("no real stationary point at xi = -4") {
    int real_roots = 0;
    for (cplx r : oracle::theta_prime_roots(-4.0))
        if (std::abs(r.imag()) < 1e-9) ++real_roots;
    CHECK(real_roots == 0);
}

TEST_CASE("classification against the root oracle") {
    CHECK(classify_phase_points(-4.0) == PhaseClass::NoRealPhasePoints);
    CHECK(classify_phase_points(-10.0) == PhaseClass::FourRealAxisPoints);
    CHECK(classify_phase_points(0.0) == PhaseClass::ImaginaryAxisPoints);
    CHECK_THROWS(classify_phase_points(-6.0));
    CHECK_THROWS(classify_phase_points(-2.0));
    for (double xi : {-20.0, -8.0, -6.5, -5.9, -4.0, -2.1, -1.9, 0.5, 5.0, 9.0}) {
        int real = 0, imag = 0;
        for (cplx r : oracle::theta_prime_roots(xi)) {
            if (std::abs(r.imag()) < 1e-7) ++real;
            else if (std::abs(r.real()) < 1e-7) ++imag;
        }
        const PhaseClass c = classify_phase_points(xi);
        if (c == PhaseClass::FourRealAxisPoints) CHECK(real == 4);
        if (c == PhaseClass::NoRealPhasePoints) CHECK(real == 0);
        if (c == PhaseClass::ImaginaryAxisPoints) {
            CHECK(real == 0);
            CHECK(imag >= 2);
        }
        CHECK(in_extended_no_real_range(xi) == (std::abs(xi) < 6.0));
    }
}

TEST_CASE("stationary points are zeros of theta_prime") {
    for (double xi : {-9.0, -4.0, 1.0}) {
        const auto pts = stationary_points(xi);
        CHECK(pts.size() == 6);
        for (cplx z : pts) CHECK(std::abs(theta_prime(z, {xi, 1.0})) < 1e-9);
    }
}

TEST_CASE("sign of Re(2 i t theta) on the unit circle") {
    CHECK(re_2itheta_on_circle(oracle::pi / 2, {-4.0, 1.0}) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(std::abs(re_2itheta_on_circle(0.0, {-4.0, 1.0})) < 1e-15);
    CHECK(std::abs(re_2itheta_on_circle(oracle::pi / 4, {-4.0, 2.0})) < 1e-14);
    for (double w : {0.3, 1.1, 2.5}) {
        const PhaseParams p{-3.5, 1.7};
        CHECK(re_2itheta_on_circle(w, p) == doctest::Approx(std::real(2.0 * I * p.t * theta(std::polar(1.0, w), p))));
    }
}

TEST_CASE("xi0 values and domain") {
    CHECK(xi0(-4.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(xi0(-2.0001) == doctest::Approx(0.005).epsilon(1e-2));
    CHECK(xi0(-6.0 + 1e-4) == doctest::Approx(0.99999).epsilon(1e-5));
    CHECK_THROWS_AS(xi0(-2.0), DomainError);
    CHECK_THROWS_AS(xi0(-7.0), DomainError);
}

TEST_CASE("spectrum partition") {
    SUBCASE("single z = i") {
        const auto p = partition_spectrum({I}, -4.0);
        CHECK(p.nabla == std::vector<int>{0});
        CHECK(p.delta.empty());
        CHECK(!p.lambda);
    }
    SUBCASE("threshold eigenvalue") {
        const auto p = partition_spectrum({std::polar(1.0, oracle::pi / 4)}, -4.0);
        REQUIRE(p.lambda);
        CHECK(*p.lambda == 0);
    }
    SUBCASE("two eigenvalues") {
        const auto p = partition_spectrum({std::polar(1.0, oracle::pi / 6), std::polar(1.0, oracle::pi / 3)}, -4.0);
        CHECK(p.delta == std::vector<int>{0});
        CHECK(p.nabla == std::vector<int>{1});
    }
    SUBCASE("rho above the separation bound") {
        const std::vector<cplx> s = {std::polar(1.0, 1.0), std::polar(1.0, 1.1)};
        CHECK_THROWS_AS(partition_spectrum(s, -4.0, 10.0), ConfigError);
        CHECK(default_rho(s) < separation_bound(s));
    }
}

TEST_CASE("phase decay bound") {
    const auto real = phase_decay_bound_check(1.3, {-4.0, 1.0});
    CHECK(std::abs(real.lhs) < 1e-14);
    CHECK(std::abs(real.rhs) < 1e-14);
    CHECK(phase_decay_bound_check(std::polar(1.01, 0.01), {-4.0, 10.0}).holds());
    CHECK(phase_decay_bound_check(std::polar(0.99, 0.01), {-4.0, 10.0}).holds());
    CHECK_THROWS_AS(phase_decay_bound_check(std::polar(1.0, 1.2), {-4.0, 1.0}), DomainError);
}
