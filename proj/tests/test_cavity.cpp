#include <doctest.h>

#include <cmath>
#include <random>

#include "casimir/cavity.hpp"
#include "casimir/errors.hpp"

using namespace casimir;

namespace {
const Constants& pc = codata();
const double c = pc.c_light;

CavityConfig perfect_cavity(double L) {
    return {PerfectMirror{}, PerfectMirror{}, L};
}
}  // namespace

TEST_CASE("kappa on the imaginary axis") {
    CHECK(kappa_imaginary(0.0, 0.0) == 0.0);
    CHECK(kappa_imaginary(3e6, 4e6 * c) == doctest::Approx(5e6).epsilon(1e-14));
    CHECK(kappa_imaginary(7e5, 0.0) == 7e5);
}

TEST_CASE("kz on the real axis: propagating, evanescent, light cone") {
    const auto a = kz_real(3.0, 5.0 * c);
    CHECK(a.real() == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(a.imag() == 0.0);
    const auto b = kz_real(5.0, 3.0 * c);
    CHECK(b.real() == 0.0);
    CHECK(b.imag() == doctest::Approx(4.0).epsilon(1e-14));
    const auto d = kz_real(2.0, 2.0 * c);
    CHECK(std::abs(d) == doctest::Approx(0.0));
}

TEST_CASE("open loop: perfect mirrors at 2 kappa L = ln 2") {
    const double L = 1e-6;
    const double k = std::log(2.0) / (2.0 * L);
    const auto cav = perfect_cavity(L);
    CHECK(open_loop(cav, {Polarization::TE, k}, 0.0) ==
          doctest::Approx(0.5).epsilon(1e-14));
    CHECK(closed_loop(cav, {Polarization::TE, k}, 0.0) ==
          doctest::Approx(1.0).epsilon(1e-13));
    CHECK(phi(cav, {Polarization::TE, k}, 0.0) == doctest::Approx(k).epsilon(1e-13));
}

TEST_CASE("open loop vanishes with a vacuum mirror") {
    const CavityConfig cav{PerfectMirror{}, BulkMirror{VacuumModel{}}, 1e-6};
    CHECK(open_loop(cav, {Polarization::TE, 1e6}, 1e14) == doctest::Approx(0.0));
    CHECK(closed_loop(cav, {Polarization::TM, 1e6}, 1e14) == doctest::Approx(0.0));
}

TEST_CASE("closed loop is the resummed map of the open loop") {
    const CavityConfig cav{BulkMirror{DrudeModel{1.37e16, 5.32e13}},
                           BulkMirror{PlasmaModel{9e15}}, 2e-6};
    for (double k : {1e4, 1e6}) {
        for (double xi : {1e12, 1e15}) {
            const TransverseMode m{Polarization::TM, k};
            const double rho = open_loop(cav, m, xi);
            const double f = closed_loop(cav, m, xi);
            CHECK(f * (1.0 - rho) == doctest::Approx(rho).epsilon(1e-13));
        }
    }
}

TEST_CASE("domain error at the excluded origin") {
    const auto cav = perfect_cavity(1e-6);
    CHECK_THROWS_AS(open_loop(cav, {Polarization::TE, 0.0}, 0.0), std::domain_error);
    CHECK_THROWS_AS(phi(cav, {Polarization::TE, 0.0}, 0.0), std::domain_error);
}

TEST_CASE("airy function: empty cavity and the g = 1 + 2 Re f identity") {
    const CavityConfig empty{BulkMirror{VacuumModel{}},
                             BulkMirror{DrudeModel{1.37e16, 5.32e13}}, 1e-6};
    CHECK(airy(empty, {Polarization::TE, 1e6}, 1e15) == doctest::Approx(1.0));

    const CavityConfig cav{PrescribedMirror{0.7, 1e15},
                           BulkMirror{DrudeModel{1.37e16, 5.32e13}}, 1e-6};
    std::mt19937 rng(40127);
    std::uniform_real_distribution<double> logw(std::log(1e13), std::log(1e17));
    std::uniform_real_distribution<double> logk(std::log(1e3), std::log(1e8));
    for (int i = 0; i < 10'000; ++i) {
        const double w = std::exp(logw(rng));
        const double k = std::exp(logk(rng));
        const TransverseMode m{(i % 2) ? Polarization::TE : Polarization::TM, k};
        const double g = airy(cav, m, w);
        const auto f = closed_loop_complex(cav, m, {w, 0.0});
        REQUIRE(g >= 0.0);
        REQUIRE(g == doctest::Approx(1.0 + 2.0 * f.real()).epsilon(1e-11));
    }
}

TEST_CASE("airy rejects mirrors without real-axis amplitudes") {
    const auto cav = perfect_cavity(1e-6);
    CHECK_THROWS_AS(airy(cav, {Polarization::TE, 1e6}, 1e15), UnsupportedModelError);
}

TEST_CASE("phi at xi = 0: Drude TE vanishes, plasma TE follows the limit") {
    const double L = 1e-6;
    const CavityConfig drude{BulkMirror{DrudeModel{1.37e16, 5.32e13}},
                             BulkMirror{DrudeModel{1.37e16, 5.32e13}}, L};
    CHECK(phi(drude, {Polarization::TE, 3e5}, 0.0) == 0.0);

    // oracle: manual composition of the three factors
    const double wp = 1.37e16;
    const CavityConfig plasma{BulkMirror{PlasmaModel{wp}}, BulkMirror{PlasmaModel{wp}}, L};
    const double k = 3e5;
    const double K0 = std::hypot(k, wp / c);
    const double r = (k - K0) / (k + K0);
    const double rho = r * r * std::exp(-2.0 * k * L);
    const double want = k * rho / (1.0 - rho);
    CHECK(phi(plasma, {Polarization::TE, k}, 0.0) ==
          doctest::Approx(want).epsilon(1e-13));
    CHECK(want > 0.0);
}

TEST_CASE("phi is continuous at xi = 0 for perfect and plasma mirrors") {
    const double L = 1e-6;
    const double k = 4e5;
    const CavityConfig cavs[] = {perfect_cavity(L),
                                 {BulkMirror{PlasmaModel{1.37e16}},
                                  BulkMirror{PlasmaModel{1.37e16}},
                                  L}};
    for (const auto& cav : cavs) {
        for (Polarization p : {Polarization::TE, Polarization::TM}) {
            const double at0 = phi(cav, {p, k}, 0.0);
            for (int n = 3; n <= 8; ++n) {
                const double xi = std::pow(10.0, -n);
                const double near0 = phi(cav, {p, k}, xi);
                REQUIRE(std::fabs(near0 - at0) <=
                        1e-10 * std::fmax(1.0, std::fabs(at0)));
            }
        }
    }
    // Drude TE: value 0 at xi = 0 and limit 0 along xi -> 0
    const CavityConfig drude{BulkMirror{DrudeModel{1.37e16, 5.32e13}},
                             BulkMirror{DrudeModel{1.37e16, 5.32e13}}, L};
    CHECK(phi(drude, {Polarization::TE, k}, 0.0) == 0.0);
    double prev = std::numeric_limits<double>::infinity();
    for (int n = 2; n <= 8; ++n) {
        const double v = phi(drude, {Polarization::TE, k}, std::pow(10.0, -n));
        CHECK(std::fabs(v) < prev + 1e-30);
        prev = std::fabs(v);
    }
}

TEST_CASE("property sweep: |rho| <= e^{-2 kappa L} and 1 + 2f > 0") {
    std::mt19937 rng(90210);
    std::uniform_real_distribution<double> logk(std::log(1e2), std::log(1e8));
    std::uniform_real_distribution<double> logxi(std::log(1e10), std::log(1e17));
    std::uniform_real_distribution<double> logL(std::log(1e-8), std::log(1e-5));
    const MirrorSpec mirrors[] = {MirrorSpec{PerfectMirror{}},
                                  MirrorSpec{BulkMirror{PlasmaModel{1.37e16}}},
                                  MirrorSpec{BulkMirror{DrudeModel{1.37e16, 5.32e13}}},
                                  MirrorSpec{PrescribedMirror{0.9, 1e15}}};
    for (int i = 0; i < 10'000; ++i) {
        const double k = std::exp(logk(rng));
        const double xi = std::exp(logxi(rng));
        const double L = std::exp(logL(rng));
        const auto& m1 = mirrors[i % 4];
        const auto& m2 = mirrors[(i / 4) % 4];
        const CavityConfig cav{m1, m2, L};
        const TransverseMode mode{(i % 2) ? Polarization::TE : Polarization::TM, k};
        const double rho = open_loop(cav, mode, xi);
        const double kap = kappa_imaginary(k, xi);
        REQUIRE(std::fabs(rho) <= std::exp(-2.0 * kap * L) * (1.0 + 1e-13));
        const double f = closed_loop(cav, mode, xi);
        REQUIRE(1.0 + 2.0 * f > 0.0);
    }
}

TEST_CASE("identical dissipative mirrors give a non-negative open loop") {
    const CavityConfig cav{BulkMirror{DrudeModel{1.37e16, 5.32e13}},
                           BulkMirror{DrudeModel{1.37e16, 5.32e13}}, 1e-6};
    std::mt19937 rng(5150);
    std::uniform_real_distribution<double> logk(std::log(1e2), std::log(1e8));
    std::uniform_real_distribution<double> logxi(std::log(1e10), std::log(1e17));
    for (int i = 0; i < 10'000; ++i) {
        const TransverseMode mode{(i % 2) ? Polarization::TE : Polarization::TM,
                                  std::exp(logk(rng))};
        REQUIRE(open_loop(cav, mode, std::exp(logxi(rng))) >= 0.0);
    }
}

TEST_CASE("cavity validation") {
    CHECK_THROWS_AS(validate(CavityConfig{PerfectMirror{}, PerfectMirror{}, 0.0}),
                    std::invalid_argument);
    CHECK_NOTHROW(validate(perfect_cavity(1e-6)));
}
