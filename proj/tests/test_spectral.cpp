#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"
#include "casimir/spectral.hpp"

using namespace casimir;

namespace {

const QuadratureSpec kQuad{};

}  // namespace

TEST_CASE("adaptive panels reproduce a closed-form kinked integral") {
    // integral_0^1 sqrt(|x - x0|) dx = 2/3 (x0^{3/2} + (1-x0)^{3/2})
    const double x0 = 0.337;
    const auto f = [x0](double x) { return std::sqrt(std::abs(x - x0)); };
    const double expect = (2.0 / 3.0) * (std::pow(x0, 1.5) + std::pow(1.0 - x0, 1.5));
    const auto r = adaptive_gk(f, 0.0, 1.0, kQuad);
    CHECK(r.value == doctest::Approx(expect).epsilon(1e-9));
    CHECK(r.error <= 2.0 * (kQuad.rel_tol * std::abs(r.value) + kQuad.abs_tol));
    CHECK(r.evaluations > 15);
}

TEST_CASE("adaptive_gk edge cases") {
    const auto f = [](double x) { return x; };
    const auto r = adaptive_gk(f, 2.0, 2.0, kQuad);
    CHECK(r.value == 0.0);
    CHECK(r.evaluations == 0);
    CHECK_THROWS_AS(adaptive_gk(f, 1.0, 0.0, kQuad), std::domain_error);
    const auto nan_f = [](double x) { return std::sqrt(x - 0.5); };
    CHECK_THROWS_AS(adaptive_gk(nan_f, 0.0, 1.0, kQuad), NumericalDegeneracyError);
}

TEST_CASE("panel budget exhaustion carries the partial result") {
    const double x0 = 0.337;
    const auto f = [x0](double x) { return std::sqrt(std::abs(x - x0)); };
    QuadratureSpec tight = kQuad;
    tight.rel_tol = 1e-12;
    tight.abs_tol = 0.0;
    tight.max_subdivisions = 3;
    const double expect = (2.0 / 3.0) * (std::pow(x0, 1.5) + std::pow(1.0 - x0, 1.5));
    try {
        adaptive_gk(f, 0.0, 1.0, tight);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(std::isfinite(e.partial_value));
        CHECK(e.partial_value == doctest::Approx(expect).epsilon(1e-2));
        CHECK(e.error_estimate > 0.0);
    }
}

TEST_CASE("transformed k integral reproduces the plain exponential moment") {
    // integral_0^inf k exp(-2 k a) dk = 1 / (4 a^2), zero-frequency map
    const double a = 1.0e-6;
    const auto f = [a](double k) { return k * std::exp(-2.0 * k * a); };
    const auto r = integrate_kperp(f, 0.0, a, kQuad);
    CHECK(r.value == doctest::Approx(1.0 / (4.0 * a * a)).epsilon(1e-8));
}

TEST_CASE("transformed k integral matches the ideal cavity mode series") {
    // f = k kappa / (exp(2 kappa a) - 1), kappa^2 = k^2 + kappa0^2; kappa dkappa
    // = k dk turns the integral into sum_n integral_{kappa0}^inf kappa^2
    // exp(-2 n a kappa) dkappa, each term elementary
    const double a = 1.0e-6;
    const double kappa0 = 1.0e6;
    const double zeta = kappa0 * c_light;  // vacuum gap: kappa0 = zeta / c
    const auto f = [a, kappa0](double k) {
        const double kap = std::hypot(k, kappa0);
        return k * kap / std::expm1(2.0 * kap * a);
    };
    long double series = 0.0L;
    for (int n = 1; n <= 40; ++n) {
        const long double s = 2.0L * n * a;
        series += std::exp(-s * kappa0) *
                  (kappa0 * (long double)kappa0 / s + 2.0L * kappa0 / (s * s) + 2.0L / (s * s * s));
    }
    const auto r = integrate_kperp(f, zeta * zeta, a, kQuad);
    CHECK(r.value == doctest::Approx(static_cast<double>(series)).epsilon(1e-8));
}

TEST_CASE("k integral handles a zero integrand and a cutoff beyond reach") {
    const auto zero = [](double) { return 0.0; };
    const auto r = integrate_kperp(zero, 0.0, 1.0e-6, kQuad);
    CHECK(r.value == 0.0);
    CHECK(r.error == 0.0);
    // static kappa already past the tail cutoff: nothing to integrate
    const double a = 1.0e-6;
    const double big_zeta_sq = std::pow(100.0 * c_light / a, 2);
    const auto r2 = integrate_kperp([](double) { return 1.0; }, big_zeta_sq, a, kQuad);
    CHECK(r2.value == 0.0);
    CHECK(r2.evaluations == 0);
}

TEST_CASE("frequency integral reproduces an exponential decay scale") {
    const double h = 1.0e-6;
    const auto g = [h](double zeta) { return std::exp(-zeta * h / c_light); };
    const auto r = integrate_zeta(g, h, kQuad);
    CHECK(r.value == doctest::Approx(c_light / h).epsilon(1e-9));
}

TEST_CASE("first Matsubara frequency at room temperature") {
    const long double expect = 2.0L * 3.14159265358979323846L * 1.380649e-23L * 300.0L /
                               1.054571817e-34L;
    const double z1 = matsubara_frequency(300.0, 1);
    CHECK(z1 == doctest::Approx(static_cast<double>(expect)).epsilon(1e-14));
    CHECK(z1 == doctest::Approx(2.467790e14).epsilon(1e-6));
    CHECK(matsubara_frequency(300.0, 7) == doctest::Approx(7.0 * z1).epsilon(1e-15));
    CHECK_THROWS_AS(matsubara_frequency(-1.0, 1), std::domain_error);
}

TEST_CASE("Matsubara sum applies half weight at zero and stops on three quiet terms") {
    const double z1 = matsubara_frequency(300.0, 1);
    MatsubaraSpec spec;
    spec.temperature = 300.0;
    const auto g = [z1](double zeta, bool) { return zeta <= 1.5 * z1 ? 2.5 : 0.0; };
    const auto r = matsubara_sum(g, spec);
    const double kt = k_boltzmann * 300.0;
    CHECK(r.value == kt * 3.75);  // 0.5 * 2.5 + 2.5, exact in binary
    CHECK(r.terms == 5);          // m = 0..4: three zero terms end the scan
    CHECK(r.error == 0.0);
}

TEST_CASE("Matsubara sum of a geometric sequence") {
    MatsubaraSpec spec;
    spec.temperature = 300.0;
    const double z1 = matsubara_frequency(300.0, 1);
    const double s = std::log(2.0) / z1;  // term ratio exactly 1/2
    const auto g = [s](double zeta, bool) { return std::exp(-zeta * s); };
    const auto r = matsubara_sum(g, spec);
    const double kt = k_boltzmann * 300.0;
    CHECK(r.value == doctest::Approx(kt * 1.5).epsilon(1e-9));
    CHECK(r.error >= 0.0);
    CHECK(r.terms > 25);
}

TEST_CASE("Matsubara term budget exhaustion carries the scaled partial") {
    MatsubaraSpec spec;
    spec.temperature = 300.0;
    spec.max_terms = 50;
    const auto g = [](double, bool) { return 1.0; };
    try {
        matsubara_sum(g, spec);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        const double kt = k_boltzmann * 300.0;
        CHECK(e.partial_value == doctest::Approx(kt * 50.5).epsilon(1e-12));
        CHECK(e.error_estimate > 0.0);
    }
}

TEST_CASE("sum and inner integral compose into the separable product") {
    // g(zeta) = exp(-zeta s) integral k exp(-2 k a) dk with term ratio 1/2:
    // total = k_B T * 1.5 / (4 a^2)
    const double a = 1.0e-6;
    MatsubaraSpec spec;
    spec.temperature = 300.0;
    const double s = std::log(2.0) / matsubara_frequency(300.0, 1);
    const auto g = [&](double zeta, bool) {
        const auto inner =
            integrate_kperp([a](double k) { return k * std::exp(-2.0 * k * a); }, 0.0, a, kQuad);
        return inner.value * std::exp(-zeta * s);
    };
    const auto r = matsubara_sum(g, spec);
    const double expect = k_boltzmann * 300.0 * 1.5 / (4.0 * a * a);
    CHECK(r.value == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("tightening the tolerance moves the result less than the looser bound") {
    const double a = 1.0e-6;
    const auto f = [a](double k) { return k * std::exp(-2.0 * k * a); };
    QuadratureSpec loose = kQuad;
    loose.rel_tol = 1e-9;
    QuadratureSpec tight = kQuad;
    tight.rel_tol = 1e-12;
    const auto r1 = integrate_kperp(f, 0.0, a, loose);
    const auto r2 = integrate_kperp(f, 0.0, a, tight);
    CHECK(std::abs(r1.value - r2.value) <= 3.0 * loose.rel_tol * std::abs(r2.value));
}

TEST_CASE("identical inputs give bitwise identical results") {
    const double a = 1.0e-6;
    const double kappa0 = 2.0e6;
    const auto f = [a, kappa0](double k) {
        const double kap = std::hypot(k, kappa0);
        return k * kap / std::expm1(2.0 * kap * a);
    };
    const double w = kappa0 * c_light * (kappa0 * c_light);
    const auto r1 = integrate_kperp(f, w, a, kQuad);
    const auto r2 = integrate_kperp(f, w, a, kQuad);
    CHECK(r1.value == r2.value);
    CHECK(r1.error == r2.error);
    CHECK(r1.evaluations == r2.evaluations);

    MatsubaraSpec spec;
    spec.temperature = 150.0;
    const double s = 1.0 / matsubara_frequency(150.0, 1);
    const auto g = [s](double zeta, bool) { return std::exp(-zeta * s); };
    CHECK(matsubara_sum(g, spec).value == matsubara_sum(g, spec).value);
}
