#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "casimir/force.hpp"
#include "test_util.hpp"

using namespace casimir;

namespace {

const MaterialModel kDrude = MaterialModel::drude(2.24e16, 1.25e14);
const MaterialModel kTeflon =
    MaterialModel::oscillator_sum({{0.6, 3.0e13}, {0.2, 2.0e14}, {0.1, 2.0e15}, {0.2, 1.5e16}});
const MaterialModel kProxy = MaterialModel::ideal_conductor_proxy(1.0e8);

MaterialSet metal_set() { return {kDrude, kDrude, MaterialModel::vacuum()}; }
MaterialSet mixed_set() { return {kDrude, kTeflon, MaterialModel::vacuum()}; }
MaterialSet dielectric_set() { return {kTeflon, kTeflon, MaterialModel::vacuum()}; }
MaterialSet proxy_set() { return {kProxy, kProxy, MaterialModel::vacuum()}; }

}  // namespace

TEST_CASE("ideal references pinned") {
    // single 1 um gap dominates: the classic 1.3001 mPa attraction
    CHECK(ideal_pressure(22.0e-6, 10.0e-6) == doctest::Approx(1.30012e-3).epsilon(2e-5));
    CHECK(ideal_pressure(2.0e-6, 0.0) == 0.0);
    CHECK(ideal_pressure(2.0e-6, 1.0e-7) == -ideal_pressure(2.0e-6, -1.0e-7));
    CHECK(ideal_pressure(2.0e-6, 1.0e-7) > 0.0);
    CHECK(ideal_taylor_coefficient(2.5e-6) == doctest::Approx(3408.20).epsilon(1e-4));
}

TEST_CASE("centered slab feels exactly zero pressure") {
    const auto geom = CavityGeometry::from_h_delta(2.0e-6, 0.4e-6, 0.0);
    CHECK(pressure_finite_temperature(geom, metal_set(), 300.0).pressure == 0.0);
    CHECK(pressure_zero_temperature(geom, mixed_set()).pressure == 0.0);
    CHECK(pressure_displacement_form(2.0e-6, 0.4e-6, 0.0, metal_set(), 300.0).pressure == 0.0);
    CHECK(pressure_displacement_form(2.0e-6, 0.4e-6, 0.0, mixed_set(), 0.0).pressure == 0.0);
}

TEST_CASE("a slab indistinguishable from the gap feels no net force") {
    const MaterialSet invisible{kDrude, MaterialModel::vacuum(), MaterialModel::vacuum()};
    const auto geom = CavityGeometry::from_h_delta(2.0e-6, 0.4e-6, 0.3e-6);
    CHECK(std::abs(pressure_finite_temperature(geom, invisible, 300.0).pressure) <= 1e-12);
    CHECK(std::abs(pressure_zero_temperature(geom, invisible).pressure) <= 1e-12);
}

TEST_CASE("pressure is antisymmetric in the displacement, bit for bit") {
    const double h = 2.0e-6, b = 0.4e-6, delta = 0.23e-6;
    const auto plus = CavityGeometry::from_h_delta(h, b, delta);
    const auto minus = CavityGeometry::from_h_delta(h, b, -delta);
    for (const auto& mats : {metal_set(), mixed_set()}) {
        const auto fp = pressure_finite_temperature(plus, mats, 300.0);
        const auto fm = pressure_finite_temperature(minus, mats, 300.0);
        CHECK(fp.pressure == -fm.pressure);
        CHECK(fp.pressure != 0.0);
        const auto dp = pressure_displacement_form(h, b, delta, mats, 300.0);
        const auto dm = pressure_displacement_form(h, b, -delta, mats, 300.0);
        CHECK(dp.pressure == -dm.pressure);
        const auto zp = pressure_zero_temperature(plus, mats);
        const auto zm = pressure_zero_temperature(minus, mats);
        CHECK(zp.pressure == -zm.pressure);
    }
}

TEST_CASE("round-trip and displacement forms agree to quadrature accuracy") {
    QuadratureSpec tight;
    tight.rel_tol = 1e-11;
    Rng rng(53);
    for (int i = 0; i < 6; ++i) {
        const double h = rng.uniform(1.0e-6, 3.0e-6);
        const double b = rng.uniform(0.1e-6, 0.6e-6);
        const double mag = rng.uniform(h / 100.0, 0.4 * h / 2.0);
        const double delta = (i % 2 == 0) ? mag : -mag;
        const auto mats = (i % 2 == 0) ? metal_set() : mixed_set();
        const auto geom = CavityGeometry::from_h_delta(h, b, delta);
        const double temperature = (i < 3) ? 300.0 : 0.0;
        const auto direct = (temperature > 0.0)
                                ? pressure_finite_temperature(geom, mats, temperature, tight)
                                : pressure_zero_temperature(geom, mats, tight);
        const auto disp =
            pressure_displacement_form(h, b, delta, mats, temperature, tight);
        CHECK(disp.pressure ==
              doctest::Approx(direct.pressure).epsilon(1e-10));
    }
}

TEST_CASE("near-ideal walls and slab approach the ideal-conductor pressure") {
    const double h = 2.5e-6, b = 1.0e-6, delta = 0.3e-6;
    const auto geom = CavityGeometry::from_h_delta(h, b, delta);
    const auto f = pressure_zero_temperature(geom, proxy_set());
    CHECK(f.pressure == doctest::Approx(ideal_pressure(h, delta)).epsilon(5e-3));
    CHECK(f.pressure > 0.0);
}

TEST_CASE("near-ideal thick slab reproduces the ideal linear coefficient") {
    QuadratureSpec quad;
    quad.rel_tol = 1e-10;
    const double h = 2.5e-6;
    const auto t = taylor_coefficient(h, 2.0e-6, proxy_set(), 0.0, quad);
    CHECK(t.a1 == doctest::Approx(ideal_taylor_coefficient(h)).epsilon(1e-2));
}

TEST_CASE("linear coefficient is the small-displacement limit of the force") {
    QuadratureSpec quad;
    quad.rel_tol = 1e-10;
    const double h = 2.0e-6, b = 0.4e-6;
    const auto mats = metal_set();
    const auto t = taylor_coefficient(h, b, mats, 300.0, quad);
    CHECK(t.a1 > 0.0);

    // residual F - a1 delta scales as delta^3
    double res[3], del[3];
    int j = 0;
    for (const double frac : {0.004, 0.008, 0.016}) {
        const double delta = frac * h;
        const double f =
            pressure_displacement_form(h, b, delta, mats, 300.0, quad).pressure;
        res[j] = std::abs(f - t.a1 * delta);
        del[j] = delta;
        ++j;
    }
    const double slope = std::log(res[2] / res[0]) / std::log(del[2] / del[0]);
    CHECK(slope == doctest::Approx(3.0).epsilon(0.05));

    // finite difference at delta = h/1000 sits on the known curvature floor
    const double fd =
        pressure_displacement_form(h, b, h / 1000.0, mats, 300.0, quad).pressure /
        (h / 1000.0);
    const double dev = std::abs(fd - t.a1) / t.a1;
    CHECK(dev >= 5e-6);
    CHECK(dev <= 3e-5);

    // Richardson pair cancels the delta^2 bias
    const double fd_half =
        pressure_displacement_form(h, b, h / 2000.0, mats, 300.0, quad).pressure /
        (h / 2000.0);
    const double extrapolated = (4.0 * fd_half - fd) / 3.0;
    CHECK(std::abs(extrapolated - t.a1) / t.a1 <= 1e-7);
}

TEST_CASE("thin-slab correction to the infinite-slab limit") {
    const double h = 1.0e-6, b = 0.25e-6, delta = 0.1e-6;
    const auto mats = dielectric_set();
    const double temperature = 300.0;
    const double full =
        pressure_displacement_form(h, b, delta, mats, temperature).pressure;
    const double lifshitz =
        pressure_lifshitz_difference(h, delta, mats, temperature).pressure;
    const double corr = thickness_correction(h, b, delta, mats, temperature).pressure;
    CHECK(corr < 0.0);                    // leakage weakens the restoring push
    CHECK(full > 0.0);
    CHECK(full < lifshitz);               // thin slab is easier to hold centered
    const double residual = std::abs(full - lifshitz - corr);
    CHECK(residual <= 0.4 * std::abs(full - lifshitz));
}

TEST_CASE("metal slabs a few hundred nanometers thick are already bulk") {
    const double h = 2.0e-6, delta = 0.2e-6;
    const auto mats = metal_set();
    const auto geomT = CavityGeometry::from_h_delta(h, 0.5e-6, delta);
    const double thick = pressure_zero_temperature(geomT, mats).pressure;
    const double lifshitz = pressure_lifshitz_difference(h, delta, mats, 0.0).pressure;
    const double ratio_thick = std::abs(thick - lifshitz) / std::abs(thick);
    CHECK(ratio_thick < 1e-4);

    const auto geom_thin = CavityGeometry::from_h_delta(h, 1.0e-8, delta);
    const double thin = pressure_zero_temperature(geom_thin, mats).pressure;
    const double ratio_thin = std::abs(thin - lifshitz) / std::abs(thin);
    CHECK(ratio_thin >= 100.0 * ratio_thick);
    CHECK(ratio_thin >= 1e-2);
}

TEST_CASE("displaced slab is pulled toward the nearer wall") {
    const auto geom = CavityGeometry::from_h_delta(2.0e-6, 0.4e-6, 0.2e-6);
    CHECK(pressure_finite_temperature(geom, metal_set(), 300.0).pressure > 0.0);
    CHECK(pressure_finite_temperature(geom, dielectric_set(), 300.0).pressure > 0.0);
    CHECK(pressure_zero_temperature(geom, mixed_set()).pressure > 0.0);
}

TEST_CASE("single-gap attraction matches the ideal benchmark for the proxy metal") {
    const auto f = halfspace_pressure(1.0e-6, proxy_set(), 0.0);
    CHECK(f.pressure < 0.0);
    CHECK(f.pressure == doctest::Approx(-1.30012e-3).epsilon(5e-3));
    const auto fd = halfspace_pressure(1.0e-6, metal_set(), 0.0);
    CHECK(fd.pressure < 0.0);
    CHECK(std::abs(fd.pressure) < std::abs(f.pressure));
}

TEST_CASE("finite temperature result carries bookkeeping fields") {
    const auto geom = CavityGeometry::from_h_delta(2.0e-6, 0.4e-6, 0.2e-6);
    const auto f = pressure_finite_temperature(geom, metal_set(), 300.0);
    CHECK(f.temperature == 300.0);
    CHECK(f.matsubara_terms > 3);
    CHECK(f.quadrature_error > 0.0);
    CHECK(f.quadrature_error < 1e-6 * std::abs(f.pressure));
    const auto z = pressure_zero_temperature(geom, metal_set());
    CHECK(z.temperature == 0.0);
    CHECK(z.matsubara_terms == 0);
}
