#pragma once

#include "casimir/multilayer.hpp"
#include "casimir/spectral.hpp"

namespace casimir {

// Positive pressure points along +z, pushing the slab from the a_plus gap
// toward the a_minus gap. With standard attractive materials a slab displaced
// by delta > 0 feels F > 0: it is pulled further toward the nearer wall.
inline constexpr const char* pressure_sign_convention =
    "positive pressure pushes the slab toward the a_minus gap (+z)";

struct ForceResult {
    double pressure = 0.0;          // N / m^2
    double quadrature_error = 0.0;  // N / m^2, combined inner + outer estimate
    int matsubara_terms = 0;        // 0 on the zero-temperature path
    double temperature = 0.0;       // K
};

struct TaylorCoefficient {
    double a1 = 0.0;                // N / m^3, F(delta) = a1 delta + O(delta^3)
    double quadrature_error = 0.0;  // N / m^3
    int matsubara_terms = 0;
    double temperature = 0.0;
};

// Net pressure on the slab from the round-trip difference of the two gaps,
// zero-temperature (imaginary-frequency integral) or finite-temperature
// (Matsubara sum with half-weighted static term).
ForceResult pressure_zero_temperature(const CavityGeometry& geom, const MaterialSet& mats,
                                      const QuadratureSpec& quad = {});
ForceResult pressure_finite_temperature(const CavityGeometry& geom, const MaterialSet& mats,
                                        double temperature, const QuadratureSpec& quad = {},
                                        const MatsubaraSpec& sum_spec = {});

// Same observable through the algebraically equivalent displacement kernels
// A, B; temperature = 0 routes to the frequency integral. Independent code
// path used for cross-checks.
ForceResult pressure_displacement_form(double h, double b, double delta,
                                       const MaterialSet& mats, double temperature,
                                       const QuadratureSpec& quad = {},
                                       const MatsubaraSpec& sum_spec = {});

// Leading restoring/destabilizing coefficient a1 = dF/d delta at delta = 0.
TaylorCoefficient taylor_coefficient(double h, double b, const MaterialSet& mats,
                                     double temperature, const QuadratureSpec& quad = {},
                                     const MatsubaraSpec& sum_spec = {});

// Ideal-conductor references (exact closed forms).
double ideal_pressure(double h, double delta);       // N / m^2
double ideal_taylor_coefficient(double h);           // N / m^3

// Net pressure in the infinite-slab limit: difference of two independent
// Lifshitz cavities of widths h/2 -+ delta sharing the slab surface.
ForceResult pressure_lifshitz_difference(double h, double delta, const MaterialSet& mats,
                                         double temperature, const QuadratureSpec& quad = {},
                                         const MatsubaraSpec& sum_spec = {});

// First-order finite-thickness correction: the O(exp(-2 kappa_2 b)) term of
// the five-zone pressure about the infinite-slab limit, so
// pressure ~ pressure_lifshitz_difference + thickness_correction.
ForceResult thickness_correction(double h, double b, double delta, const MaterialSet& mats,
                                 double temperature, const QuadratureSpec& quad = {},
                                 const MatsubaraSpec& sum_spec = {});

// Attraction between the slab material and one wall across a single gap
// (wall | gap | slab half-spaces). Negative: pulls the slab toward the wall.
ForceResult halfspace_pressure(double gap, const MaterialSet& mats, double temperature,
                               const QuadratureSpec& quad = {},
                               const MatsubaraSpec& sum_spec = {});

}  // namespace casimir
