#pragma once

#include <functional>
#include <vector>

#include "casimir/force.hpp"

namespace casimir {

// Slab of mass m_area per unit transverse area suspended at the cavity centre
// by a spring of stiffness k_spring per unit area. The cavity force F = a1
// delta softens the spring; oscillation requires k_spring > a1.
struct OscillatorSetup {
    double k_spring = 0.0;  // N / m^3
    double m_area = 0.0;    // kg / m^2
    double h = 0.0;
    double b = 0.0;
    MaterialSet materials{MaterialModel::vacuum(), MaterialModel::vacuum(),
                          MaterialModel::vacuum()};
    double temperature = 0.0;  // K, 0 selects the frequency integral
};

struct FrequencyShift {
    double omega_free = 0.0;         // sqrt(k/m), cavity removed
    double omega = 0.0;              // sqrt((k - a1)/m)
    double shift = 0.0;              // omega_free - omega, exact
    double shift_first_order = 0.0;  // a1 / (2 sqrt(k m))
    double a1 = 0.0;                 // N / m^3
    bool first_order_reliable = false;  // k >= 10 a1
};

// Arithmetic cores over a precomputed a1. Throw InstabilityError unless
// k_spring > a1.
double eigenfrequency_from_a1(double k_spring, double m_area, double a1);
FrequencyShift frequency_shift_from_a1(double k_spring, double m_area, double a1);

// Full pipeline: a1 from the cavity observables, then the cores above.
double eigenfrequency(const OscillatorSetup& setup, const QuadratureSpec& quad = {},
                      const MatsubaraSpec& sum_spec = {});
FrequencyShift frequency_shift(const OscillatorSetup& setup, const QuadratureSpec& quad = {},
                               const MatsubaraSpec& sum_spec = {});

// Largest amplitude delta* <= delta_max with |F(delta) - a1 delta| / |F(delta)|
// <= accuracy at every sampled amplitude up to delta*. Grid walk plus
// bisection on the first violated interval; 0 if the first sample violates.
double harmonic_region_of(const std::function<double(double)>& force, double a1,
                          double delta_max, double accuracy);

// Same scan driven by the dispersive cavity force; amplitudes up to 90% of
// the gap half-width are probed. accuracy must lie in (0, 0.5).
double harmonic_region(double h, double b, const MaterialSet& mats, double temperature,
                       double accuracy, const QuadratureSpec& quad = {},
                       const MatsubaraSpec& sum_spec = {});

// Closed sandwich (walls at -+a around the slab) against the open geometry
// (one wall at distance a) for a slab on a spring. Displacement coefficients
// follow from the wall|gap|slab attraction F_L(a):
//   closed: [k - 8|F_L|/a] delta restoring, + 40 |F_L| delta^3 / a^3
//   open:   [k - 4|F_L|/a] delta restoring, - 10 |F_L| delta^2 / a^2
// (delta counted away from the open wall). The grids hold the relative
// nonharmonic correction (F - F_lin)/F of the Casimir part, once for the
// exact d^-4 power law scaled to F_L(a) and once for the dispersive force.
struct GeometryComparison {
    double a = 0.0;
    double lifshitz_pressure = 0.0;  // F_L(a) < 0, full dispersion
    double closed_linear = 0.0;      // 8 |F_L| / a
    double closed_cubic = 0.0;       // 40 |F_L| / a^3
    double open_linear = 0.0;        // 4 |F_L| / a
    double open_quadratic = 0.0;     // -10 |F_L| / a^2
    double stiffness_closed = 0.0;   // k - 8 |F_L| / a
    double stiffness_open = 0.0;     // k - 4 |F_L| / a
    std::vector<double> delta_over_a;
    std::vector<double> closed_powerlaw_correction;
    std::vector<double> open_powerlaw_correction;
    std::vector<double> closed_dispersive_correction;
    std::vector<double> open_dispersive_correction;
};

GeometryComparison open_vs_closed(double a, double k_spring, const MaterialSet& mats,
                                  double temperature, const std::vector<double>& delta_grid,
                                  const QuadratureSpec& quad = {},
                                  const MatsubaraSpec& sum_spec = {});

}  // namespace casimir
