#pragma once

#include "casimir/fresnel.hpp"

namespace casimir {

// Five-zone stack along z:
//   wall | gap a_plus | slab b | gap a_minus | wall
// with outer period c = a_plus + b + a_minus and wall spacing h = c - b.
// The slab midline displacement is delta = (a_plus - a_minus)/2; positive
// delta moves the slab toward the a_minus (right) side.
struct CavityGeometry {
    double a_plus;
    double a_minus;
    double b;
    double c;
    double h;

    static CavityGeometry from_gaps(double a_plus, double a_minus, double b);
    static CavityGeometry from_h_delta(double h, double b, double delta);

    double delta() const { return 0.5 * (a_plus - a_minus); }
    double min_gap() const { return a_plus < a_minus ? a_plus : a_minus; }
    CavityGeometry mirrored() const { return from_gaps(a_minus, a_plus, b); }
};

// Which gap a quantity refers to. left = the a_plus gap.
enum class Side { left, right };

// exp(-x) for x >= 0 with underflow short-circuited to exactly 0, so deep
// tails cannot produce denormal noise or overflow upstream of a ratio.
double decaying_exp(double x);

// Closed-form sum over round trips in one gap of the five-zone cavity,
//   1/d^(side) = U E / (V - U E),   E = exp(-2 kappa_g a_side),
// where U, V fold the opposite gap and the slab into a composite reflector.
// Vanishes identically when walls match the gap; reduces to the three-layer
// result when the slab matches the gap. Throws NumericalDegeneracyError if
// V - U E collapses to zero at working precision.
double gap_reflection_sum(Side side, Polarization q, const SpectralPoint& pt,
                          const CavityGeometry& geom);

// Both gaps at once, sharing the U/V evaluations.
struct GapSumPair {
    double left;   // 1/d^+
    double right;  // 1/d^-
};
GapSumPair gap_reflection_sums(Polarization q, const SpectralPoint& pt,
                               const CavityGeometry& geom);

// Kernels of the displacement form of the net pressure. For a slab moved by
// delta off the midline the per-polarization integrand is
//   A sinh(2 kappa_g delta) / (B - A cosh(2 kappa_g delta))
// with A the odd round-trip coupling and B the even normalization:
//   A = 2 D1 D2 (1 - e^{-2 kappa_2 b}) e^{-kappa_g h}
//   B = 1 - D2^2 e^{-2 kappa_2 b} + D1^2 (D2^2 - e^{-2 kappa_2 b}) e^{-2 kappa_g h}.
struct DisplacementKernels {
    double A;
    double B;
};
DisplacementKernels displacement_kernels(Polarization q, const SpectralPoint& pt,
                                         double h, double b);

// b -> infinity limit of the above: two independent wall|gap|slab cavities,
//   A_L = 2 D1 D2 e^{-kappa_g h},  B_L = 1 + D1^2 D2^2 e^{-2 kappa_g h}.
DisplacementKernels lifshitz_limit_kernels(Polarization q, const SpectralPoint& pt,
                                           double h);

// A sinh(2 kappa_g delta) / (B - A cosh(2 kappa_g delta)) arranged so no
// intermediate exceeds exp overflow for any |delta| < h/2.
double displacement_ratio(const DisplacementKernels& k, double kappa_g, double delta);

// Net-pressure integrand factor Sum_q (1/d^- - 1/d^+) evaluated through the
// gap sums; equals Sum_q displacement_ratio(...) algebraically.
double net_round_trip_difference(const SpectralPoint& pt, const CavityGeometry& geom);

// Composite reflection coefficient, in the Delta convention, of everything
// to the right of the a_plus gap (slab + far gap + far wall), built by
// recursive two-interface folding. gap_reflection_sum(left) equals the
// geometric series in r_wall * r_stack * exp(-2 kappa_g a_plus).
double composite_stack_delta(Polarization q, const SpectralPoint& pt,
                             double a_minus, double b);

// Partial geometric series sum_{n=1..n_terms} rho^n for rho = r_left *
// r_right * exp(-2 kappa_g gap); |rho| >= 1 throws std::domain_error.
double geometric_round_trips(double r_left, double r_right, double kappa_g,
                             double gap, int n_terms);

}  // namespace casimir
