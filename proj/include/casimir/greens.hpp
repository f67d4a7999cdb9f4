#pragma once

#include "casimir/multilayer.hpp"

namespace casimir {

// Piecewise solution of the one-dimensional boundary-value problem for a
// single scalar Green amplitude at fixed (zeta, k_perp), source at z' inside
// one gap. Basis functions are scaled so every coefficient multiplies a
// factor <= 1 within its zone:
//   z < 0:            wall_left     e^{+kappa_1 z}
//   0 < z < a+:       gap_plus_out  e^{-kappa_g (a+ - z)}
//                   + gap_plus_in   e^{-kappa_g z}          [+ source]
//   a+ < z < a+ + b:  slab_fwd      e^{-kappa_2 (a+ + b - z)}
//                   + slab_back     e^{-kappa_2 (z - a+)}
//   a+ + b < z < c:   gap_minus_out e^{-kappa_g (c - z)}
//                   + gap_minus_in  e^{-kappa_g (z - a+ - b)}  [+ source]
//   z > c:            wall_right    e^{-kappa_1 (z - c)}
// The source term source_amplitude * e^{-kappa_g |z - z'|} lives in the gap
// named by source_side.
struct GreensSolution {
    Polarization polarization;
    Side source_side;
    double z_source;
    double wall_left, gap_plus_out, gap_plus_in;
    double slab_fwd, slab_back;
    double gap_minus_out, gap_minus_in, wall_right;
    double source_amplitude;
    double max_residual;  // relative continuity defect of the solved system
    CavityGeometry geometry;
    SpectralPoint point;

    double evaluate(double z) const;              // includes the source term
    double evaluate_homogeneous(double z) const;  // reflected waves only
};

// Continuity of [g, (eps/kappa^2) dg/dz] across the four interfaces (TM),
// solved as a scaled 8x8 system. Source strength -kappa_g / (2 eps_g mu_g).
// z_source must lie strictly inside the gap named by source_side. Throws
// NumericalDegeneracyError when the system is singular at working precision.
GreensSolution solve_tm(const SpectralPoint& pt, const CavityGeometry& geom,
                        const MaterialSet& mats, double z_source,
                        Side source_side = Side::left);

// Continuity of [g, (1/mu) dg/dz], source strength -mu_g zeta^2/(2 kappa_g c^2).
GreensSolution solve_te(const SpectralPoint& pt, const CavityGeometry& geom,
                        const MaterialSet& mats, double z_source,
                        Side source_side = Side::left);

// Homogeneous part of g inside the source gap on the scaled product basis,
//   g_hom(z, z') = amplitude * sum_{s,t} m_st phi_s(z) phi_t(z'),
// phi_+(x) = e^{-kappa_g (gap_top - x)}, phi_-(x) = e^{-kappa_g (x - gap_bottom)}.
// pm is the coefficient of phi_+(z) phi_-(z'); the pm/mp entries carry the
// cosh(kappa (z - z')) physics and reduce to exp(+-kappa_g a) / d.
struct ReflectionMatrix {
    double pp = 0.0, pm = 0.0, mp = 0.0, mm = 0.0;
};

// Extracted from two solves at distinct source positions; the linear map
// from (m_st) to the solved gap coefficients is inverted exactly.
ReflectionMatrix homogeneous_matrix(Polarization q, const SpectralPoint& pt,
                                    const CavityGeometry& geom, const MaterialSet& mats,
                                    Side side = Side::left);

// Same matrix assembled from the closed-form cavity algebra: wall reflection,
// composite stack reflection, and the round-trip series. Independent path.
ReflectionMatrix homogeneous_matrix_closed_form(Polarization q, const SpectralPoint& pt,
                                                const CavityGeometry& geom,
                                                Side side = Side::left);

// Field relations on the exponential basis: the zz amplitude coefficient per
// (s, t) term is  s t (k_perp^2 / kappa_g^2)  times the xx coefficient. The
// source image inherits the (s t = -1) factor.
ReflectionMatrix gzz_matrix(const ReflectionMatrix& tm, const SpectralPoint& pt);

// g evaluated in the left gap at (z, z_source), both strictly inside, from a
// precomputed matrix; shared by the solve-path and closed-form comparisons.
double gap_green_value(const ReflectionMatrix& m, double amplitude,
                       const SpectralPoint& pt, const CavityGeometry& geom, double z,
                       double z_source);
double gap_gzz_value(const ReflectionMatrix& tm, double tm_amplitude,
                     const SpectralPoint& pt, const CavityGeometry& geom, double z,
                     double z_source);

// Closed-form g in the left gap written out directly from the reflection
// algebra (round-trip denominator and image terms), never touching the
// linear solve.
double closed_form_gap_green(Polarization q, const SpectralPoint& pt,
                             const CavityGeometry& geom, const MaterialSet& mats, double z,
                             double z_source);
double closed_form_gap_gzz(const SpectralPoint& pt, const CavityGeometry& geom,
                           const MaterialSet& mats, double z, double z_source);

// Source amplitudes shared by the solver and the closed forms.
double tm_source_amplitude(const SpectralPoint& pt, const MaterialSet& mats);
double te_source_amplitude(const SpectralPoint& pt, const MaterialSet& mats);

// Electromagnetic stress combination at coincidence z = z':
//   eps_g (g_xx + g_yy - g_zz) + (c^2/(mu_g zeta^2)) curl-curl counterpart,
// expanded on the product basis. The z+z'-dependent coefficients cancel
// algebraically; zplus_residual reports the worst leftover relative to the
// z-z' part over a z grid, certifying the solved coefficients. The z-z' part
// difference between the gaps reproduces the pressure integrand.
struct StressCertificate {
    double zplus_residual = 0.0;    // max over grid, relative
    double force_integrand = 0.0;   // k_perp (S_left - S_right)/2 from the solves
    double kernel_integrand = 0.0;  // k_perp kappa_g sum_q (1/d^- - 1/d^+)
    // k_perp (|S_left| + |S_right|)/2. force_integrand is a difference of
    // one-sided stresses, so its roundoff floor sits at eps times this, not
    // at eps times the difference itself; compare the two integrands
    // relative to this scale.
    double stress_scale = 0.0;
};

StressCertificate stress_cancellation_check(const SpectralPoint& pt,
                                            const CavityGeometry& geom,
                                            const MaterialSet& mats, int z_grid_points = 50);

}  // namespace casimir
