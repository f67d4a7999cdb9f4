#pragma once

#include <functional>

namespace casimir {

struct QuadratureSpec {
    double rel_tol = 1e-9;
    double abs_tol = 1e-16;        // same units as the integral
    int max_subdivisions = 2000;   // panel count ceiling per 1-D integral
    double tail_cutoff = 60.0;     // dimensionless decay lengths kept in k and zeta
};

struct MatsubaraSpec {
    double temperature = 0.0;      // K, set per run
    int max_terms = 5000;
    double term_rel_tol = 1e-10;
    // The m = 0 term always enters with half weight; fixed by the underlying
    // contour argument, not tunable.
    static constexpr double zero_term_weight = 0.5;
};

struct IntegralResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
};

struct SumResult {
    double value = 0.0;     // includes the k_B T prefactor
    double error = 0.0;
    int terms = 0;          // Matsubara indices evaluated, m = 0 included
};

// Globally adaptive G7-K15 on [a, b]: repeatedly bisect the panel with the
// largest error estimate until sum(err) <= rel_tol |I| + abs_tol. Fully
// deterministic: ties break on the left panel and the final value is the
// left-to-right sum over panels. Throws ConvergenceError when the panel
// budget runs out and NumericalDegeneracyError on non-finite integrands.
IntegralResult adaptive_gk(const std::function<double(double)>& f, double a, double b,
                           const QuadratureSpec& spec);

// integral_0^inf f(k_perp) dk_perp for integrands, k_perp * (cavity kernel),
// that decay like exp(-2 kappa_g min_gap). Transformed to t = kappa_g *
// min_gap, which makes the decay material independent and puts the cutoff at
// t = tail_cutoff; gap_eps_mu_zeta_sq = eps_g mu_g zeta^2 fixes the kappa_g
// <-> k_perp map at this frequency (pass 0 at zero frequency).
IntegralResult integrate_kperp(const std::function<double(double)>& f,
                               double gap_eps_mu_zeta_sq, double min_gap,
                               const QuadratureSpec& spec);

// integral_0^inf g(zeta) dzeta for per-frequency aggregates that die off
// beyond zeta ~ c / min_gap. No hbar/2pi prefactor; callers own physics
// constants.
IntegralResult integrate_zeta(const std::function<double(double)>& g, double min_gap,
                              const QuadratureSpec& spec);

// k_B T * [g(0)/2 + sum_{m>=1} g(zeta_m)], zeta_m = m * 2 pi k_B T / hbar.
// g receives (zeta, is_zero_term). Stops once |term| <= term_rel_tol *
// |partial| holds for three consecutive terms; throws ConvergenceError at
// max_terms. The error field combines the tail bound with nothing else;
// callers fold in their inner quadrature errors.
SumResult matsubara_sum(const std::function<double(double, bool)>& g,
                        const MatsubaraSpec& spec);

double matsubara_frequency(double temperature, int m);

}  // namespace casimir
