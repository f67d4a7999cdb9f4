#include "casimir/multilayer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "casimir/errors.hpp"

namespace casimir {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

struct DeltaPair {
    double d1;  // wall
    double d2;  // slab
};

DeltaPair deltas(Polarization q, const SpectralPoint& pt) {
    return {reflection_delta(Interface::wall, q, pt),
            reflection_delta(Interface::slab, q, pt)};
}

// U, V of the gap on `side`, i.e. the composite formed by the OTHER gap
// (width a_other) plus slab. E_other = exp(-2 kappa_g a_other),
// F = exp(-2 kappa_2 b).
struct CompositeUV {
    double U;
    double V;
};

CompositeUV composite_uv(const DeltaPair& d, double e_other, double f_slab) {
    const double d1d2 = d.d1 * d.d2;
    const double core = 1.0 - d1d2 * e_other;           // shared subexpression
    const double inner = d.d2 - d.d1 * e_other;         // slab-side composite numerator
    return {d1d2 * core - d.d1 * inner * f_slab,
            core - d.d2 * inner * f_slab};
}

double invd_from_uv(const CompositeUV& uv, double e_self) {
    const double num = uv.U * e_self;
    const double den = uv.V - num;
    const double scale = std::max(std::abs(uv.V), std::abs(num));
    if (std::abs(den) <= 1e3 * std::numeric_limits<double>::epsilon() * scale)
        throw NumericalDegeneracyError(
            "cavity denominator V - U exp(-2 kappa a) vanished at working precision");
    return num / den;
}

}  // namespace

CavityGeometry CavityGeometry::from_gaps(double a_plus, double a_minus, double b) {
    require(a_plus > 0.0 && a_minus > 0.0 && b > 0.0,
            "CavityGeometry: all three layer widths must be > 0");
    CavityGeometry g;
    g.a_plus = a_plus;
    g.a_minus = a_minus;
    g.b = b;
    g.c = a_plus + b + a_minus;
    g.h = a_plus + a_minus;
    return g;
}

CavityGeometry CavityGeometry::from_h_delta(double h, double b, double delta) {
    require(h > 0.0, "CavityGeometry: h must be > 0");
    require(std::abs(delta) < 0.5 * h, "CavityGeometry: |delta| must be < h/2");
    return from_gaps(0.5 * h + delta, 0.5 * h - delta, b);
}

double decaying_exp(double x) {
    if (!(x >= 0.0)) throw std::domain_error("decaying_exp: x must be >= 0");
    if (x > 700.0) return 0.0;
    return std::exp(-x);
}

GapSumPair gap_reflection_sums(Polarization q, const SpectralPoint& pt,
                               const CavityGeometry& geom) {
    const DeltaPair d = deltas(q, pt);
    if (d.d2 == 0.0) {
        // invisible slab: both gaps see the same three-layer cavity of width
        // c; share one evaluation so the net difference is exactly zero
        const double x = d.d1 * d.d1 * decaying_exp(2.0 * pt.kappa_g * geom.c);
        if (1.0 - x == 0.0)
            throw NumericalDegeneracyError(
                "cavity denominator 1 - Delta1^2 exp(-2 kappa c) vanished");
        const double val = x / (1.0 - x);
        return {val, val};
    }
    const double e_plus = decaying_exp(2.0 * pt.kappa_g * geom.a_plus);
    const double e_minus = decaying_exp(2.0 * pt.kappa_g * geom.a_minus);
    const double f_slab = decaying_exp(2.0 * pt.kappa_2 * geom.b);
    // 1/d^+ folds the right gap (a_minus) into the composite, and vice versa
    const CompositeUV uv_for_left = composite_uv(d, e_minus, f_slab);
    const CompositeUV uv_for_right = composite_uv(d, e_plus, f_slab);
    return {invd_from_uv(uv_for_left, e_plus), invd_from_uv(uv_for_right, e_minus)};
}

double gap_reflection_sum(Side side, Polarization q, const SpectralPoint& pt,
                          const CavityGeometry& geom) {
    const GapSumPair p = gap_reflection_sums(q, pt, geom);
    return side == Side::left ? p.left : p.right;
}

DisplacementKernels displacement_kernels(Polarization q, const SpectralPoint& pt,
                                         double h, double b) {
    require(h > 0.0 && b > 0.0, "displacement_kernels: h and b must be > 0");
    const DeltaPair d = deltas(q, pt);
    const double eh = decaying_exp(pt.kappa_g * h);
    const double f = decaying_exp(2.0 * pt.kappa_2 * b);
    const double d1sq = d.d1 * d.d1;
    const double d2sq = d.d2 * d.d2;
    return {2.0 * d.d1 * d.d2 * (1.0 - f) * eh,
            1.0 - d2sq * f + d1sq * (d2sq - f) * eh * eh};
}

DisplacementKernels lifshitz_limit_kernels(Polarization q, const SpectralPoint& pt,
                                           double h) {
    require(h > 0.0, "lifshitz_limit_kernels: h must be > 0");
    const DeltaPair d = deltas(q, pt);
    const double eh = decaying_exp(pt.kappa_g * h);
    const double d1d2 = d.d1 * d.d2;
    return {2.0 * d1d2 * eh, 1.0 + d1d2 * d1d2 * eh * eh};
}

double displacement_ratio(const DisplacementKernels& k, double kappa_g, double delta) {
    if (delta == 0.0) return 0.0;
    const double mag = std::abs(delta);
    // multiply numerator and denominator of A sinh / (B - A cosh) by
    // 2 exp(-2 kappa |delta|): every exponential then decays
    const double e2 = decaying_exp(2.0 * kappa_g * mag);
    const double e4 = e2 * e2;
    const double num = k.A * (1.0 - e4);
    const double den = 2.0 * k.B * e2 - k.A * (1.0 + e4);
    if (den == 0.0) {
        if (num == 0.0) return 0.0;  // dead kernel (A = 0) beyond exp range
        throw NumericalDegeneracyError(
            "displacement denominator B - A cosh(2 kappa delta) vanished");
    }
    const double r = num / den;
    return delta > 0.0 ? r : -r;
}

double net_round_trip_difference(const SpectralPoint& pt, const CavityGeometry& geom) {
    double sum = 0.0;
    for (const auto q : {Polarization::te, Polarization::tm}) {
        const GapSumPair p = gap_reflection_sums(q, pt, geom);
        sum += p.right - p.left;
    }
    return sum;
}

double composite_stack_delta(Polarization q, const SpectralPoint& pt,
                             double a_minus, double b) {
    require(a_minus > 0.0 && b > 0.0, "composite_stack_delta: widths must be > 0");
    const DeltaPair d = deltas(q, pt);
    const double e_minus = decaying_exp(2.0 * pt.kappa_g * a_minus);
    const double f = decaying_exp(2.0 * pt.kappa_2 * b);
    // Two-interface Airy folding r = (r12 + r23 x) / (1 + r12 r23 x) on the
    // physical amplitudes r = -Delta seen from the gap, +Delta seen from the
    // layer. First fold the far wall across the a_minus gap onto the slab's
    // back face, then fold that composite across the slab thickness.
    const double back_den = 1.0 - d.d1 * d.d2 * e_minus;
    if (back_den == 0.0)
        throw NumericalDegeneracyError("composite_stack_delta: back-face denominator vanished");
    const double r_back = (d.d2 - d.d1 * e_minus) / back_den;
    const double front_den = 1.0 - d.d2 * r_back * f;
    if (front_den == 0.0)
        throw NumericalDegeneracyError("composite_stack_delta: front-face denominator vanished");
    const double r_stack = (-d.d2 + r_back * f) / front_den;
    return -r_stack;  // back to the Delta convention
}

double geometric_round_trips(double r_left, double r_right, double kappa_g,
                             double gap, int n_terms) {
    require(n_terms >= 1, "geometric_round_trips: n_terms must be >= 1");
    require(gap > 0.0 && kappa_g >= 0.0, "geometric_round_trips: bad gap or kappa");
    const double rho = r_left * r_right * decaying_exp(2.0 * kappa_g * gap);
    if (std::abs(rho) >= 1.0)
        throw std::domain_error("geometric_round_trips: |rho| >= 1 does not converge");
    double sum = 0.0;
    double term = 1.0;
    for (int n = 1; n <= n_terms; ++n) {
        term *= rho;
        sum += term;
    }
    return sum;
}

}  // namespace casimir
