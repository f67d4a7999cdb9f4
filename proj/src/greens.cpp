#include "casimir/greens.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"

namespace casimir {

namespace {

using Matrix8 = Eigen::Matrix<double, 8, 8>;
using Vector8 = Eigen::Matrix<double, 8, 1>;

// Relative flux weights (eps/kappa^2 for TM, 1/mu for TE), normalised so the
// gap carries weight 1 and the derivative rows are divided by kappa_g. The
// wall/slab entries then multiply kappa_i directly.
struct FluxRatios {
    double wall;
    double slab;
};

FluxRatios flux_ratios(Polarization q, const SpectralPoint& pt) {
    if (q == Polarization::tm)
        return {pt.gamma_tm_1 * pt.kappa_g / pt.kappa_1,
                pt.gamma_tm_2 * pt.kappa_g / pt.kappa_2};
    return {pt.kappa_1 / (pt.gamma_te_1 * pt.kappa_g),
            pt.kappa_2 / (pt.gamma_te_2 * pt.kappa_g)};
}

GreensSolution solve_scalar(Polarization q, const SpectralPoint& pt,
                            const CavityGeometry& geom, double z_source,
                            Side source_side, double amplitude) {
    const double a_plus = geom.a_plus;
    const double a_minus = geom.a_minus;
    const double top = geom.a_plus + geom.b;
    if (source_side == Side::left) {
        if (!(z_source > 0.0 && z_source < a_plus))
            throw std::domain_error("source must lie strictly inside the left gap");
    } else {
        if (!(z_source > top && z_source < geom.c))
            throw std::domain_error("source must lie strictly inside the right gap");
    }

    const double kg = pt.kappa_g;
    const double ea = decaying_exp(kg * a_plus);
    const double eb = decaying_exp(pt.kappa_2 * geom.b);
    const double em = decaying_exp(kg * a_minus);
    const auto [f1, f2] = flux_ratios(q, pt);

    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    if (source_side == Side::left) {
        s0 = amplitude * decaying_exp(kg * z_source);
        s1 = amplitude * decaying_exp(kg * (a_plus - z_source));
    } else {
        s2 = amplitude * decaying_exp(kg * (z_source - top));
        s3 = amplitude * decaying_exp(kg * (geom.c - z_source));
    }

    // Unknowns: [A, C1, C2, E1, E2, D1, D2, B] in the scaled basis of
    // GreensSolution. Value and flux continuity at z = 0, a+, a+ + b, c.
    Matrix8 a = Matrix8::Zero();
    Vector8 rhs;
    a(0, 0) = 1.0;  a(0, 1) = -ea;      a(0, 2) = -1.0;            rhs(0) = s0;
    a(1, 0) = f1;   a(1, 1) = -ea;      a(1, 2) = 1.0;             rhs(1) = s0;
    a(2, 1) = 1.0;  a(2, 2) = ea;       a(2, 3) = -eb;
                    a(2, 4) = -1.0;                                rhs(2) = -s1;
    a(3, 1) = 1.0;  a(3, 2) = -ea;      a(3, 3) = -f2 * eb;
                    a(3, 4) = f2;                                  rhs(3) = s1;
    a(4, 3) = 1.0;  a(4, 4) = eb;       a(4, 5) = -em;
                    a(4, 6) = -1.0;                                rhs(4) = s2;
    a(5, 3) = f2;   a(5, 4) = -f2 * eb; a(5, 5) = -em;
                    a(5, 6) = 1.0;                                 rhs(5) = s2;
    a(6, 5) = 1.0;  a(6, 6) = em;       a(6, 7) = -1.0;            rhs(6) = -s3;
    a(7, 5) = 1.0;  a(7, 6) = -em;      a(7, 7) = f1;              rhs(7) = s3;

    // Row equilibration keeps the pivoting honest when the walls are near
    // conductors and the flux ratios dwarf the value rows.
    Matrix8 as = a;
    Vector8 bs = rhs;
    for (int i = 0; i < 8; ++i) {
        const double scale = as.row(i).cwiseAbs().maxCoeff();
        if (!(scale > 0.0) || !std::isfinite(scale))
            throw NumericalDegeneracyError(
                "green solve: interface row vanished or is not finite");
        as.row(i) /= scale;
        bs(i) /= scale;
    }

    Eigen::PartialPivLU<Matrix8> lu(as);
    const double rc = lu.rcond();
    if (!(rc > 1e-14)) {
        std::ostringstream msg;
        msg << "green solve: continuity system singular at working precision"
            << " (reciprocal condition number " << rc << ")";
        throw NumericalDegeneracyError(msg.str());
    }
    Vector8 x = lu.solve(bs);
    x += lu.solve(bs - as * x);

    // per-row relative defect, with the denominator floored near the dominant
    // row scale: rows many orders below it describe physically-zero waves
    // whose defect is set by roundoff imported from the large components
    double dens[8];
    double den_top = 0.0;
    for (int i = 0; i < 8; ++i) {
        dens[i] = as.row(i).cwiseAbs().dot(x.cwiseAbs()) + std::abs(bs(i));
        den_top = std::max(den_top, dens[i]);
    }
    if (!(den_top > 0.0))
        throw NumericalDegeneracyError("green solve: solution collapsed to zero");
    double max_res = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double num = std::abs(as.row(i).dot(x) - bs(i));
        max_res = std::max(max_res, num / std::max(dens[i], 1e-6 * den_top));
    }
    if (!(max_res < 1e-8)) {
        std::ostringstream msg;
        msg << "green solve: continuity residual " << max_res
            << " exceeds working precision";
        throw NumericalDegeneracyError(msg.str());
    }

    GreensSolution sol;
    sol.polarization = q;
    sol.source_side = source_side;
    sol.z_source = z_source;
    sol.wall_left = x(0);
    sol.gap_plus_out = x(1);
    sol.gap_plus_in = x(2);
    sol.slab_fwd = x(3);
    sol.slab_back = x(4);
    sol.gap_minus_out = x(5);
    sol.gap_minus_in = x(6);
    sol.wall_right = x(7);
    sol.source_amplitude = amplitude;
    sol.max_residual = max_res;
    sol.geometry = geom;
    sol.point = pt;
    return sol;
}

double gap_basis_plus(double kg, double gap_top, double z) {
    return decaying_exp(kg * (gap_top - z));
}

double gap_basis_minus(double kg, double gap_bottom, double z) {
    return decaying_exp(kg * (z - gap_bottom));
}

}  // namespace

double GreensSolution::evaluate_homogeneous(double z) const {
    const double kg = point.kappa_g;
    const double top = geometry.a_plus + geometry.b;
    if (z < 0.0) return wall_left * decaying_exp(-point.kappa_1 * z);
    if (z <= geometry.a_plus)
        return gap_plus_out * gap_basis_plus(kg, geometry.a_plus, z) +
               gap_plus_in * gap_basis_minus(kg, 0.0, z);
    if (z <= top)
        return slab_fwd * decaying_exp(point.kappa_2 * (top - z)) +
               slab_back * decaying_exp(point.kappa_2 * (z - geometry.a_plus));
    if (z <= geometry.c)
        return gap_minus_out * gap_basis_plus(kg, geometry.c, z) +
               gap_minus_in * gap_basis_minus(kg, top, z);
    return wall_right * decaying_exp(point.kappa_1 * (z - geometry.c));
}

double GreensSolution::evaluate(double z) const {
    double g = evaluate_homogeneous(z);
    const double top = geometry.a_plus + geometry.b;
    const bool in_left = z >= 0.0 && z <= geometry.a_plus;
    const bool in_right = z >= top && z <= geometry.c;
    if ((source_side == Side::left && in_left) ||
        (source_side == Side::right && in_right))
        g += source_amplitude * decaying_exp(point.kappa_g * std::abs(z - z_source));
    return g;
}

double tm_source_amplitude(const SpectralPoint& pt, const MaterialSet& mats) {
    return -pt.kappa_g /
           (2.0 * mats.gap.eps(pt.zeta) * mats.gap.mu(pt.zeta));
}

double te_source_amplitude(const SpectralPoint& pt, const MaterialSet& mats) {
    const double mu_g = mats.gap.mu(pt.zeta);
    return -mu_g * pt.zeta * pt.zeta /
           (2.0 * pt.kappa_g * c_light * c_light);
}

GreensSolution solve_tm(const SpectralPoint& pt, const CavityGeometry& geom,
                        const MaterialSet& mats, double z_source, Side source_side) {
    return solve_scalar(Polarization::tm, pt, geom, z_source, source_side,
                        tm_source_amplitude(pt, mats));
}

GreensSolution solve_te(const SpectralPoint& pt, const CavityGeometry& geom,
                        const MaterialSet& mats, double z_source, Side source_side) {
    return solve_scalar(Polarization::te, pt, geom, z_source, source_side,
                        te_source_amplitude(pt, mats));
}

ReflectionMatrix homogeneous_matrix(Polarization q, const SpectralPoint& pt,
                                    const CavityGeometry& geom, const MaterialSet& mats,
                                    Side side) {
    const double amplitude = q == Polarization::tm ? tm_source_amplitude(pt, mats)
                                                   : te_source_amplitude(pt, mats);
    if (amplitude == 0.0) return {};  // static TE carries no weight

    const double width = side == Side::left ? geom.a_plus : geom.a_minus;
    const double bottom = side == Side::left ? 0.0 : geom.a_plus + geom.b;
    // probe close to either wall: each image family then dominates one of
    // the two observations, so separating them stays well conditioned even
    // for deep gaps
    const double z1 = bottom + 0.02 * width;
    const double z2 = bottom + 0.98 * width;
    const auto sol1 = solve_scalar(q, pt, geom, z1, side, amplitude);
    const auto sol2 = solve_scalar(q, pt, geom, z2, side, amplitude);

    const double kg = pt.kappa_g;
    const double top = bottom + width;
    const double p1 = gap_basis_plus(kg, top, z1), q1 = gap_basis_minus(kg, bottom, z1);
    const double p2 = gap_basis_plus(kg, top, z2), q2 = gap_basis_minus(kg, bottom, z2);
    const double det = p1 * q2 - p2 * q1;
    if (det == 0.0 || !std::isfinite(det))
        throw NumericalDegeneracyError(
            "green solve: source positions degenerate, cannot separate images");

    const double c1a = (side == Side::left ? sol1.gap_plus_out : sol1.gap_minus_out) / amplitude;
    const double c1b = (side == Side::left ? sol2.gap_plus_out : sol2.gap_minus_out) / amplitude;
    const double c2a = (side == Side::left ? sol1.gap_plus_in : sol1.gap_minus_in) / amplitude;
    const double c2b = (side == Side::left ? sol2.gap_plus_in : sol2.gap_minus_in) / amplitude;

    ReflectionMatrix m;
    m.pp = (c1a * q2 - c1b * q1) / det;
    m.pm = (p1 * c1b - p2 * c1a) / det;
    m.mp = (c2a * q2 - c2b * q1) / det;
    m.mm = (p1 * c2b - p2 * c2a) / det;
    return m;
}

ReflectionMatrix homogeneous_matrix_closed_form(Polarization q, const SpectralPoint& pt,
                                                const CavityGeometry& geom, Side side) {
    if (side == Side::right) {
        // mirror the cavity; the scaled bases swap roles in both slots
        const ReflectionMatrix m =
            homogeneous_matrix_closed_form(q, pt, geom.mirrored(), Side::left);
        return {m.mm, m.mp, m.pm, m.pp};
    }
    const double kg = pt.kappa_g;
    // single bounces reflect with +Delta for the TM amplitude and -Delta for
    // the TE one; the even-order round-trip products are insensitive
    const double sign = q == Polarization::tm ? 1.0 : -1.0;
    const double d1 = reflection_delta(Interface::wall, q, pt);
    const double ds = composite_stack_delta(q, pt, geom.a_minus, geom.b);
    const double rho = d1 * ds * decaying_exp(2.0 * kg * geom.a_plus);
    const double den = 1.0 - rho;
    if (den == 0.0)
        throw NumericalDegeneracyError("cavity round-trip denominator vanished");
    ReflectionMatrix m;
    m.pp = sign * ds / den;
    m.pm = d1 * ds * decaying_exp(kg * geom.a_plus) / den;
    m.mp = m.pm;
    m.mm = sign * d1 / den;
    return m;
}

ReflectionMatrix gzz_matrix(const ReflectionMatrix& tm, const SpectralPoint& pt) {
    const double ratio = pt.k_perp * pt.k_perp / (pt.kappa_g * pt.kappa_g);
    return {ratio * tm.pp, -ratio * tm.pm, -ratio * tm.mp, ratio * tm.mm};
}

double gap_green_value(const ReflectionMatrix& m, double amplitude,
                       const SpectralPoint& pt, const CavityGeometry& geom, double z,
                       double z_source) {
    const double kg = pt.kappa_g;
    const double fz_p = gap_basis_plus(kg, geom.a_plus, z);
    const double fz_m = gap_basis_minus(kg, 0.0, z);
    const double fs_p = gap_basis_plus(kg, geom.a_plus, z_source);
    const double fs_m = gap_basis_minus(kg, 0.0, z_source);
    const double hom = m.pp * fz_p * fs_p + m.pm * fz_p * fs_m +
                       m.mp * fz_m * fs_p + m.mm * fz_m * fs_m;
    return amplitude * (hom + decaying_exp(kg * std::abs(z - z_source)));
}

double gap_gzz_value(const ReflectionMatrix& tm, double tm_amplitude,
                     const SpectralPoint& pt, const CavityGeometry& geom, double z,
                     double z_source) {
    const double kg = pt.kappa_g;
    const double ratio = pt.k_perp * pt.k_perp / (kg * kg);
    const ReflectionMatrix n = gzz_matrix(tm, pt);
    const double fz_p = gap_basis_plus(kg, geom.a_plus, z);
    const double fz_m = gap_basis_minus(kg, 0.0, z);
    const double fs_p = gap_basis_plus(kg, geom.a_plus, z_source);
    const double fs_m = gap_basis_minus(kg, 0.0, z_source);
    const double hom = n.pp * fz_p * fs_p + n.pm * fz_p * fs_m +
                       n.mp * fz_m * fs_p + n.mm * fz_m * fs_m;
    return tm_amplitude *
           (hom - ratio * decaying_exp(kg * std::abs(z - z_source)));
}

double closed_form_gap_green(Polarization q, const SpectralPoint& pt,
                             const CavityGeometry& geom, const MaterialSet& mats, double z,
                             double z_source) {
    const double amplitude = q == Polarization::tm ? tm_source_amplitude(pt, mats)
                                                   : te_source_amplitude(pt, mats);
    const double kg = pt.kappa_g;
    const double sign = q == Polarization::tm ? 1.0 : -1.0;
    const double d1 = reflection_delta(Interface::wall, q, pt);
    const double ds = composite_stack_delta(q, pt, geom.a_minus, geom.b);
    const double rho = d1 * ds * decaying_exp(2.0 * kg * geom.a_plus);
    const double den = 1.0 - rho;
    if (den == 0.0)
        throw NumericalDegeneracyError("cavity round-trip denominator vanished");
    const double dz = std::abs(z - z_source);
    // image sum: one bounce off the stack, one off the wall (odd bounces
    // carry the polarization sign), the pair of double bounces, then the
    // round-trip series closes all higher orders
    const double images =
        sign * ds * decaying_exp(kg * (2.0 * geom.a_plus - z - z_source)) +
        sign * d1 * decaying_exp(kg * (z + z_source)) +
        d1 * ds * decaying_exp(kg * (2.0 * geom.a_plus - dz)) +
        rho * decaying_exp(kg * dz);
    return amplitude * (images / den + decaying_exp(kg * dz));
}

double closed_form_gap_gzz(const SpectralPoint& pt, const CavityGeometry& geom,
                           const MaterialSet& mats, double z, double z_source) {
    const double amplitude = tm_source_amplitude(pt, mats);
    const double kg = pt.kappa_g;
    const double ratio = pt.k_perp * pt.k_perp / (kg * kg);
    const double d1 = reflection_delta(Interface::wall, Polarization::tm, pt);
    const double ds = composite_stack_delta(Polarization::tm, pt, geom.a_minus, geom.b);
    const double rho = d1 * ds * decaying_exp(2.0 * kg * geom.a_plus);
    const double den = 1.0 - rho;
    if (den == 0.0)
        throw NumericalDegeneracyError("cavity round-trip denominator vanished");
    const double dz = std::abs(z - z_source);
    // z+z' images keep their sign, z-z' images and the source flip
    const double images =
        ds * decaying_exp(kg * (2.0 * geom.a_plus - z - z_source)) +
        d1 * decaying_exp(kg * (z + z_source)) -
        d1 * ds * decaying_exp(kg * (2.0 * geom.a_plus - dz)) -
        rho * decaying_exp(kg * dz);
    return amplitude * ratio * (images / den - decaying_exp(kg * dz));
}

namespace {

// Coincidence-limit coefficient of the stress combination for one (s, t)
// pair with s t = st, given the full g_xx and g_yy coefficients. The TM zz
// and cross terms are already folded in through the field relations.
double stress_coefficient(int st, double m, double n, double eps_g, double zc,
                          const SpectralPoint& pt) {
    const double k2 = pt.k_perp * pt.k_perp;
    const double kap2 = pt.kappa_g * pt.kappa_g;
    const double gap2 = kap2 - k2;  // eps mu zeta^2 / c^2
    const double electric = eps_g * (m * (1.0 - st * k2 / kap2) + n);
    const double magnetic = zc * (n * (st * kap2 - k2) + st * m * gap2 * gap2 / kap2);
    return electric - magnetic;
}

}  // namespace

StressCertificate stress_cancellation_check(const SpectralPoint& pt,
                                            const CavityGeometry& geom,
                                            const MaterialSet& mats, int z_grid_points) {
    if (!(pt.zeta > 0.0))
        throw std::domain_error("stress check requires zeta > 0");
    if (z_grid_points < 1)
        throw std::domain_error("stress check needs a nonempty z grid");

    const double eps_g = mats.gap.eps(pt.zeta);
    const double mu_g = mats.gap.mu(pt.zeta);
    const double zc = c_light * c_light / (mu_g * pt.zeta * pt.zeta);
    const double g_tm = tm_source_amplitude(pt, mats);
    const double g_te = te_source_amplitude(pt, mats);
    const double kg = pt.kappa_g;

    StressCertificate cert;
    double cross_by_side[2] = {0.0, 0.0};
    for (const Side side : {Side::left, Side::right}) {
        const double width = side == Side::left ? geom.a_plus : geom.a_minus;
        // a gap this deep reflects nothing representable back to the source;
        // its image coefficients cannot be separated, and every coincidence
        // term it would contribute underflows to exactly zero
        if (decaying_exp(1.5 * kg * width) == 0.0) continue;
        const ReflectionMatrix m = homogeneous_matrix(Polarization::tm, pt, geom, mats, side);
        const ReflectionMatrix n = homogeneous_matrix(Polarization::te, pt, geom, mats, side);

        const double scale = decaying_exp(kg * width);
        const double cross = stress_coefficient(-1, g_tm * (m.pm + m.mp) * scale,
                                                g_te * (n.pm + n.mp) * scale, eps_g, zc, pt);
        const double source = stress_coefficient(-1, g_tm, g_te, eps_g, zc, pt);
        const double t_pp = stress_coefficient(+1, g_tm * m.pp, g_te * n.pp, eps_g, zc, pt);
        const double t_mm = stress_coefficient(+1, g_tm * m.mm, g_te * n.mm, eps_g, zc, pt);

        const double denom = std::abs(cross + source);
        if (!(denom > 0.0))
            throw NumericalDegeneracyError("stress check: coincidence part vanished");
        for (int i = 0; i < z_grid_points; ++i) {
            const double z = width * (i + 0.5) / z_grid_points;
            const double fp = decaying_exp(2.0 * kg * (width - z));
            const double fm = decaying_exp(2.0 * kg * z);
            const double residual = std::abs(t_pp * fp + t_mm * fm) / denom;
            cert.zplus_residual = std::max(cert.zplus_residual, residual);
        }
        cross_by_side[side == Side::left ? 0 : 1] = cross;
    }

    cert.force_integrand = pt.k_perp * (cross_by_side[0] - cross_by_side[1]) / 2.0;
    cert.kernel_integrand = pt.k_perp * kg * net_round_trip_difference(pt, geom);
    cert.stress_scale =
        pt.k_perp * (std::abs(cross_by_side[0]) + std::abs(cross_by_side[1])) / 2.0;
    return cert;
}

}  // namespace casimir
