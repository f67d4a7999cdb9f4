#include "casimir/force.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "casimir/constants.hpp"

namespace casimir {

namespace {

using PointKernel = std::function<double(const SpectralPoint&)>;

struct Aggregate {
    double value = 0.0;  // raw double sum/integral, no physics prefactor
    double error = 0.0;
    int terms = 0;
};

// Common engine: integral over k_perp of `kernel` at every frequency, then
// either the Matsubara sum (finite T, k_B T folded in) or the plain zeta
// integral (T = 0, no hbar/2pi yet). Inner quadrature errors are accumulated
// alongside the outer estimate.
Aggregate spectral_aggregate(const MaterialSet& mats, double min_gap,
                             const PointKernel& kernel, double temperature,
                             const QuadratureSpec& quad, MatsubaraSpec sum_spec) {
    if (!(min_gap > 0.0)) throw std::domain_error("spectral_aggregate: min_gap must be > 0");
    if (!(temperature >= 0.0)) throw std::domain_error("temperature must be >= 0");

    auto kperp_integral = [&](const SpectralFactory& fac, double* err_acc) {
        auto f = [&](double k) { return kernel(fac.at(k)); };
        const double w = fac.gap().eps_zeta_sq * fac.gap().mu;
        const IntegralResult r = integrate_kperp(f, w, min_gap, quad);
        *err_acc += r.error;
        return r.value;
    };

    Aggregate out;
    if (temperature == 0.0) {
        auto g = [&](double zeta) {
            double scratch = 0.0;
            return kperp_integral(SpectralFactory(zeta, mats), &scratch);
        };
        const IntegralResult r = integrate_zeta(g, min_gap, quad);
        out.value = r.value;
        // inner integrals hold a relative tolerance, so their aggregate
        // contribution is bounded by rel_tol * |outer value|
        out.error = r.error + quad.rel_tol * std::abs(r.value) + quad.abs_tol;
        out.terms = 0;
        return out;
    }

    sum_spec.temperature = temperature;
    double inner_err = 0.0;
    auto g = [&](double zeta, bool is_zero) {
        double e = 0.0;
        const double v = is_zero
                             ? kperp_integral(SpectralFactory::static_factory(mats), &e)
                             : kperp_integral(SpectralFactory(zeta, mats), &e);
        inner_err += (is_zero ? MatsubaraSpec::zero_term_weight : 1.0) * e;
        return v;
    };
    const SumResult s = matsubara_sum(g, sum_spec);
    out.value = s.value;
    out.error = s.error + k_boltzmann * temperature * inner_err;
    out.terms = s.terms;
    return out;
}

// physics prefactor turning the raw aggregate into a pressure:
//   finite T: F = S / pi          (k_B T already inside S)
//   zero T:   F = hbar S / (2 pi^2)
double pressure_prefactor(double temperature) {
    return temperature > 0.0 ? 1.0 / pi : hbar / (2.0 * pi * pi);
}

ForceResult to_force(const Aggregate& agg, double temperature) {
    const double p = pressure_prefactor(temperature);
    return {p * agg.value, p * agg.error, agg.terms, temperature};
}

double check_geometry_hb(double h, double b, double delta) {
    if (!(h > 0.0 && b > 0.0)) throw std::domain_error("h and b must be > 0");
    if (!(std::abs(delta) < 0.5 * h)) throw std::domain_error("|delta| must be < h/2");
    return 0.5 * h - std::abs(delta);  // narrower gap width
}

}  // namespace

ForceResult pressure_zero_temperature(const CavityGeometry& geom, const MaterialSet& mats,
                                      const QuadratureSpec& quad) {
    return pressure_finite_temperature(geom, mats, 0.0, quad, {});
}

ForceResult pressure_finite_temperature(const CavityGeometry& geom, const MaterialSet& mats,
                                        double temperature, const QuadratureSpec& quad,
                                        const MatsubaraSpec& sum_spec) {
    auto kernel = [&geom](const SpectralPoint& pt) {
        return pt.k_perp * pt.kappa_g * net_round_trip_difference(pt, geom);
    };
    return to_force(
        spectral_aggregate(mats, geom.min_gap(), kernel, temperature, quad, sum_spec),
        temperature);
}

ForceResult pressure_displacement_form(double h, double b, double delta,
                                       const MaterialSet& mats, double temperature,
                                       const QuadratureSpec& quad,
                                       const MatsubaraSpec& sum_spec) {
    const double min_gap = check_geometry_hb(h, b, delta);
    auto kernel = [h, b, delta](const SpectralPoint& pt) {
        double s = 0.0;
        for (const auto q : {Polarization::te, Polarization::tm})
            s += displacement_ratio(displacement_kernels(q, pt, h, b), pt.kappa_g, delta);
        return pt.k_perp * pt.kappa_g * s;
    };
    return to_force(spectral_aggregate(mats, min_gap, kernel, temperature, quad, sum_spec),
                    temperature);
}

TaylorCoefficient taylor_coefficient(double h, double b, const MaterialSet& mats,
                                     double temperature, const QuadratureSpec& quad,
                                     const MatsubaraSpec& sum_spec) {
    check_geometry_hb(h, b, 0.0);
    auto kernel = [h, b](const SpectralPoint& pt) {
        double s = 0.0;
        for (const auto q : {Polarization::te, Polarization::tm}) {
            const DisplacementKernels k = displacement_kernels(q, pt, h, b);
            const double den = k.B - k.A;
            if (den != 0.0) s += k.A / den;
        }
        return pt.k_perp * pt.kappa_g * pt.kappa_g * s;
    };
    const Aggregate agg =
        spectral_aggregate(mats, 0.5 * h, kernel, temperature, quad, sum_spec);
    // d/d delta of the displacement form at delta = 0 doubles the pressure
    // prefactor
    const double p = 2.0 * pressure_prefactor(temperature);
    return {p * agg.value, p * agg.error, agg.terms, temperature};
}

double ideal_pressure(double h, double delta) {
    check_geometry_hb(h, 1.0, delta);
    const double coeff = hbar * c_light * pi * pi / 240.0;
    const double near = 0.5 * h - delta;
    const double far = 0.5 * h + delta;
    auto inv4 = [](double d) { return 1.0 / (d * d * d * d); };
    return coeff * (inv4(near) - inv4(far));
}

double ideal_taylor_coefficient(double h) {
    if (!(h > 0.0)) throw std::domain_error("h must be > 0");
    return 16.0 * hbar * c_light * pi * pi / (15.0 * h * h * h * h * h);
}

ForceResult pressure_lifshitz_difference(double h, double delta, const MaterialSet& mats,
                                         double temperature, const QuadratureSpec& quad,
                                         const MatsubaraSpec& sum_spec) {
    const double min_gap = 0.5 * h - std::abs(delta);
    if (!(h > 0.0) || !(min_gap > 0.0))
        throw std::domain_error("pressure_lifshitz_difference: need 0 < |delta| < h/2");
    auto kernel = [h, delta](const SpectralPoint& pt) {
        double s = 0.0;
        for (const auto q : {Polarization::te, Polarization::tm})
            s += displacement_ratio(lifshitz_limit_kernels(q, pt, h), pt.kappa_g, delta);
        return pt.k_perp * pt.kappa_g * s;
    };
    return to_force(spectral_aggregate(mats, min_gap, kernel, temperature, quad, sum_spec),
                    temperature);
}

ForceResult thickness_correction(double h, double b, double delta, const MaterialSet& mats,
                                 double temperature, const QuadratureSpec& quad,
                                 const MatsubaraSpec& sum_spec) {
    const double min_gap = check_geometry_hb(h, b, delta);
    auto kernel = [h, b, delta](const SpectralPoint& pt) {
        const double mag = std::abs(delta);
        if (mag == 0.0) return 0.0;
        const double f = decaying_exp(2.0 * pt.kappa_2 * b);
        if (f == 0.0) return 0.0;  // slab already optically infinite here
        const double kg = pt.kappa_g;
        const double eh2 = decaying_exp(2.0 * kg * h);
        const double x4 = 4.0 * kg * mag;
        const double one_minus_e4 = x4 > 700.0 ? 1.0 : -std::expm1(-x4);
        const double em = decaying_exp(2.0 * kg * (0.5 * h - mag));
        const double ep = decaying_exp(2.0 * kg * (0.5 * h + mag));
        double s = 0.0;
        for (const auto q : {Polarization::te, Polarization::tm}) {
            const double d1 = reflection_delta(Interface::wall, q, pt);
            const double d2 = reflection_delta(Interface::slab, q, pt);
            const double rr = d1 * d2;
            // B - A cosh(2 kappa delta) factors exactly into these two; the
            // subtractive form is roundoff noise once |Delta| -> 1 at low zeta
            const double gm = 1.0 - rr * em;
            const double gp = 1.0 - rr * ep;
            if (gm == 0.0 || gp == 0.0) continue;
            // 1 - d2^2 from the interface ratios so the near-metal limit keeps
            // full relative precision; divergent gamma means d2^2 = 1 exactly
            const double g2 = q == Polarization::tm ? pt.gamma_tm_2 : pt.gamma_te_2;
            double slab_leak = 0.0;
            if (std::isfinite(g2)) {
                const double sum = pt.kappa_2 + g2 * kg;
                slab_leak = 4.0 * pt.kappa_2 * g2 * kg / (sum * sum);
            }
            const double leak = slab_leak * (1.0 - d1 * d1 * eh2);
            s += f * rr * em * one_minus_e4 * leak / (gm * gm * gp * gp);
        }
        const double signed_s = delta > 0.0 ? s : -s;
        return -pt.k_perp * pt.kappa_g * signed_s;
    };
    return to_force(spectral_aggregate(mats, min_gap, kernel, temperature, quad, sum_spec),
                    temperature);
}

ForceResult halfspace_pressure(double gap, const MaterialSet& mats, double temperature,
                               const QuadratureSpec& quad, const MatsubaraSpec& sum_spec) {
    if (!(gap > 0.0)) throw std::domain_error("halfspace_pressure: gap must be > 0");
    auto kernel = [gap](const SpectralPoint& pt) {
        double s = 0.0;
        for (const auto q : {Polarization::te, Polarization::tm}) {
            const double d1 = reflection_delta(Interface::wall, q, pt);
            const double d2 = reflection_delta(Interface::slab, q, pt);
            const double rho = d1 * d2 * decaying_exp(2.0 * pt.kappa_g * gap);
            if (rho != 1.0) s += rho / (1.0 - rho);
        }
        return pt.k_perp * pt.kappa_g * s;
    };
    ForceResult r = to_force(
        spectral_aggregate(mats, gap, kernel, temperature, quad, sum_spec), temperature);
    r.pressure = -r.pressure;  // attraction toward the wall
    return r;
}

}  // namespace casimir
