#include "casimir/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"

namespace casimir {

namespace {

// G7-K15 nodes on [0,1] of the positive half, standard Kronrod tables.
constexpr double xgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double wgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Panel {
    double a, b;
    double value;  // K15
    double error;
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double fv[15];
    for (int j = 0; j < 7; ++j) {
        fv[j] = f(center - half * xgk[j]);
        fv[14 - j] = f(center + half * xgk[j]);
    }
    fv[7] = f(center);
    double resk = 0.0, resg = 0.0, resabs = 0.0;
    for (int j = 0; j < 7; ++j) {
        resk += wgk[j] * (fv[j] + fv[14 - j]);
        resabs += wgk[j] * (std::abs(fv[j]) + std::abs(fv[14 - j]));
    }
    resk += wgk[7] * fv[7];
    resabs += wgk[7] * std::abs(fv[7]);
    for (int j = 0; j < 3; ++j) resg += wg[j] * (fv[2 * j + 1] + fv[13 - 2 * j]);
    resg += wg[3] * fv[7];
    // deviation-from-mean magnitude, the scale that makes the error model
    // dimensionless (QUADPACK resasc)
    const double reskh = resk * 0.5;
    double resasc = wgk[7] * std::abs(fv[7] - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += wgk[j] * (std::abs(fv[j] - reskh) + std::abs(fv[14 - j] - reskh));
    const double value = resk * half;
    if (!std::isfinite(value))
        throw NumericalDegeneracyError("quadrature: integrand returned a non-finite value");
    resabs *= half;
    resasc *= half;
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) {
        const double r = std::pow(200.0 * err / resasc, 1.5);
        err = resasc * (r < 1.0 ? r : 1.0);
    }
    constexpr double epmach = 2.220446049250313e-16;
    if (resabs > 1e-290) err = std::max(epmach * 50.0 * resabs, err);
    return Panel{a, b, value, err};
}

IntegralResult adapt_on_seeds(const std::function<double(double)>& f,
                              const std::vector<double>& seeds,
                              const QuadratureSpec& spec) {
    std::vector<Panel> panels;
    panels.reserve(64);
    for (std::size_t i = 0; i + 1 < seeds.size(); ++i)
        if (seeds[i + 1] > seeds[i]) panels.push_back(evaluate_panel(f, seeds[i], seeds[i + 1]));
    if (panels.empty()) return {0.0, 0.0, 0};
    int evals = static_cast<int>(panels.size()) * 15;

    auto sums = [&panels]() {
        double v = 0.0, e = 0.0;
        for (const auto& p : panels) {
            v += p.value;
            e += p.error;
        }
        return std::pair<double, double>{v, e};
    };

    for (;;) {
        auto [value, err] = sums();
        if (err <= spec.rel_tol * std::abs(value) + spec.abs_tol) break;
        if (static_cast<int>(panels.size()) >= spec.max_subdivisions)
            throw ConvergenceError("quadrature: panel budget exhausted", value, err);
        // split the worst panel; ties resolve to the leftmost for determinism
        std::size_t worst = 0;
        for (std::size_t i = 1; i < panels.size(); ++i)
            if (panels[i].error > panels[worst].error) worst = i;
        const Panel old = panels[worst];
        const double mid = 0.5 * (old.a + old.b);
        if (!(old.a < mid && mid < old.b))
            throw ConvergenceError("quadrature: panel no longer splittable", value, err);
        panels[worst] = evaluate_panel(f, old.a, mid);
        panels.push_back(evaluate_panel(f, mid, old.b));
        evals += 30;
    }

    // final pass: left-to-right summation so the result is independent of
    // the refinement history
    std::sort(panels.begin(), panels.end(),
              [](const Panel& x, const Panel& y) { return x.a < y.a; });
    double value = 0.0, err = 0.0;
    for (const auto& p : panels) {
        value += p.value;
        err += p.error;
    }
    return {value, err, evals};
}

// geometric seed ladder {lo, lo + s, lo + 2s, lo + 4s, ...} capped at hi
std::vector<double> geometric_seeds(double lo, double hi, double first_step) {
    std::vector<double> seeds{lo};
    double step = first_step;
    double x = lo + step;
    while (x < hi) {
        seeds.push_back(x);
        step *= 2.0;
        x += step;
    }
    seeds.push_back(hi);
    return seeds;
}

}  // namespace

IntegralResult adaptive_gk(const std::function<double(double)>& f, double a, double b,
                           const QuadratureSpec& spec) {
    if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b))
        throw std::domain_error("adaptive_gk: bad interval");
    if (a == b) return {0.0, 0.0, 0};
    return adapt_on_seeds(f, {a, b}, spec);
}

IntegralResult integrate_kperp(const std::function<double(double)>& f,
                               double gap_eps_mu_zeta_sq, double min_gap,
                               const QuadratureSpec& spec) {
    if (!(min_gap > 0.0)) throw std::domain_error("integrate_kperp: min_gap must be > 0");
    if (!(gap_eps_mu_zeta_sq >= 0.0))
        throw std::domain_error("integrate_kperp: gap eps mu zeta^2 must be >= 0");
    // t = kappa_g * min_gap; k dk = kappa dkappa gives
    //   integral f(k) dk = integral f(k(t)) * t / (min_gap^2 k(t)) dt
    // with k(t) = sqrt(t - t0) sqrt(t + t0) / min_gap, t0 = kappa_g(0) a.
    const double t0 = std::sqrt(gap_eps_mu_zeta_sq) / c_light * min_gap;
    const double t_hi = spec.tail_cutoff;
    if (t0 >= t_hi) return {0.0, 0.0, 0};
    auto g = [&](double t) {
        const double k = std::sqrt(t - t0) * std::sqrt(t + t0) / min_gap;
        if (k <= 0.0) return 0.0;  // boundary node guard; interior nodes keep t > t0
        return f(k) * t / (min_gap * min_gap * k);
    };
    // integrands peak within a few decay lengths; seed finely there
    return adapt_on_seeds(g, geometric_seeds(t0, t_hi, 0.5), spec);
}

IntegralResult integrate_zeta(const std::function<double(double)>& g, double min_gap,
                              const QuadratureSpec& spec) {
    if (!(min_gap > 0.0)) throw std::domain_error("integrate_zeta: min_gap must be > 0");
    const double zeta_scale = c_light / min_gap;
    const double zeta_max = spec.tail_cutoff * zeta_scale;
    return adapt_on_seeds(g, geometric_seeds(0.0, zeta_max, zeta_scale / 16.0), spec);
}

double matsubara_frequency(double temperature, int m) {
    if (!(temperature > 0.0) || m < 0)
        throw std::domain_error("matsubara_frequency: need T > 0 and m >= 0");
    return matsubara_step * temperature * m;
}

SumResult matsubara_sum(const std::function<double(double, bool)>& g,
                        const MatsubaraSpec& spec) {
    if (!(spec.temperature > 0.0))
        throw std::domain_error("matsubara_sum: temperature must be > 0");
    const double kt = k_boltzmann * spec.temperature;
    double partial = MatsubaraSpec::zero_term_weight * g(0.0, true);
    int consecutive_small = 0;
    int m = 0;
    double last_term = std::abs(partial);
    while (consecutive_small < 3) {
        if (m >= spec.max_terms)
            throw ConvergenceError("matsubara_sum: term budget exhausted", kt * partial,
                                   kt * 3.0 * last_term);
        ++m;
        const double term = g(matsubara_frequency(spec.temperature, m), false);
        partial += term;
        last_term = std::abs(term);
        if (last_term <= spec.term_rel_tol * std::abs(partial))
            ++consecutive_small;
        else
            consecutive_small = 0;
    }
    return {kt * partial, kt * 3.0 * last_term, m + 1};
}

}  // namespace casimir
