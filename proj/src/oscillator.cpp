#include "casimir/oscillator.hpp"

#include <cmath>
#include <stdexcept>

#include "casimir/errors.hpp"

namespace casimir {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

}  // namespace

double eigenfrequency_from_a1(double k_spring, double m_area, double a1) {
    require(m_area > 0.0, "oscillator: m_area must be > 0");
    require(k_spring > 0.0, "oscillator: k_spring must be > 0");
    if (!(k_spring > a1))
        throw InstabilityError(
            "oscillator: k_spring <= a1, the centre is not a stable equilibrium");
    return std::sqrt((k_spring - a1) / m_area);
}

FrequencyShift frequency_shift_from_a1(double k_spring, double m_area, double a1) {
    FrequencyShift out;
    out.omega = eigenfrequency_from_a1(k_spring, m_area, a1);
    out.omega_free = std::sqrt(k_spring / m_area);
    out.shift = out.omega_free - out.omega;
    out.shift_first_order = a1 / (2.0 * std::sqrt(k_spring * m_area));
    out.a1 = a1;
    out.first_order_reliable = k_spring >= 10.0 * a1;
    return out;
}

FrequencyShift frequency_shift(const OscillatorSetup& setup, const QuadratureSpec& quad,
                               const MatsubaraSpec& sum_spec) {
    const auto t =
        taylor_coefficient(setup.h, setup.b, setup.materials, setup.temperature, quad, sum_spec);
    return frequency_shift_from_a1(setup.k_spring, setup.m_area, t.a1);
}

double eigenfrequency(const OscillatorSetup& setup, const QuadratureSpec& quad,
                      const MatsubaraSpec& sum_spec) {
    return frequency_shift(setup, quad, sum_spec).omega;
}

double harmonic_region_of(const std::function<double(double)>& force, double a1,
                          double delta_max, double accuracy) {
    require(delta_max > 0.0, "harmonic_region: delta_max must be > 0");
    require(accuracy > 0.0 && accuracy < 0.5, "harmonic_region: accuracy must lie in (0, 0.5)");
    const auto violates = [&](double delta) {
        const double f = force(delta);
        if (f == 0.0) return true;
        return std::abs(f - a1 * delta) > accuracy * std::abs(f);
    };
    // log-spaced walk, four probes per octave from delta_max / 4096 up
    const double ratio = std::pow(2.0, 0.25);
    double good = 0.0;
    double bad = 0.0;
    for (double d = delta_max / 4096.0; d <= delta_max; d *= ratio) {
        if (violates(d)) {
            bad = d;
            break;
        }
        good = d;
    }
    if (good == 0.0) return 0.0;
    if (bad == 0.0) {
        if (!violates(delta_max)) return delta_max;
        bad = delta_max;
    }
    for (int it = 0; it < 20; ++it) {
        const double mid = 0.5 * (good + bad);
        if (violates(mid))
            bad = mid;
        else
            good = mid;
    }
    return good;
}

double harmonic_region(double h, double b, const MaterialSet& mats, double temperature,
                       double accuracy, const QuadratureSpec& quad,
                       const MatsubaraSpec& sum_spec) {
    const auto t = taylor_coefficient(h, b, mats, temperature, quad, sum_spec);
    const auto force = [&](double delta) {
        return pressure_displacement_form(h, b, delta, mats, temperature, quad, sum_spec)
            .pressure;
    };
    return harmonic_region_of(force, t.a1, 0.45 * h, accuracy);
}

GeometryComparison open_vs_closed(double a, double k_spring, const MaterialSet& mats,
                                  double temperature, const std::vector<double>& delta_grid,
                                  const QuadratureSpec& quad, const MatsubaraSpec& sum_spec) {
    require(a > 0.0, "open_vs_closed: a must be > 0");
    const ForceResult lif = halfspace_pressure(a, mats, temperature, quad, sum_spec);
    const double mag = std::abs(lif.pressure);

    GeometryComparison out;
    out.a = a;
    out.lifshitz_pressure = lif.pressure;
    out.closed_linear = 8.0 * mag / a;
    out.closed_cubic = 40.0 * mag / (a * a * a);
    out.open_linear = 4.0 * mag / a;
    out.open_quadratic = -10.0 * mag / (a * a);
    out.stiffness_closed = k_spring - out.closed_linear;
    out.stiffness_open = k_spring - out.open_linear;
    if (!(out.stiffness_closed > 0.0) || !(out.stiffness_open > 0.0))
        throw InstabilityError("open_vs_closed: spring too soft for stable suspension");
    if (delta_grid.empty()) return out;

    // dispersive slopes at delta = 0, Richardson pairs kill the O(e^2) bias
    const double h = 2.0 * a;
    const auto closed_force = [&](double d) {
        return pressure_lifshitz_difference(h, d, mats, temperature, quad, sum_spec).pressure;
    };
    const auto open_change = [&](double d) {
        return halfspace_pressure(a + d, mats, temperature, quad, sum_spec).pressure -
               lif.pressure;
    };
    const double e = a / 1000.0;
    const double slope_closed =
        (4.0 * closed_force(e) / e - closed_force(2.0 * e) / (2.0 * e)) / 3.0;
    const double so1 = (open_change(e) - open_change(-e)) / (2.0 * e);
    const double so2 = (open_change(2.0 * e) - open_change(-2.0 * e)) / (4.0 * e);
    const double slope_open = (4.0 * so1 - so2) / 3.0;

    for (const double d : delta_grid) {
        require(d > 0.0 && d < 0.5 * a, "open_vs_closed: amplitudes must lie in (0, a/2)");
        const double x = d / a;
        out.delta_over_a.push_back(x);

        // exact d^-4 power law pinned to F_L(a); delta counted away from the
        // open wall, so the open change is |F_L| (1 - (1+x)^-4)
        const double pc = mag * (std::pow(1.0 - x, -4.0) - std::pow(1.0 + x, -4.0));
        out.closed_powerlaw_correction.push_back((pc - out.closed_linear * d) / pc);
        const double po = mag * (1.0 - std::pow(1.0 + x, -4.0));
        out.open_powerlaw_correction.push_back((po - out.open_linear * d) / po);

        const double fc = closed_force(d);
        out.closed_dispersive_correction.push_back((fc - slope_closed * d) / fc);
        const double fo = open_change(d);
        out.open_dispersive_correction.push_back((fo - slope_open * d) / fo);
    }
    return out;
}

}  // namespace casimir
