#pragma once

#include <string>
#include <vector>

namespace casimir {

// All permittivities live on the imaginary frequency axis, eps(i zeta) with
// zeta >= 0 in rad/s, where every causal model is real, >= 1 and decreasing.
// mu is taken frequency independent.

enum class MaterialKind {
    vacuum,
    drude,
    plasma,
    oscillator_sum,
    tabulated,
    ideal_conductor_proxy,
};

struct OscillatorTerm {
    double strength;  // dimensionless contribution to eps(0)
    double omega;     // resonance, rad/s
};

struct DispersionTable {
    std::vector<double> zeta;  // rad/s, strictly increasing, > 0
    std::vector<double> eps;   // >= 1
};

enum class ZeroFreqLimitKind { zero, unit_magnitude, finite };

// Everything the static (zeta = 0) Matsubara term needs from a material.
// eps0 is +inf for models whose permittivity diverges at zero frequency;
// eps_zeta_sq0 = lim eps(i zeta) zeta^2 stays finite for all of them and is
// what actually enters kappa at zero frequency.
struct ZeroFreqLimits {
    ZeroFreqLimitKind tm;  // interface coefficient behaviour against a vacuum gap
    ZeroFreqLimitKind te;
    bool eps_diverges;
    double eps0;
    double eps_zeta_sq0;  // rad^2 / s^2
    double mu0;
};

class MaterialModel {
public:
    static MaterialModel vacuum();
    static MaterialModel drude(double omega_p, double gamma, double mu = 1.0);
    static MaterialModel plasma(double omega_p, double mu = 1.0);
    static MaterialModel oscillator_sum(std::vector<OscillatorTerm> terms, double mu = 1.0);
    static MaterialModel tabulated(DispersionTable table, double mu = 1.0);
    // Constant large eps stand-in for a perfect reflector. Keeps every code
    // path identical to a real dielectric; no ideal-metal special cases.
    static MaterialModel ideal_conductor_proxy(double eps = 1e8, double mu = 1.0);

    // eps(i zeta). Returns +inf at zeta == 0 for drude/plasma; that sentinel
    // is only consumed by the zero-frequency limit path in fresnel.
    double eps(double zeta) const;

    // eps(i zeta) * zeta^2, evaluated in a form that stays finite down to
    // zeta = 0 even for metals. kappa is built from this, never from eps
    // alone, so no intermediate overflows near zero frequency.
    double eps_zeta_sq(double zeta) const;

    double mu(double /*zeta*/) const { return mu_; }

    ZeroFreqLimits zero_freq_limits() const;

    MaterialKind kind() const { return kind_; }
    // True for an oscillator model constructed with an empty term list;
    // it evaluates as vacuum and callers may want to warn.
    bool degenerate_vacuum() const { return degenerate_vacuum_; }

    const std::string& label() const { return label_; }
    void set_label(std::string label) { label_ = std::move(label); }

    bool same_as(const MaterialModel& other) const;

private:
    MaterialModel() = default;

    MaterialKind kind_ = MaterialKind::vacuum;
    double mu_ = 1.0;
    double omega_p_ = 0.0;
    double gamma_ = 0.0;
    double const_eps_ = 1.0;
    std::vector<OscillatorTerm> terms_;
    DispersionTable table_;
    bool degenerate_vacuum_ = false;
    std::string label_;
};

// Bare evaluators behind MaterialModel, exposed for direct testing.
double eps_drude(double zeta, double omega_p, double gamma);
double eps_plasma(double zeta, double omega_p);
double eps_oscillator_sum(double zeta, const std::vector<OscillatorTerm>& terms);
double eps_tabulated(double zeta, const DispersionTable& table);

}  // namespace casimir
