#include "casimir/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace casimir {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

void check_zeta(double zeta) {
    require(std::isfinite(zeta) && zeta >= 0.0, "zeta must be finite and >= 0");
}

}  // namespace

double eps_drude(double zeta, double omega_p, double gamma) {
    check_zeta(zeta);
    require(omega_p > 0.0 && gamma > 0.0, "drude: omega_p and gamma must be > 0");
    if (zeta == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 + omega_p * omega_p / (zeta * (zeta + gamma));
}

double eps_plasma(double zeta, double omega_p) {
    check_zeta(zeta);
    require(omega_p > 0.0, "plasma: omega_p must be > 0");
    if (zeta == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 + omega_p * omega_p / (zeta * zeta);
}

double eps_oscillator_sum(double zeta, const std::vector<OscillatorTerm>& terms) {
    check_zeta(zeta);
    double eps = 1.0;
    for (const auto& t : terms) {
        require(t.strength >= 0.0 && t.omega > 0.0,
                "oscillator_sum: strengths must be >= 0 and resonances > 0");
        // C / (1 + (zeta/omega)^2) rewritten to avoid (zeta/omega)^2 overflow
        const double r = zeta / t.omega;
        eps += t.strength / (1.0 + r * r);
    }
    return eps;
}

double eps_tabulated(double zeta, const DispersionTable& table) {
    check_zeta(zeta);
    const auto& zs = table.zeta;
    const auto& es = table.eps;
    require(zs.size() == es.size() && zs.size() >= 2, "tabulated: need >= 2 rows");
    if (zeta <= zs.front()) return es.front();
    if (zeta >= zs.back()) {
        // (zeta_last / zeta)^2 tail, the generic asymptotic of any causal eps
        const double r = zs.back() / zeta;
        return 1.0 + (es.back() - 1.0) * r * r;
    }
    auto hi = std::lower_bound(zs.begin(), zs.end(), zeta);
    const std::size_t i = static_cast<std::size_t>(hi - zs.begin());
    const double z0 = zs[i - 1], z1 = zs[i];
    const double e0 = es[i - 1] - 1.0, e1 = es[i] - 1.0;
    const double w = std::log(zeta / z0) / std::log(z1 / z0);
    if (e0 <= 0.0 || e1 <= 0.0) {
        // eps touching 1 exactly: fall back to linear, log-log undefined
        return 1.0 + e0 + (e1 - e0) * w;
    }
    return 1.0 + std::exp(std::log(e0) + (std::log(e1) - std::log(e0)) * w);
}

MaterialModel MaterialModel::vacuum() {
    MaterialModel m;
    m.kind_ = MaterialKind::vacuum;
    m.label_ = "vacuum";
    return m;
}

MaterialModel MaterialModel::drude(double omega_p, double gamma, double mu) {
    require(omega_p > 0.0 && gamma > 0.0, "drude: omega_p and gamma must be > 0");
    require(mu > 0.0, "mu must be > 0");
    MaterialModel m;
    m.kind_ = MaterialKind::drude;
    m.omega_p_ = omega_p;
    m.gamma_ = gamma;
    m.mu_ = mu;
    m.label_ = "drude";
    return m;
}

MaterialModel MaterialModel::plasma(double omega_p, double mu) {
    require(omega_p > 0.0, "plasma: omega_p must be > 0");
    require(mu > 0.0, "mu must be > 0");
    MaterialModel m;
    m.kind_ = MaterialKind::plasma;
    m.omega_p_ = omega_p;
    m.mu_ = mu;
    m.label_ = "plasma";
    return m;
}

MaterialModel MaterialModel::oscillator_sum(std::vector<OscillatorTerm> terms, double mu) {
    require(mu > 0.0, "mu must be > 0");
    for (const auto& t : terms)
        require(t.strength >= 0.0 && t.omega > 0.0,
                "oscillator_sum: strengths must be >= 0 and resonances > 0");
    MaterialModel m;
    m.kind_ = MaterialKind::oscillator_sum;
    m.terms_ = std::move(terms);
    m.mu_ = mu;
    m.degenerate_vacuum_ = m.terms_.empty();
    m.label_ = "oscillator_sum";
    return m;
}

MaterialModel MaterialModel::tabulated(DispersionTable table, double mu) {
    require(mu > 0.0, "mu must be > 0");
    require(table.zeta.size() == table.eps.size(), "tabulated: column size mismatch");
    require(table.zeta.size() >= 2, "tabulated: need >= 2 rows");
    for (std::size_t i = 0; i < table.zeta.size(); ++i) {
        require(std::isfinite(table.zeta[i]) && table.zeta[i] > 0.0,
                "tabulated: zeta values must be finite and > 0");
        require(std::isfinite(table.eps[i]) && table.eps[i] >= 1.0,
                "tabulated: eps values must be finite and >= 1");
        if (i > 0)
            require(table.zeta[i] > table.zeta[i - 1],
                    "tabulated: zeta must be strictly increasing");
    }
    MaterialModel m;
    m.kind_ = MaterialKind::tabulated;
    m.table_ = std::move(table);
    m.mu_ = mu;
    m.label_ = "tabulated";
    return m;
}

MaterialModel MaterialModel::ideal_conductor_proxy(double eps, double mu) {
    require(eps >= 1.0, "ideal_conductor_proxy: eps must be >= 1");
    require(mu > 0.0, "mu must be > 0");
    MaterialModel m;
    m.kind_ = MaterialKind::ideal_conductor_proxy;
    m.const_eps_ = eps;
    m.mu_ = mu;
    m.label_ = "ideal_conductor_proxy";
    return m;
}

double MaterialModel::eps(double zeta) const {
    switch (kind_) {
        case MaterialKind::vacuum: check_zeta(zeta); return 1.0;
        case MaterialKind::drude: return eps_drude(zeta, omega_p_, gamma_);
        case MaterialKind::plasma: return eps_plasma(zeta, omega_p_);
        case MaterialKind::oscillator_sum: return eps_oscillator_sum(zeta, terms_);
        case MaterialKind::tabulated: return eps_tabulated(zeta, table_);
        case MaterialKind::ideal_conductor_proxy: check_zeta(zeta); return const_eps_;
    }
    throw std::logic_error("unreachable material kind");
}

double MaterialModel::eps_zeta_sq(double zeta) const {
    check_zeta(zeta);
    switch (kind_) {
        case MaterialKind::drude:
            // eps * zeta^2 = zeta^2 + omega_p^2 zeta / (zeta + gamma), exact
            return zeta * zeta + omega_p_ * omega_p_ * zeta / (zeta + gamma_);
        case MaterialKind::plasma:
            return zeta * zeta + omega_p_ * omega_p_;
        default:
            if (zeta == 0.0) return 0.0;
            return eps(zeta) * zeta * zeta;
    }
}

ZeroFreqLimits MaterialModel::zero_freq_limits() const {
    ZeroFreqLimits lim{};
    lim.mu0 = mu_;
    lim.eps_diverges = (kind_ == MaterialKind::drude || kind_ == MaterialKind::plasma);
    lim.eps0 = lim.eps_diverges ? std::numeric_limits<double>::infinity() : eps(0.0);
    lim.eps_zeta_sq0 = eps_zeta_sq(0.0);
    if (lim.eps_diverges) {
        lim.tm = ZeroFreqLimitKind::unit_magnitude;
        // drude: kappa -> k_perp on both sides, coefficient vanishes for mu = 1;
        // plasma keeps a kappa mismatch through eps_zeta_sq0
        const bool te_vanishes = (kind_ == MaterialKind::drude) && mu_ == 1.0;
        lim.te = te_vanishes ? ZeroFreqLimitKind::zero : ZeroFreqLimitKind::finite;
    } else if (lim.eps0 == 1.0 && mu_ == 1.0) {
        lim.tm = ZeroFreqLimitKind::zero;
        lim.te = ZeroFreqLimitKind::zero;
    } else {
        lim.tm = ZeroFreqLimitKind::finite;
        // TE sees only the kappa mismatch and mu at zero frequency, so any
        // nonmagnetic material with eps * zeta^2 -> 0 reflects nothing
        lim.te = (mu_ == 1.0 && lim.eps_zeta_sq0 == 0.0) ? ZeroFreqLimitKind::zero
                                                         : ZeroFreqLimitKind::finite;
    }
    return lim;
}

bool MaterialModel::same_as(const MaterialModel& other) const {
    if (kind_ != other.kind_ || mu_ != other.mu_) return false;
    switch (kind_) {
        case MaterialKind::vacuum: return true;
        case MaterialKind::drude: return omega_p_ == other.omega_p_ && gamma_ == other.gamma_;
        case MaterialKind::plasma: return omega_p_ == other.omega_p_;
        case MaterialKind::ideal_conductor_proxy: return const_eps_ == other.const_eps_;
        case MaterialKind::oscillator_sum: {
            if (terms_.size() != other.terms_.size()) return false;
            for (std::size_t i = 0; i < terms_.size(); ++i)
                if (terms_[i].strength != other.terms_[i].strength ||
                    terms_[i].omega != other.terms_[i].omega)
                    return false;
            return true;
        }
        case MaterialKind::tabulated:
            return table_.zeta == other.table_.zeta && table_.eps == other.table_.eps;
    }
    return false;
}

}  // namespace casimir
