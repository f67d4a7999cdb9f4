#include "casimir/fresnel.hpp"

#include <cmath>
#include <stdexcept>

#include "casimir/constants.hpp"

namespace casimir {

double kappa(double zeta, double k_perp, double eps, double mu) {
    if (!(zeta >= 0.0) || !(k_perp >= 0.0))
        throw std::domain_error("kappa: zeta and k_perp must be >= 0");
    if (!(eps >= 1.0) || !(mu > 0.0))
        throw std::domain_error("kappa: need eps >= 1 and mu > 0");
    const double zc = zeta / c_light;
    return std::sqrt(k_perp * k_perp + eps * mu * zc * zc);
}

namespace {

LayerAtZeta layer_at(const MaterialModel& m, double zeta) {
    return LayerAtZeta{m.eps(zeta), m.eps_zeta_sq(zeta), m.mu(zeta)};
}

LayerAtZeta layer_static(const MaterialModel& m) {
    const auto lim = m.zero_freq_limits();
    return LayerAtZeta{lim.eps0, lim.eps_zeta_sq0, lim.mu0};
}

double kappa_from_layer(double k_perp, const LayerAtZeta& l) {
    // eps mu zeta^2 / c^2 built from eps_zeta_sq, finite for metals at zeta=0
    const double w = l.eps_zeta_sq * l.mu / (c_light * c_light);
    return std::sqrt(k_perp * k_perp + w);
}

}  // namespace

SpectralFactory::SpectralFactory(double zeta, const MaterialSet& mats) {
    if (!(zeta > 0.0) || !std::isfinite(zeta))
        throw std::domain_error(
            "SpectralFactory: zeta must be > 0; use static_factory for the zeta -> 0 limit");
    zeta_ = zeta;
    wall_ = layer_at(mats.wall, zeta);
    slab_ = layer_at(mats.slab, zeta);
    gap_ = layer_at(mats.gap, zeta);
}

SpectralFactory SpectralFactory::static_factory(const MaterialSet& mats) {
    SpectralFactory f;
    f.zeta_ = 0.0;
    f.is_static_ = true;
    f.wall_ = layer_static(mats.wall);
    f.slab_ = layer_static(mats.slab);
    f.gap_ = layer_static(mats.gap);
    if (std::isinf(f.gap_.eps))
        throw std::domain_error(
            "static limit requires a gap material with finite eps(0)");
    return f;
}

SpectralPoint SpectralFactory::at(double k_perp) const {
    if (!(k_perp >= 0.0))
        throw std::domain_error("SpectralPoint: k_perp must be >= 0");
    SpectralPoint pt;
    pt.zeta = zeta_;
    pt.k_perp = k_perp;
    pt.is_static = is_static_;
    pt.kappa_g = kappa_from_layer(k_perp, gap_);
    pt.kappa_1 = kappa_from_layer(k_perp, wall_);
    pt.kappa_2 = kappa_from_layer(k_perp, slab_);
    pt.gamma_tm_1 = wall_.eps / gap_.eps;  // +inf for a metal wall at zeta = 0
    pt.gamma_tm_2 = slab_.eps / gap_.eps;
    pt.gamma_te_1 = wall_.mu / gap_.mu;
    pt.gamma_te_2 = slab_.mu / gap_.mu;
    return pt;
}

double reflection_delta_raw(double kappa_i, double kappa_g, double gamma) {
    if (std::isinf(gamma)) return -1.0;   // metal TM limit: gamma kappa_g dominates
    if (std::isinf(kappa_i)) return 1.0;  // divergent kappa on the layer side
    const double num = kappa_i - gamma * kappa_g;
    const double den = kappa_i + gamma * kappa_g;
    if (den == 0.0) return 0.0;  // kappa_i = kappa_g = 0 corner, zero measure
    return num / den;
}

double reflection_delta(Interface which, Polarization q, const SpectralPoint& pt) {
    const bool wall = (which == Interface::wall);
    const double kappa_i = wall ? pt.kappa_1 : pt.kappa_2;
    const double gamma = (q == Polarization::tm) ? (wall ? pt.gamma_tm_1 : pt.gamma_tm_2)
                                                 : (wall ? pt.gamma_te_1 : pt.gamma_te_2);
    if (gamma == 1.0 && kappa_i == pt.kappa_g) return 0.0;  // identical media, exact zero
    return reflection_delta_raw(kappa_i, pt.kappa_g, gamma);
}

}  // namespace casimir
