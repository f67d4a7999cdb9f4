#pragma once

#include "casimir/dispersion.hpp"

namespace casimir {

enum class Polarization { te, tm };

// Layer roles in the five-zone stack: wall | gap | slab | gap | wall.
// Both walls are the same material. Index 1 = wall, 2 = slab, g = gap.
struct MaterialSet {
    MaterialModel wall;
    MaterialModel slab;
    MaterialModel gap;
};

// sqrt(k_perp^2 + eps mu zeta^2 / c^2); derived from eps*zeta^2 so metals
// stay finite at zeta -> 0.
double kappa(double zeta, double k_perp, double eps, double mu);

// One layer's optical response at a fixed imaginary frequency.
struct LayerAtZeta {
    double eps;          // may be +inf at zeta == 0 (metal)
    double eps_zeta_sq;  // finite always
    double mu;
};

// Everything the cavity kernels need at one (zeta, k_perp) node. Built
// through SpectralFactory so material evaluation happens once per frequency.
struct SpectralPoint {
    double zeta;     // rad/s; 0 on the static path
    double k_perp;   // rad/m
    double kappa_g;  // gap
    double kappa_1;  // wall
    double kappa_2;  // slab
    double gamma_tm_1, gamma_te_1;  // eps / mu ratios wall vs gap (gamma_tm may be +inf)
    double gamma_tm_2, gamma_te_2;  // slab vs gap
    bool is_static = false;
};

class SpectralFactory {
public:
    // zeta > 0 path. Throws std::domain_error for zeta <= 0: the static term
    // must go through static_factory so divergent-eps limits are explicit.
    SpectralFactory(double zeta, const MaterialSet& mats);

    // zeta -> 0+ limit path. The gap material must keep eps finite there.
    static SpectralFactory static_factory(const MaterialSet& mats);

    SpectralPoint at(double k_perp) const;

    double zeta() const { return zeta_; }
    const LayerAtZeta& gap() const { return gap_; }

private:
    SpectralFactory() = default;
    double zeta_ = 0.0;
    bool is_static_ = false;
    LayerAtZeta wall_{}, slab_{}, gap_{};
};

enum class Interface { wall = 1, slab = 2 };

// Single-interface mismatch coefficient
//   Delta = (kappa_i - gamma kappa_g) / (kappa_i + gamma kappa_g),
//   gamma_tm = eps_i/eps_g, gamma_te = mu_i/mu_g.
// Sign convention: the physical Fresnel amplitude for reflection off layer i
// seen from the gap is r = -Delta; the cavity kernels below are written in
// terms of Delta itself. Identical media give exactly 0; a divergent TM
// gamma (metal at zero frequency) gives exactly -1.
double reflection_delta(Interface which, Polarization q, const SpectralPoint& pt);

// The bare mismatch formula, exposed for the gamma -> 1/gamma antisymmetry
// property and other direct checks.
double reflection_delta_raw(double kappa_i, double kappa_g, double gamma);

}  // namespace casimir
