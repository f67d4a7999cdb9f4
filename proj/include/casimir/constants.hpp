#pragma once

// 2018 CODATA values. hbar and k_B are exact by SI definition, c by definition
// of the metre. Everything downstream assumes SI units throughout.
namespace casimir {

inline constexpr double hbar        = 1.054571817e-34;  // J s
inline constexpr double c_light     = 299792458.0;      // m / s
inline constexpr double k_boltzmann = 1.380649e-23;     // J / K
inline constexpr double pi          = 3.141592653589793238462643383279502884;

// First Matsubara frequency per kelvin, zeta_m = m * matsubara_step * T.
inline constexpr double matsubara_step = 2.0 * pi * k_boltzmann / hbar;  // rad / (s K)

}  // namespace casimir
