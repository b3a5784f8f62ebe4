#pragma once

#include <array>
#include <complex>

#include "coldkick/dcsl.hpp"
#include "coldkick/types.hpp"

namespace coldkick {

using Mat3 = std::array<std::array<double, 3>, 3>;

// Generator of the dimensionless moment vector
//   x = (m w <x^2>/hbar, <xp+px>/hbar, <p^2>/(hbar m w))
// during the kick, plus the constant drive f.
struct KickMatrix {
    Mat3 m{};          // rows [(0, w, 0), (-2w, -B, 2w), (0, -w, -chi)]
    Vec3 drive{};      // (m w alpha/hbar, 0, chi p2_as/(hbar m w))
    double omega = 0.0;
    double big_b = 0.0;
    double chi = 0.0;

    static KickMatrix build(const Dcsl& noise, const AtomSpecies& species, double omega);
};

struct KickErrorReport {
    std::array<std::complex<double>, 3> eigenvalues{};
    double err_x2 = 0.0;
    double err_xp = 0.0;
    double err_p2 = 0.0;
    std::array<bool, 3> indeterminate{false, false, false};  // vanishing denominator
    bool norm_bound_ok = false;
    double max_error() const { return std::max(err_x2, std::max(err_xp, err_p2)); }
};

// Roots of m^3 + m^2(B+chi) + m(B chi + 4 w^2) + 2 chi w^2, via the shifted
// trigonometric/Cardano method. Residual |poly(root)| stays below 1e-10 w^3.
std::array<std::complex<double>, 3> char_poly_roots(double big_b, double chi, double omega);

// Error bounds of replacing the dCSL kick by the noise-free evolution:
//   err_i = 2 t (||x0|| max(B, chi) + ||f||) / |x~_i(t) - x~_i(0)|
// where x~ is the noise-free harmonic evolution of the kick-start moments.
KickErrorReport kick_error_bounds(const GasMoments& m0, const Dcsl& noise,
                                  const AtomSpecies& species, double omega, double dt);

struct NormCheck {
    double norm_exp_m = 0.0;        // ||e^{M t}||, spectral
    double norm_exp_m_tilde = 0.0;  // ||e^{M~ t}||, B = chi = 0
    bool ok = false;                // norm_exp_m <= norm_exp_m_tilde <= 2 (1e-9 slack)
};

NormCheck matrix_exp_norm_check(double big_b, double chi, double omega, double t);

// Dense 3x3 helpers used by the checks above (scaling-and-squaring
// exponential; spectral norm from the largest singular value).
Mat3 expm3(const Mat3& a, double t);
double spectral_norm3(const Mat3& a);

}  // namespace coldkick
