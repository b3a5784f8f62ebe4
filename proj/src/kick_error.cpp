#include "coldkick/kick_error.hpp"

#include <algorithm>
#include <cmath>

#include "coldkick/csl.hpp"

namespace coldkick {
namespace {

Mat3 matmul(const Mat3& a, const Mat3& b) {
    Mat3 c{};
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) {
            const double aik = a[i][k];
            for (int j = 0; j < 3; ++j) c[i][j] += aik * b[k][j];
        }
    return c;
}

Mat3 identity() {
    Mat3 e{};
    e[0][0] = e[1][1] = e[2][2] = 1.0;
    return e;
}

double frobenius(const Mat3& a) {
    double s = 0.0;
    for (const auto& row : a)
        for (double v : row) s += v * v;
    return std::sqrt(s);
}

// Largest eigenvalue of a symmetric positive semidefinite 3x3 by cyclic
// Jacobi rotations; robust and exact enough at this size.
double max_eig_sym3(Mat3 s) {
    for (int sweep = 0; sweep < 32; ++sweep) {
        double off = std::abs(s[0][1]) + std::abs(s[0][2]) + std::abs(s[1][2]);
        double diag = std::abs(s[0][0]) + std::abs(s[1][1]) + std::abs(s[2][2]);
        if (off <= 1e-18 * std::max(diag, 1e-300)) break;
        for (int p = 0; p < 2; ++p)
            for (int q = p + 1; q < 3; ++q) {
                if (s[p][q] == 0.0) continue;
                const double theta = (s[q][q] - s[p][p]) / (2.0 * s[p][q]);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (int i = 0; i < 3; ++i) {
                    const double sip = s[i][p], siq = s[i][q];
                    s[i][p] = c * sip - sn * siq;
                    s[i][q] = sn * sip + c * siq;
                }
                for (int i = 0; i < 3; ++i) {
                    const double spi = s[p][i], sqi = s[q][i];
                    s[p][i] = c * spi - sn * sqi;
                    s[q][i] = sn * spi + c * sqi;
                }
            }
    }
    return std::max({s[0][0], s[1][1], s[2][2]});
}

}  // namespace

Mat3 expm3(const Mat3& a, double t) {
    Mat3 at{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) at[i][j] = a[i][j] * t;
    const double norm = frobenius(at);
    int squarings = 0;
    double scale = 1.0;
    if (norm > 0.25) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
        squarings = std::min(squarings, 60);
        scale = std::ldexp(1.0, -squarings);
    }
    for (auto& row : at)
        for (double& v : row) v *= scale;
    // Taylor on the scaled matrix; ||at|| <= 0.25 so 16 terms reach eps
    Mat3 result = identity();
    Mat3 term = identity();  // at^n / n!
    for (int n = 1; n <= 16; ++n) {
        term = matmul(term, at);
        for (auto& row : term)
            for (double& v : row) v /= static_cast<double>(n);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) result[i][j] += term[i][j];
    }
    for (int s = 0; s < squarings; ++s) result = matmul(result, result);
    return result;
}

double spectral_norm3(const Mat3& a) {
    Mat3 ata{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += a[k][i] * a[k][j];
            ata[i][j] = s;
        }
    return std::sqrt(std::max(0.0, max_eig_sym3(ata)));
}

KickMatrix KickMatrix::build(const Dcsl& noise, const AtomSpecies& species, double omega) {
    if (!(omega > 0.0)) throw std::domain_error("kick matrix: omega must be > 0");
    const DcslRates r = dcsl_rates(noise, species);
    const double h = PhysicalConstants::hbar;
    const double m = species.mass;
    KickMatrix km;
    km.omega = omega;
    km.big_b = r.big_b;
    km.chi = r.chi;
    km.m = Mat3{{{0.0, omega, 0.0},
                 {-2.0 * omega, -r.big_b, 2.0 * omega},
                 {0.0, -omega, -r.chi}}};
    km.drive = Vec3{m * omega * r.alpha / h, 0.0, r.heating_rate / (h * m * omega)};
    return km;
}

std::array<std::complex<double>, 3> char_poly_roots(double big_b, double chi, double omega) {
    if (!(omega > 0.0)) throw std::domain_error("char_poly_roots: omega must be > 0");
    if (!(big_b >= 0.0 && chi >= 0.0))
        throw std::domain_error("char_poly_roots: rates must be >= 0");
    // m^3 + c2 m^2 + c1 m + c0
    const double c2 = big_b + chi;
    const double c1 = big_b * chi + 4.0 * omega * omega;
    const double c0 = 2.0 * chi * omega * omega;
    // depressed cubic y^3 + p y + q with m = y - c2/3
    const double shift = c2 / 3.0;
    const double p = c1 - c2 * c2 / 3.0;
    const double q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
    const double disc = q * q / 4.0 + p * p * p / 27.0;

    std::array<std::complex<double>, 3> roots;
    if (disc > 0.0) {
        // one real root, one conjugate pair
        const double sq = std::sqrt(disc);
        const double u = std::cbrt(-q / 2.0 + sq);
        const double v = std::cbrt(-q / 2.0 - sq);
        const double y1 = u + v;
        const double re = -y1 / 2.0;
        const double im = std::sqrt(3.0) / 2.0 * (u - v);
        roots[0] = {y1 - shift, 0.0};
        roots[1] = {re - shift, im};
        roots[2] = {re - shift, -im};
    } else {
        // three real roots (trigonometric form)
        const double r = std::sqrt(std::max(0.0, -p * p * p / 27.0));
        const double phi = std::acos(std::clamp(-q / (2.0 * std::max(r, 1e-300)), -1.0, 1.0));
        const double mag = 2.0 * std::sqrt(std::max(0.0, -p / 3.0));
        for (int k = 0; k < 3; ++k)
            roots[k] = {mag * std::cos((phi + 2.0 * M_PI * k) / 3.0) - shift, 0.0};
    }
    // one Newton polish per root in complex arithmetic
    for (auto& z : roots) {
        for (int it = 0; it < 2; ++it) {
            const std::complex<double> f = ((z + c2) * z + c1) * z + c0;
            const std::complex<double> df = (3.0 * z + 2.0 * c2) * z + c1;
            if (std::abs(df) > 0.0) z -= f / df;
        }
    }
    return roots;
}

KickErrorReport kick_error_bounds(const GasMoments& m0, const Dcsl& noise,
                                  const AtomSpecies& species, double omega, double dt) {
    if (!(omega > 0.0)) throw std::domain_error("kick_error_bounds: omega must be > 0");
    if (!(dt >= 0.0)) throw std::domain_error("kick_error_bounds: dt must be >= 0");
    const KickMatrix km = KickMatrix::build(noise, species, omega);
    const double h = PhysicalConstants::hbar;
    const double m = species.mass;

    KickErrorReport rep;
    rep.eigenvalues = char_poly_roots(km.big_b, km.chi, omega);

    const Vec3 x0{m * omega * m0.x2 / h, m0.xp_sym / h, m0.p2 / (h * m * omega)};
    const GasMoments qm = csl_harmonic_step(m0, Csl{0.0, noise.r_c}, species, omega, dt);
    const Vec3 xt{m * omega * qm.x2 / h, qm.xp_sym / h, qm.p2 / (h * m * omega)};

    const double numerator =
        2.0 * dt * (norm3(x0) * std::max(km.big_b, km.chi) + norm3(km.drive));
    double* errs[3] = {&rep.err_x2, &rep.err_xp, &rep.err_p2};
    for (int i = 0; i < 3; ++i) {
        const double denom = std::abs(xt[i] - x0[i]);
        if (denom < 1e-30) {
            rep.indeterminate[i] = true;
            *errs[i] = 0.0;
        } else {
            *errs[i] = numerator / denom;
        }
    }
    rep.norm_bound_ok = matrix_exp_norm_check(km.big_b, km.chi, omega, dt).ok;
    return rep;
}

NormCheck matrix_exp_norm_check(double big_b, double chi, double omega, double t) {
    if (!(t >= 0.0)) throw std::domain_error("matrix_exp_norm_check: t must be >= 0");
    const Mat3 m{{{0.0, omega, 0.0}, {-2.0 * omega, -big_b, 2.0 * omega}, {0.0, -omega, -chi}}};
    const Mat3 m_tilde{{{0.0, omega, 0.0}, {-2.0 * omega, 0.0, 2.0 * omega}, {0.0, -omega, 0.0}}};
    NormCheck out;
    out.norm_exp_m = spectral_norm3(expm3(m, t));
    out.norm_exp_m_tilde = spectral_norm3(expm3(m_tilde, t));
    constexpr double slack = 1e-9;
    out.ok = out.norm_exp_m <= out.norm_exp_m_tilde + slack &&
             out.norm_exp_m_tilde <= 2.0 + slack;
    return out;
}

}  // namespace coldkick
