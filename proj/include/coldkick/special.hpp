#pragma once

#include <cmath>

// Small numerical helpers shared by the propagators. All of them exist to
// evaluate exponential/trigonometric combinations without cancellation when
// the rate-times-duration arguments are tiny (deep CSL limit, omega -> 0).

namespace coldkick::special {

// sin(x)/x, = 1 at x = 0.
inline double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
    }
    return std::sin(x) / x;
}

// (x - sin x)/x^3, = 1/6 at x = 0.
inline double sin_defect(double x) {
    if (std::abs(x) < 0.5) {
        // sum_{n>=1} (-1)^{n+1} x^{2n-2}/(2n+1)!
        const double x2 = x * x;
        double term = 1.0 / 6.0, acc = term;
        for (int n = 2; n < 16; ++n) {
            term *= -x2 / static_cast<double>(2 * n * (2 * n + 1));
            acc += term;
            if (std::abs(term) < 1e-18 * std::abs(acc)) break;
        }
        return acc;
    }
    return (x - std::sin(x)) / (x * x * x);
}

// 1 - cos(x), evaluated as 2 sin^2(x/2).
inline double one_minus_cos(double x) {
    double s = std::sin(0.5 * x);
    return 2.0 * s * s;
}

// phi1(y) = (1 - e^{-y})/y, = 1 at y = 0.
inline double phi1(double y) {
    if (y == 0.0) return 1.0;
    return -std::expm1(-y) / y;
}

// phi2(y) = (e^{-y} - 1 + y)/y^2, = 1/2 at y = 0.
inline double phi2(double y) {
    if (std::abs(y) < 0.5) {
        // sum_{n>=0} (-1)^n y^n/(n+2)!
        double term = 0.5, acc = 0.5;
        for (int n = 1; n < 24; ++n) {
            term *= -y / static_cast<double>(n + 2);
            acc += term;
            if (std::abs(term) < 1e-20 * std::abs(acc)) break;
        }
        return acc;
    }
    return (std::expm1(-y) + y) / (y * y);
}

// psi(a,b) = (phi1(a) - phi1(b))/(b - a), the first divided difference of
// phi1; equals 1/2 at a = b = 0 and -phi1'(a) at a = b.
inline double psi_div(double a, double b) {
    double scale = std::max(std::abs(a), std::abs(b));
    if (scale < 0.9) {
        // sum_{n>=0} (-1)^n h_n(a,b)/(n+2)!  with h_n = sum_{i+j=n} a^i b^j
        double acc = 0.0, sign = 1.0, fact = 2.0;
        double apow[32], bpow[32];
        apow[0] = bpow[0] = 1.0;
        for (int n = 0; n < 30; ++n) {
            double h = 0.0;
            for (int i = 0; i <= n; ++i) h += apow[i] * bpow[n - i];
            acc += sign * h / fact;
            if (std::abs(h / fact) < 1e-20 * std::abs(acc) && n > 2) break;
            sign = -sign;
            fact *= static_cast<double>(n + 3);
            apow[n + 1] = apow[n] * a;
            bpow[n + 1] = bpow[n] * b;
        }
        return acc;
    }
    if (std::abs(b - a) < 1e-4 * scale) {
        // -phi1'(midpoint); safe because |mid| >= 0.45 here
        double m = 0.5 * (a + b);
        return -(std::exp(-m) * (1.0 + m) - 1.0) / (m * m);
    }
    return (phi1(a) - phi1(b)) / (b - a);
}

// theta(a,b) = (phi2(b) - psi(a,b))/a, continuous at a = 0 with value
// depending on b; equals 1/6 at a = b = 0.
inline double theta_div(double a, double b) {
    double scale = std::max(std::abs(a), std::abs(b));
    if (scale < 0.9) {
        // sum_{n>=0} (-1)^n h_n(a,b)/(n+3)!
        double acc = 0.0, sign = 1.0, fact = 6.0;
        double apow[32], bpow[32];
        apow[0] = bpow[0] = 1.0;
        for (int n = 0; n < 30; ++n) {
            double h = 0.0;
            for (int i = 0; i <= n; ++i) h += apow[i] * bpow[n - i];
            acc += sign * h / fact;
            if (std::abs(h / fact) < 1e-20 * std::abs(acc) && n > 2) break;
            sign = -sign;
            fact *= static_cast<double>(n + 4);
            apow[n + 1] = apow[n] * a;
            bpow[n + 1] = bpow[n] * b;
        }
        return acc;
    }
    if (a == 0.0) return 1.0 / 6.0;
    return (phi2(b) - psi_div(a, b)) / a;
}

// Inverse of erf on (-1, 1). Initial rational guess polished with Newton
// steps on std::erf; accurate to ~1e-16 over the needed range.
inline double erf_inv(double p) {
    if (!(p > -1.0 && p < 1.0)) return p >= 1.0 ? HUGE_VAL : -HUGE_VAL;
    if (p == 0.0) return 0.0;
    double w = -std::log((1.0 - p) * (1.0 + p));
    double x;
    if (w < 5.0) {
        w -= 2.5;
        x = 2.81022636e-08;
        x = 3.43273939e-07 + x * w;
        x = -3.5233877e-06 + x * w;
        x = -4.39150654e-06 + x * w;
        x = 0.00021858087 + x * w;
        x = -0.00125372503 + x * w;
        x = -0.00417768164 + x * w;
        x = 0.246640727 + x * w;
        x = 1.50140941 + x * w;
        x *= p;
    } else {
        w = std::sqrt(w) - 3.0;
        x = -0.000200214257;
        x = 0.000100950558 + x * w;
        x = 0.00134934322 + x * w;
        x = -0.00367342844 + x * w;
        x = 0.00573950773 + x * w;
        x = -0.0076224613 + x * w;
        x = 0.00943887047 + x * w;
        x = 1.00167406 + x * w;
        x = 2.83297682 + x * w;
        x *= p;
    }
    constexpr double two_over_sqrt_pi = 1.1283791670955126;
    for (int i = 0; i < 3; ++i) {
        double err = std::erf(x) - p;
        x -= err / (two_over_sqrt_pi * std::exp(-x * x));
    }
    return x;
}

}  // namespace coldkick::special
