#pragma once

#include <functional>

namespace coldkick {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;  // absolute
    int evaluations = 0;
};

// Adaptive Gauss-Kronrod (G7/K15) integration of f over [a, b].
// Recursively bisects until the local K15-G7 error estimate satisfies
// |err| <= max(rel_tol * |integral|, abs_tol) per subinterval share.
// Throws NumericalError (with the achieved estimate) if max_depth subdivision
// still leaves the estimate above target.
QuadratureResult integrate_gk(const std::function<double(double)>& f, double a, double b,
                              double rel_tol = 1e-10, double abs_tol = 1e-30,
                              int max_depth = 48);

}  // namespace coldkick
