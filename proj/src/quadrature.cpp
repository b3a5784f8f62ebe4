#include "coldkick/quadrature.hpp"

#include <cmath>

#include "coldkick/types.hpp"

namespace coldkick {
namespace {

// 15-point Kronrod nodes on [-1,1] (positive half) and weights; the embedded
// 7-point Gauss rule uses the odd-indexed nodes.
constexpr double kron_x[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kron_w[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double gauss_w[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Panel {
    double integral;
    double err;
};

Panel gk15(const std::function<double(double)>& f, double a, double b, int& evals) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kron_x[i]);
        fv[14 - i] = f(c + h * kron_x[i]);
    }
    fv[7] = f(c);
    evals += 15;
    double resk = kron_w[7] * fv[7];
    double resg = gauss_w[3] * fv[7];
    for (int i = 0; i < 7; ++i) resk += kron_w[i] * (fv[i] + fv[14 - i]);
    for (int i = 0; i < 3; ++i) resg += gauss_w[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    return Panel{resk * h, std::abs(resk - resg) * h};
}

struct Worker {
    const std::function<double(double)>& f;
    double rel_tol, abs_tol;
    int max_depth;
    int evals = 0;
    double worst_rel = 0.0;
    bool failed = false;

    // Panels are bisected to min_depth before error estimates are trusted:
    // a rule applied across a narrow boundary layer can miss it entirely and
    // report a spuriously tiny error.
    static constexpr int min_depth = 3;

    double recurse(double a, double b, const Panel& p, double global_scale, int depth) {
        double target = std::max(abs_tol, rel_tol * std::max(global_scale, std::abs(p.integral)));
        if (p.err <= target && depth >= min_depth) return p.integral;
        if (depth >= max_depth) {
            failed = true;
            double denom = std::max(global_scale, std::abs(p.integral));
            if (denom > 0.0) worst_rel = std::max(worst_rel, p.err / denom);
            return p.integral;
        }
        double m = 0.5 * (a + b);
        Panel left = gk15(f, a, m, evals);
        Panel right = gk15(f, m, b, evals);
        return recurse(a, m, left, global_scale, depth + 1) +
               recurse(m, b, right, global_scale, depth + 1);
    }
};

}  // namespace

QuadratureResult integrate_gk(const std::function<double(double)>& f, double a, double b,
                              double rel_tol, double abs_tol, int max_depth) {
    if (a == b) return QuadratureResult{0.0, 0.0, 0};
    Worker w{f, rel_tol, abs_tol, max_depth};
    Panel whole = gk15(f, a, b, w.evals);
    double value = w.recurse(a, b, whole, std::abs(whole.integral), 0);
    if (w.failed) {
        throw NumericalError("quadrature did not converge to requested tolerance", w.worst_rel);
    }
    return QuadratureResult{value, whole.err, w.evals};
}

}  // namespace coldkick
