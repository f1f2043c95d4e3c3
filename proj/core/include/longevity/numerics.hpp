#pragma once

#include <functional>

namespace longevity {

struct Integral {
    double value = 0.0;
    double error = 0.0;  // estimated absolute error
};

// Adaptive Gauss-Kronrod (7/15) quadrature of f over [lo, hi].
// Throws ConvergenceError when the error estimate exceeds
// max(abs_tol, rel_tol * |value|, 50 eps * integral of |f|).
Integral integrate(const std::function<double(double)>& f, double lo, double hi,
                   double abs_tol = 1e-10, double rel_tol = 1e-12);

// Root of f in [lo, hi] by TOMS 748. f(lo) and f(hi) must differ in sign
// (or one of them be zero). Throws ConvergenceError otherwise or when the
// iteration budget runs out.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 int max_iterations = 200);

}  // namespace longevity
