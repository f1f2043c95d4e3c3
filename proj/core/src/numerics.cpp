#include "longevity/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "longevity/errors.hpp"

namespace longevity {

Integral integrate(const std::function<double(double)>& f, double lo, double hi,
                   double abs_tol, double rel_tol) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        throw DomainError("integrate: bounds must be finite");
    }
    if (lo == hi) return {};

    // Below ~50 eps * L1 the Kronrod-Gauss difference is rounding noise.
    constexpr double kRoundingFloor = 50.0 * std::numeric_limits<double>::epsilon();

    // Deepening in stages: on integrands with a long negligible tail, a tight
    // tolerance drives Boost to full depth there and the summed per-interval
    // estimates grow with it, while a shallower pass has already converged.
    Integral best{0.0, std::numeric_limits<double>::infinity()};
    double best_allowed = 0.0;
    for (unsigned depth : {5u, 10u, 15u, 20u}) {
        double error = 0.0;
        double l1 = 0.0;
        const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            f, lo, hi, depth, 0.5 * rel_tol, &error, &l1);
        if (!std::isfinite(value)) {
            throw ConvergenceError("integrate: non-finite result", error);
        }
        const double allowed =
            std::max({abs_tol, rel_tol * std::abs(value), kRoundingFloor * std::abs(l1)});
        if (error <= allowed) return {value, error};
        if (error < best.error) {
            best = {value, error};
            best_allowed = allowed;
        }
    }
    char buffer[160];
    std::snprintf(buffer, sizeof buffer,
                  "integrate: error estimate %.3g exceeds tolerance %.3g on [%.6g, %.6g]",
                  best.error, best_allowed, lo, hi);
    throw ConvergenceError(buffer, best.error);
}

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 int max_iterations) {
    const double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if (!(std::signbit(f_lo) != std::signbit(f_hi))) {
        throw ConvergenceError("find_root: no sign change on [" + std::to_string(lo) + ", " +
                                   std::to_string(hi) + "]",
                               std::min(std::abs(f_lo), std::abs(f_hi)));
    }

    std::uintmax_t iterations = static_cast<std::uintmax_t>(max_iterations);
    const auto bracket = boost::math::tools::toms748_solve(
        f, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(52), iterations);
    if (iterations >= static_cast<std::uintmax_t>(max_iterations)) {
        throw ConvergenceError("find_root: iteration budget exhausted",
                               bracket.second - bracket.first);
    }
    return 0.5 * (bracket.first + bracket.second);
}

}  // namespace longevity
