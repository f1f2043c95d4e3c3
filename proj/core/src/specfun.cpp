#include "longevity/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "longevity/errors.hpp"

namespace longevity::specfun {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 100000;
constexpr double kEulerGamma = std::numbers::egamma_v<double>;

std::string describe(double alpha, double x) {
    std::ostringstream os;
    os.precision(17);
    os << "(alpha=" << alpha << ", x=" << x << ")";
    return os.str();
}

void validate(double alpha, double x) {
    if (!std::isfinite(alpha) || !std::isfinite(x)) {
        throw DomainError("upper_incomplete_gamma: non-finite argument " + describe(alpha, x));
    }
    if (x < 0.0) {
        throw DomainError("upper_incomplete_gamma: x must be >= 0 " + describe(alpha, x));
    }
    if (x == 0.0 && alpha <= 0.0) {
        throw DomainError("upper_incomplete_gamma: integral diverges at x = 0 for alpha <= 0 " +
                          describe(alpha, x));
    }
}

// zeta(k) - 1 for k = 2 .. 2 + size - 1.
const std::array<double, 40>& zeta_minus_one() {
    static const std::array<double, 40> table = [] {
        std::array<double, 40> t{};
        for (std::size_t i = 0; i < t.size(); ++i) {
            t[i] = std::riemann_zeta(static_cast<double>(i + 2)) - 1.0;
        }
        return t;
    }();
    return table;
}

// Modified Lentz evaluation of the Legendre continued fraction
//   Gamma(a, x) = e^-x x^a / (x + 1 - a - 1(1-a) / (x + 3 - a - 2(2-a) / ...)).
// Returns Gamma(a, x) e^x x^-a. Callers guarantee x + 1 - a >= 2.
double continued_fraction_scaled(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    double delta = 0.0;
    for (int i = 1; i <= kMaxIterations; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) return h;
    }
    throw ConvergenceError("upper_incomplete_gamma: continued fraction did not converge " +
                               describe(a, x),
                           std::abs(delta - 1.0));
}

// Gamma(a) - gamma(a, x) with the lower function from its power series
//   gamma(a, x) = x^a e^-x sum_{n>=0} x^n / (a (a+1) ... (a+n)).
double upper_from_lower_series(double a, double x, double log_x) {
    double term = 1.0 / a;
    double sum = term;
    int n = 1;
    for (; n <= kMaxIterations; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    if (n > kMaxIterations) {
        throw ConvergenceError("upper_incomplete_gamma: lower series did not converge " +
                                   describe(a, x),
                               std::abs(term / sum));
    }
    const double log_prefactor = a * log_x - x;
    if (a < 170.0) {
        return std::tgamma(a) - std::exp(log_prefactor) * sum;
    }
    const double log_gamma = std::lgamma(a);
    return std::exp(log_gamma) * (1.0 - std::exp(log_prefactor - log_gamma) * sum);
}

double e1_series(double x) {
    double term = 1.0;
    double sum = 0.0;
    for (int n = 1; n <= kMaxIterations; ++n) {
        term *= -x / n;
        const double contribution = term / n;
        sum += contribution;
        if (std::abs(contribution) < std::abs(sum) * kEps) break;
    }
    return -kEulerGamma - std::log(x) - sum;
}

// Small-order series for |a| <= 1/2, a != 0, 0 < x < 1.5.
double small_order_series(double a, double x, double log_x) {
    double gamma_term = 0.0;  // (Gamma(1 + a) - 1) / a
    double power_term = 0.0;  // (x^a - 1) / a
    if (std::abs(a) < 1e-10) {
        constexpr double kSecond =
            0.5 * kEulerGamma * kEulerGamma + std::numbers::pi * std::numbers::pi / 12.0;
        gamma_term = -kEulerGamma + kSecond * a;
        power_term = log_x + 0.5 * a * log_x * log_x;
    } else {
        gamma_term = std::expm1(log_gamma_1p(a)) / a;
        power_term = std::expm1(a * log_x) / a;
    }

    double p = 1.0;
    double s = 0.0;
    for (int n = 1; n <= kMaxIterations; ++n) {
        p *= -x / n;
        const double t = p / (a + n);
        s += t;
        if (std::abs(t) <= std::abs(s) * kEps) break;
    }
    return gamma_term - power_term - std::exp(a * log_x) * s;
}

enum class Form { plain, scaled };

double evaluate(double alpha, double x, Form form) {
    validate(alpha, x);

    if (x == 0.0) {
        if (form == Form::scaled) {
            throw DomainError("upper_incomplete_gamma_scaled: undefined at x = 0 " +
                              describe(alpha, x));
        }
        return std::tgamma(alpha);
    }

    const double log_x = std::log(x);
    const double log_prefactor = alpha * log_x - x;  // ln(x^alpha e^-x)

    auto from_scaled = [&](double scaled) {
        return form == Form::scaled ? scaled : scaled * std::exp(log_prefactor);
    };
    auto from_plain = [&](double plain) {
        if (!std::isfinite(plain)) {
            throw DomainError("upper_incomplete_gamma: result overflows " + describe(alpha, x));
        }
        return form == Form::plain ? plain : plain * std::exp(-log_prefactor);
    };

    if (alpha == 0.0) {
        return x > 1.0 ? from_scaled(continued_fraction_scaled(0.0, x)) : from_plain(e1_series(x));
    }
    if (x >= 1.0 && x >= alpha + 1.0) {
        return from_scaled(continued_fraction_scaled(alpha, x));
    }
    if (alpha > 0.5) {
        return from_plain(upper_from_lower_series(alpha, x, log_x));
    }

    // alpha <= 1/2 and x < 1.5: shift to a0 in [-1/2, 1/2], recur downward.
    const int steps = std::max(0, static_cast<int>(std::ceil(-alpha - 0.5)));
    const double a0 = alpha + steps;
    double value = (a0 == 0.0) ? e1_series(x) : small_order_series(a0, x, log_x);
    for (int j = 1; j <= steps; ++j) {
        const double a = a0 - j;
        value = (value - std::exp(a * log_x - x)) / a;
    }
    return from_plain(value);
}

}  // namespace

double log_gamma_1p(double a) {
    if (!(std::abs(a) <= 0.5)) {
        return std::lgamma(1.0 + a);
    }
    // ln Gamma(1+a) = -ln(1+a) + a(1 - gamma_E) + sum_{k>=2} (-1)^k (zeta(k) - 1) a^k / k
    const auto& zeta = zeta_minus_one();
    double power = a * a;  // (-a)^k
    double sum = 0.0;
    for (std::size_t i = 0; i < zeta.size(); ++i) {
        sum += zeta[i] * power / static_cast<double>(i + 2);
        power *= -a;
    }
    return -std::log1p(a) + a * (1.0 - kEulerGamma) + sum;
}

double upper_incomplete_gamma(double alpha, double x) { return evaluate(alpha, x, Form::plain); }

double upper_incomplete_gamma_scaled(double alpha, double x) {
    if (!(x > 0.0)) {
        validate(alpha, x);
        throw DomainError("upper_incomplete_gamma_scaled: requires x > 0 " + describe(alpha, x));
    }
    return evaluate(alpha, x, Form::scaled);
}

double exponential_integral_e1(double x) {
    if (!std::isfinite(x) || !(x > 0.0)) {
        throw DomainError("exponential_integral_e1: requires finite x > 0 " + describe(0.0, x));
    }
    return x > 1.0 ? continued_fraction_scaled(0.0, x) * std::exp(-x) : e1_series(x);
}

}  // namespace longevity::specfun
