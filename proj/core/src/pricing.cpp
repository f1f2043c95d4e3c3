#include "longevity/pricing.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "longevity/errors.hpp"
#include "longevity/numerics.hpp"
#include "longevity/specfun.hpp"

namespace longevity {
namespace {

void require_rate(double r) {
    if (!std::isfinite(r) || r < 0.0) {
        throw DomainError("valuation rate must be finite and >= 0, got " + std::to_string(r));
    }
}

double finite_or_throw(double value, const char* what) {
    if (!std::isfinite(value) || !(value > 0.0)) {
        throw DomainError(std::string(what) + ": annuity factor not representable");
    }
    return value;
}

}  // namespace

MarketBasis::MarketBasis(double r, GompertzLaw law) : rate(r), pricing_law(std::move(law)) {
    require_rate(r);
}

double annuity_factor_hg(double r, double h, double g) {
    require_rate(r);
    if (!std::isfinite(h) || !(h > 0.0)) throw DomainError("annuity_factor_hg: h must be > 0");
    if (!std::isfinite(g) || !(g > 0.0)) throw DomainError("annuity_factor_hg: g must be > 0");
    const double c = h / g;
    if (!(c > 0.0)) throw DomainError("annuity_factor_hg: h/g underflows");
    return finite_or_throw(specfun::upper_incomplete_gamma_scaled(-r / g, c) / g,
                           "annuity_factor_hg");
}

double annuity_factor_mb(double r, double x, double m, double b) {
    require_rate(r);
    if (!std::isfinite(b) || !(b > 0.0)) throw DomainError("annuity_factor_mb: b must be > 0");
    if (!std::isfinite(x) || !std::isfinite(m)) {
        throw DomainError("annuity_factor_mb: ages must be finite");
    }
    const double c = std::exp((x - m) / b);
    if (!(c > 0.0)) throw DomainError("annuity_factor_mb: e^{(x-m)/b} underflows");
    return finite_or_throw(b * specfun::upper_incomplete_gamma_scaled(-r * b, c),
                           "annuity_factor_mb");
}

double annuity_factor(const MarketBasis& basis, double x) {
    return annuity_factor_mb(basis.rate, x, basis.pricing_law.modal(),
                             basis.pricing_law.dispersion());
}

double annuity_factor_quadrature(double r, const GompertzLaw& law, double x) {
    require_rate(r);
    const double horizon = survival_horizon(law, x);
    return integrate([&](double t) { return std::exp(-r * t + log_survival(law, x, t)); }, 0.0,
                     horizon)
        .value;
}

double exponential_annuity_factor(double r, double lambda) {
    if (!std::isfinite(r) || !std::isfinite(lambda) || !(r + lambda > 0.0)) {
        throw DomainError("exponential_annuity_factor: requires r + lambda > 0");
    }
    return 1.0 / (r + lambda);
}

double term_certain_pv(double payment, double years, double r, PaymentMode mode) {
    require_rate(r);
    if (!std::isfinite(years) || !(years > 0.0)) {
        throw DomainError("term_certain_pv: years must be > 0");
    }
    if (r == 0.0) return payment * years;

    const double force = std::log1p(r);
    const double discounted = -std::expm1(-force * years);  // 1 - (1+r)^-n
    switch (mode) {
        case PaymentMode::annual_immediate:
            return payment * discounted / r;
        case PaymentMode::monthly_immediate:
            return payment / 12.0 * discounted / std::expm1(force / 12.0);
        case PaymentMode::continuous:
            return payment * discounted / force;
    }
    throw DomainError("term_certain_pv: unknown payment mode");
}

}  // namespace longevity
