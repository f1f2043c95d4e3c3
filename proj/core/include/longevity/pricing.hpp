#pragma once

#include "longevity/mortality.hpp"

namespace longevity {

// Valuation rate and the law the market prices with.
struct MarketBasis {
    MarketBasis(double r, GompertzLaw law);

    double rate;
    GompertzLaw pricing_law;
};

// Present value of 1 per year, paid continuously for life, under a
// Gompertz law anchored at the purchase age:
//
//     a(r, h, g) = Gamma(-r/g, h/g) e^{h/g} (h/g)^{r/g} / g
//
// r = 0 gives the remaining life expectancy. Requires r >= 0, h > 0, g > 0.
double annuity_factor_hg(double r, double h, double g);

//     a(r, x, m, b) = b Gamma(-r b, e^{(x-m)/b}) exp(e^{(x-m)/b} - r (m - x))
double annuity_factor_mb(double r, double x, double m, double b);

double annuity_factor(const MarketBasis& basis, double x);

// Direct quadrature of e^{-rt} survival(x, t) up to the 1e-14 survival horizon.
double annuity_factor_quadrature(double r, const GompertzLaw& law, double x);

// Constant hazard lambda: 1 / (r + lambda).
double exponential_annuity_factor(double r, double lambda);

enum class PaymentMode { annual_immediate, monthly_immediate, continuous };

// Fixed-term annuity paying `payment` per year for `years` years at annual
// effective rate r. Monthly mode pays payment/12 at month ends; continuous
// discounts at ln(1 + r).
double term_certain_pv(double payment, double years, double r,
                       PaymentMode mode = PaymentMode::annual_immediate);

}  // namespace longevity
