#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "longevity/mortality.hpp"
#include "longevity/pricing.hpp"

namespace longevity {

// CRRA preferences. rho must equal the valuation rate.
struct Preferences {
    double gamma = 3.0;
    double rho = 0.03;
};

void validate(const Preferences& prefs, double r);

// delta is the value of pooling: annuity equivalent wealth minus one.
struct PoolingResult {
    double delta = 0.0;
    double aew = 1.0;
    double wtp = 0.0;
    double factor_individual = 0.0;
    double factor_group = 0.0;
};

// Fair (individual) pricing:
//     1 + delta = (a(r, x, m, b) / a(r, x - b ln gamma, m, b))^{gamma / (1 - gamma)}
// gamma == 1 has no closed form here and is delegated to utility_oracle_delta.
PoolingResult aew_homogeneous(double r, const GompertzLaw& law, double x, double gamma);

// Pricing off a pooled law:
//     1 + delta = a_i^{1/(1-gamma)} / (a_group a_i(x - b_i ln gamma)^{gamma/(1-gamma)})
PoolingResult aew_group(double r, const GompertzLaw& individual, const GompertzLaw& group,
                        double x, double gamma);

// Same as above with both laws given by (hazard, growth) at the purchase age.
// The risk-adjusted age x - b ln gamma corresponds to hazard h / gamma.
PoolingResult aew_homogeneous_hg(double r, double h, double g, double gamma);
PoolingResult aew_group_hg(double r, double h, double g, double h_group, double g_group,
                           double gamma);

// delta from lifetime utility computed by quadrature: optimal consumption
// without annuities c_t = p_t^{1/gamma} / A versus constant consumption
// 1 / a_group with full annuitization. gamma == 1 uses log utility and
// root-finding on U*(1 + delta) = U**.
double utility_oracle_delta(double r, const GompertzLaw& individual, const GompertzLaw& group,
                            double x, double gamma);

// Fraction of wealth given up for access to the annuity: delta / (1 + delta).
double wtp(double delta);

struct Participant {
    std::string label;
    double contribution = 0.0;  // funding weight; all zero means equal split
    double income = 0.0;        // per year
    std::variant<double, GompertzLaw> horizon = 0.0;  // years, or a law (uses E[T_age])
    double age = 65.0;
};

struct SubsidyRow {
    std::string label;
    double years = 0.0;
    double income = 0.0;
    std::int64_t pv_cents = 0;
    std::int64_t funded_cents = 0;
    std::int64_t transfer_cents = 0;  // pv - funded: negative subsidises others
};

// Amounts are in integer cents: each PV is rounded half away from zero and the
// total is split by contribution weight with remainder cents assigned in input
// order, so transfers sum to exactly zero.
struct SubsidyReport {
    std::vector<SubsidyRow> rows;
    std::int64_t total_liability_cents = 0;
};

SubsidyReport subsidy_table(const std::vector<Participant>& participants, double r,
                            PaymentMode mode = PaymentMode::annual_immediate);

// Hazards at the purchase age, each crossed with every growth rate.
struct FixedHazards {
    std::vector<double> hazards;
};

// Strong compensation line ln h_0 = L - x_star g; at age x the hazard is
// e^{L + g (x - x_star)}.
struct ClamLine {
    double L = 0.0;
    double x_star = 0.0;
};

struct SweepPoint {
    double g = 0.0;
    double hazard = 0.0;  // at the purchase age
    double delta = 0.0;
};

// Fair-pricing delta over the grid, ordered by g then hazard.
std::vector<SweepPoint> delta_vs_g_sweep(double r, double gamma, double x,
                                         const std::vector<double>& g_grid,
                                         const std::variant<FixedHazards, ClamLine>& source);

struct ModalSweepPoint {
    double m = 0.0;
    double delta_individual = 0.0;
    double delta_group = 0.0;
};

// Individual laws (m, b) for m in the grid, priced fairly and off `group`.
std::vector<ModalSweepPoint> delta_vs_m_sweep(double r, double gamma, double x, double b,
                                              const std::vector<double>& m_grid,
                                              const GompertzLaw& group);

}  // namespace longevity
