#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "longevity/mortality.hpp"

namespace longevity {

enum class Gender { male, female, unisex };

std::string to_string(Gender g);
// Accepts male/female/unisex, M/F/U, case-insensitive. Throws ValidationError.
Gender parse_gender(std::string_view text);

struct MortalityRow {
    double age = 0.0;
    double q = 0.0;  // one-year death probability, per unit
};

struct MortalityObservations {
    Gender gender = Gender::unisex;
    int percentile = 0;
    std::vector<MortalityRow> rows;
};

// Ages strictly increasing, q in [0, 1), percentile in [1, 100].
void validate(const MortalityObservations& obs);

struct AgeWindow {
    double lo = 0.0;
    double hi = 0.0;
};

struct LinearFit {
    std::size_t n = 0;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double adj_r_squared = 0.0;
    double slope_se = 0.0;
    double intercept_se = 0.0;
    double slope_t = 0.0;
    double intercept_t = 0.0;
    std::vector<double> residuals;
};

// Ordinary least squares of y on x. Needs >= 3 points and a non-constant x.
LinearFit ols(const std::vector<double>& x, const std::vector<double>& y);

// Gompertz-Makeham fit from one-year death rates:
//     ln(-ln(1 - q_x) - lambda) = K + g x,   h = e^K g / (e^g - 1).
struct GompertzFit {
    double h = 0.0;  // hazard at age 0
    double g = 0.0;
    double lambda = 0.0;
    double K = 0.0;
    double r_squared = 0.0;
    std::vector<double> residuals;
    LinearFit regression;
};

GompertzFit gompertz_fit(const MortalityObservations& obs, double lambda = 0.0,
                         std::optional<AgeWindow> window = std::nullopt);

// One-year death probability implied by a fit at `age`.
double fitted_q(const GompertzFit& fit, double age);

// Regression of ln h on g across cohorts: ln h = L - x_star g.
struct ClamFit {
    double L = 0.0;
    double x_star = 0.0;
    double lambda = 0.0;
    double lambda_star = 0.0;  // e^L + lambda
    double r_squared = 0.0;
    LinearFit regression;
    std::size_t cohorts = 0;
    double g_min = 0.0;
    double g_max = 0.0;
    double g_mean = 0.0;
    double log_log2_gap = 0.0;  // L - ln(ln 2)
};

// Pairs are (ln h, g).
ClamFit clam_fit(const std::vector<std::pair<double, double>>& log_h_g, double lambda = 0.0);
ClamFit clam_fit(const std::vector<GompertzFit>& fits);

// g solving q_b = q_a e^{g T}.
double growth_rate_between(double q_a, double q_b, double T);

struct ProjectedRate {
    double q = 0.0;
    bool saturated = false;  // true when q_base e^{g dt} reached 1 and was capped
};

ProjectedRate project_qx(double q_base, double g, double delta_years);

// Single Gompertz law whose log-hazard best fits (least squares, annual
// knots) the log-hazard of the weighted survival mixture over the window,
// with the mixture formed by survivors at the window start.
GompertzLaw mixture_fit(const std::vector<GompertzLaw>& laws, const std::vector<double>& weights,
                        AgeWindow window = {65.0, 100.0});

}  // namespace longevity
