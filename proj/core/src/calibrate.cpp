#include "longevity/calibrate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "longevity/errors.hpp"

namespace longevity {
namespace {

std::string lower(std::string_view text) {
    std::string s(text);
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string age_text(double age) {
    std::string s = std::to_string(age);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

}  // namespace

std::string to_string(Gender g) {
    switch (g) {
        case Gender::male:
            return "male";
        case Gender::female:
            return "female";
        case Gender::unisex:
            return "unisex";
    }
    return "unisex";
}

Gender parse_gender(std::string_view text) {
    const std::string s = lower(text);
    if (s == "male" || s == "m") return Gender::male;
    if (s == "female" || s == "f") return Gender::female;
    if (s == "unisex" || s == "u" || s == "both" || s == "all") return Gender::unisex;
    throw ValidationError("unknown gender '" + std::string(text) + "'");
}

void validate(const MortalityObservations& obs) {
    if (obs.percentile < 1 || obs.percentile > 100) {
        throw ValidationError("percentile must lie in [1, 100], got " +
                              std::to_string(obs.percentile));
    }
    for (std::size_t i = 0; i < obs.rows.size(); ++i) {
        const auto& row = obs.rows[i];
        if (!std::isfinite(row.age) || !(row.q >= 0.0 && row.q < 1.0)) {
            throw ValidationError("row at age " + age_text(row.age) + ": q must lie in [0, 1)");
        }
        if (i > 0 && !(row.age > obs.rows[i - 1].age)) {
            throw ValidationError("ages must be strictly increasing (age " + age_text(row.age) +
                                  ")");
        }
    }
}

LinearFit ols(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DomainError("ols: x and y differ in length");
    const std::size_t n = x.size();
    if (n < 3) throw DomainError("ols: need at least 3 points");

    const double nd = static_cast<double>(n);
    const double x_bar = std::accumulate(x.begin(), x.end(), 0.0) / nd;
    const double y_bar = std::accumulate(y.begin(), y.end(), 0.0) / nd;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - x_bar;
        const double dy = y[i] - y_bar;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw DomainError("ols: regressor is constant");

    LinearFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = y_bar - fit.slope * x_bar;
    fit.residuals.resize(n);
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        fit.residuals[i] = y[i] - (fit.intercept + fit.slope * x[i]);
        ssr += fit.residuals[i] * fit.residuals[i];
    }
    fit.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
    fit.adj_r_squared = 1.0 - (1.0 - fit.r_squared) * (nd - 1.0) / (nd - 2.0);
    const double s2 = ssr / (nd - 2.0);
    fit.slope_se = std::sqrt(s2 / sxx);
    fit.intercept_se = std::sqrt(s2 * (1.0 / nd + x_bar * x_bar / sxx));
    fit.slope_t = fit.slope / fit.slope_se;
    fit.intercept_t = fit.intercept / fit.intercept_se;
    return fit;
}

GompertzFit gompertz_fit(const MortalityObservations& obs, double lambda,
                         std::optional<AgeWindow> window) {
    validate(obs);
    if (!std::isfinite(lambda) || lambda < 0.0) {
        throw DomainError("gompertz_fit: lambda must be >= 0");
    }
    std::vector<double> ages;
    std::vector<double> z;
    for (const auto& row : obs.rows) {
        if (window && (row.age < window->lo || row.age > window->hi)) continue;
        const double excess = -std::log1p(-row.q) - lambda;
        if (!(excess > 0.0)) {
            throw DomainError("gompertz_fit: -ln(1 - q) <= lambda at age " + age_text(row.age) +
                              " (q=" + std::to_string(row.q) + ")");
        }
        ages.push_back(row.age);
        z.push_back(std::log(excess));
    }
    if (ages.size() < 3) {
        throw DomainError("gompertz_fit: need at least 3 rows in the fitting window");
    }

    GompertzFit fit;
    fit.regression = ols(ages, z);
    fit.g = fit.regression.slope;
    fit.K = fit.regression.intercept;
    fit.lambda = lambda;
    fit.h = std::exp(fit.K) * fit.g / std::expm1(fit.g);
    fit.r_squared = fit.regression.r_squared;
    fit.residuals = fit.regression.residuals;
    return fit;
}

double fitted_q(const GompertzFit& fit, double age) {
    return -std::expm1(-fit.lambda - fit.h * std::exp(fit.g * age) * std::expm1(fit.g) / fit.g);
}

ClamFit clam_fit(const std::vector<std::pair<double, double>>& log_h_g, double lambda) {
    if (log_h_g.size() < 3) throw DomainError("clam_fit: need at least 3 cohorts");
    std::vector<double> g;
    std::vector<double> log_h;
    for (const auto& [lh, gi] : log_h_g) {
        log_h.push_back(lh);
        g.push_back(gi);
    }
    ClamFit fit;
    fit.regression = ols(g, log_h);
    fit.L = fit.regression.intercept;
    fit.x_star = -fit.regression.slope;
    fit.lambda = lambda;
    fit.lambda_star = std::exp(fit.L) + lambda;
    fit.r_squared = fit.regression.r_squared;
    fit.cohorts = g.size();
    fit.g_min = *std::min_element(g.begin(), g.end());
    fit.g_max = *std::max_element(g.begin(), g.end());
    fit.g_mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    fit.log_log2_gap = fit.L - std::log(std::log(2.0));
    return fit;
}

ClamFit clam_fit(const std::vector<GompertzFit>& fits) {
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(fits.size());
    for (const auto& f : fits) {
        if (!(f.h > 0.0)) throw DomainError("clam_fit: fitted hazard must be > 0");
        pairs.emplace_back(std::log(f.h), f.g);
    }
    return clam_fit(pairs, fits.empty() ? 0.0 : fits.front().lambda);
}

double growth_rate_between(double q_a, double q_b, double T) {
    if (!(q_a > 0.0 && q_a < 1.0) || !(q_b > 0.0 && q_b < 1.0)) {
        throw DomainError("growth_rate_between: rates must lie in (0, 1)");
    }
    if (!std::isfinite(T) || !(T > 0.0)) {
        throw DomainError("growth_rate_between: T must be > 0");
    }
    return std::log(q_b / q_a) / T;
}

ProjectedRate project_qx(double q_base, double g, double delta_years) {
    if (!(q_base >= 0.0 && q_base < 1.0) || !std::isfinite(g) || !std::isfinite(delta_years)) {
        throw DomainError("project_qx: q_base must lie in [0, 1) and g, delta finite");
    }
    const double q = q_base * std::exp(g * delta_years);
    if (q >= 1.0) return {std::nextafter(1.0, 0.0), true};
    return {q, false};
}

GompertzLaw mixture_fit(const std::vector<GompertzLaw>& laws, const std::vector<double>& weights,
                        AgeWindow window) {
    if (laws.empty() || laws.size() != weights.size()) {
        throw DomainError("mixture_fit: need one weight per law");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) throw DomainError("mixture_fit: weights must be >= 0");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) throw DomainError("mixture_fit: weights must sum to 1");
    if (!(window.hi > window.lo)) throw DomainError("mixture_fit: empty age window");

    std::vector<double> ages;
    std::vector<double> log_hazard;
    for (double y = window.lo; y <= window.hi + 1e-9; y += 1.0) {
        double alive = 0.0;
        double dying = 0.0;
        for (std::size_t i = 0; i < laws.size(); ++i) {
            const double s = weights[i] * survival(laws[i], window.lo, y - window.lo);
            alive += s;
            dying += s * hazard(laws[i], y);
        }
        if (!(alive > 0.0) || !(dying > 0.0)) {
            throw ValidationError("mixture_fit: mixture has no survivors at age " + age_text(y));
        }
        ages.push_back(y);
        log_hazard.push_back(std::log(dying / alive));
    }
    if (ages.size() < 3) throw DomainError("mixture_fit: window needs at least 3 annual knots");

    // ln hazard(y) = -ln b - m/b + y/b
    const LinearFit fit = ols(ages, log_hazard);
    const double b = 1.0 / fit.slope;
    const double m = -b * (fit.intercept + std::log(b));
    return GompertzLaw(m, b, laws.front().bounds());
}

}  // namespace longevity
