#include "longevity/pooling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "longevity/errors.hpp"
#include "longevity/numerics.hpp"

namespace longevity {
namespace {

__extension__ using wide = __int128;

void require_gamma(double gamma) {
    if (!std::isfinite(gamma) || !(gamma > 0.0)) {
        throw DomainError("risk aversion gamma must be > 0, got " + std::to_string(gamma));
    }
}

PoolingResult make_result(double log_aew, double factor_individual, double factor_group) {
    PoolingResult out;
    out.delta = std::expm1(log_aew);
    out.aew = 1.0 + out.delta;
    out.wtp = wtp(out.delta);
    out.factor_individual = factor_individual;
    out.factor_group = factor_group;
    return out;
}

double log_aew_group(double gamma, double a_individual, double a_group, double a_adjusted) {
    const double k = 1.0 / (1.0 - gamma);
    return k * std::log(a_individual) - std::log(a_group) - gamma * k * std::log(a_adjusted);
}

// Horizon beyond which both survival and survival^{1/gamma} are below 1e-14.
// Every oracle integrand carries survival^{1/gamma}; cut where that is 1e-14.
double oracle_horizon(const GompertzLaw& law, double x, double gamma) {
    const double log_threshold = gamma * std::log(1e-14);
    const double c = std::exp((x - law.modal()) / law.dispersion());
    return law.dispersion() * std::log1p(-log_threshold / c);
}

}  // namespace

void validate(const Preferences& prefs, double r) {
    require_gamma(prefs.gamma);
    if (prefs.rho != r) {
        throw DomainError("subjective discount rate must equal the valuation rate");
    }
}

double wtp(double delta) {
    if (!std::isfinite(delta) || !(delta > -1.0)) {
        throw DomainError("wtp: delta must be > -1, got " + std::to_string(delta));
    }
    return delta / (1.0 + delta);
}

PoolingResult aew_homogeneous(double r, const GompertzLaw& law, double x, double gamma) {
    require_gamma(gamma);
    const double m = law.modal();
    const double b = law.dispersion();
    const double a = annuity_factor_mb(r, x, m, b);
    if (gamma == 1.0) {
        return make_result(std::log1p(utility_oracle_delta(r, law, law, x, 1.0)), a, a);
    }
    const double a_adjusted = annuity_factor_mb(r, x - b * std::log(gamma), m, b);
    return make_result(gamma / (1.0 - gamma) * std::log(a / a_adjusted), a, a);
}

PoolingResult aew_group(double r, const GompertzLaw& individual, const GompertzLaw& group,
                        double x, double gamma) {
    require_gamma(gamma);
    const double m = individual.modal();
    const double b = individual.dispersion();
    const double a_i = annuity_factor_mb(r, x, m, b);
    const double a_g = annuity_factor_mb(r, x, group.modal(), group.dispersion());
    if (gamma == 1.0) {
        return make_result(std::log1p(utility_oracle_delta(r, individual, group, x, 1.0)), a_i,
                           a_g);
    }
    const double a_adjusted = annuity_factor_mb(r, x - b * std::log(gamma), m, b);
    return make_result(log_aew_group(gamma, a_i, a_g, a_adjusted), a_i, a_g);
}

PoolingResult aew_homogeneous_hg(double r, double h, double g, double gamma) {
    return aew_group_hg(r, h, g, h, g, gamma);
}

PoolingResult aew_group_hg(double r, double h, double g, double h_group, double g_group,
                           double gamma) {
    require_gamma(gamma);
    const double a_i = annuity_factor_hg(r, h, g);
    const double a_g = annuity_factor_hg(r, h_group, g_group);
    if (gamma == 1.0) {
        const AgeBounds free{0.0, 0.0, false};
        const GompertzLaw ind = from_hg({0.0, h, g}, free);
        const GompertzLaw grp = from_hg({0.0, h_group, g_group}, free);
        return make_result(std::log1p(utility_oracle_delta(r, ind, grp, 0.0, 1.0)), a_i, a_g);
    }
    const double a_adjusted = annuity_factor_hg(r, h / gamma, g);
    if (h == h_group && g == g_group) {
        return make_result(gamma / (1.0 - gamma) * std::log(a_i / a_adjusted), a_i, a_g);
    }
    return make_result(log_aew_group(gamma, a_i, a_g, a_adjusted), a_i, a_g);
}

double utility_oracle_delta(double r, const GompertzLaw& individual, const GompertzLaw& group,
                            double x, double gamma) {
    require_gamma(gamma);
    if (!std::isfinite(r) || r < 0.0) throw DomainError("utility_oracle_delta: r must be >= 0");

    const double horizon = oracle_horizon(individual, x, gamma);
    // The oracle is compared at 1e-5; tighter requests only chase rounding noise.
    constexpr double kRelTol = 1e-10;
    auto log_p = [&](double t) { return log_survival(individual, x, t); };

    // Budget constant of the optimal path without annuities.
    const double A =
        integrate([&](double t) { return std::exp(-r * t + log_p(t) / gamma); }, 0.0, horizon,
                  0.0, kRelTol)
            .value;
    const double log_A = std::log(A);
    auto log_consumption = [&](double t) { return log_p(t) / gamma - log_A; };

    const double a_individual = annuity_factor_quadrature(r, individual, x);
    const double a_group = annuity_factor_quadrature(r, group, x);
    const double consumption_annuitized = 1.0 / a_group;

    if (gamma != 1.0) {
        const double k = 1.0 - gamma;
        const double u_star =
            integrate(
                [&](double t) {
                    return std::exp(-r * t + log_p(t) + k * log_consumption(t)) / k;
                },
                0.0, horizon, 0.0, kRelTol)
                .value;
        const double u_annuitized = a_individual * std::pow(consumption_annuitized, k) / k;
        return std::pow(u_annuitized / u_star, 1.0 / k) - 1.0;
    }

    // Log utility. U*(w) is increasing in w; bracket and solve U*(1 + delta) = U**.
    const double u_annuitized = a_individual * std::log(consumption_annuitized);
    auto gap = [&](double delta) {
        const double log_w = std::log1p(delta);
        return integrate(
                   [&](double t) {
                       return std::exp(-r * t + log_p(t)) * (log_w + log_consumption(t));
                   },
                   0.0, horizon, 0.0, kRelTol)
                   .value -
               u_annuitized;
    };
    double lo = -0.5;
    double hi = 1.0;
    for (int i = 0; i < 60 && gap(lo) > 0.0; ++i) lo = -1.0 + (1.0 + lo) / 10.0;
    for (int i = 0; i < 60 && gap(hi) < 0.0; ++i) hi = 2.0 * hi + 1.0;
    return find_root(gap, lo, hi);
}

SubsidyReport subsidy_table(const std::vector<Participant>& participants, double r,
                            PaymentMode mode) {
    if (participants.size() < 2) {
        throw ValidationError("subsidy_table: need at least 2 participants");
    }
    SubsidyReport report;
    std::vector<std::int64_t> weights;
    for (const auto& p : participants) {
        if (!std::isfinite(p.contribution) || p.contribution < 0.0) {
            throw DomainError("subsidy_table: contribution must be >= 0 for " + p.label);
        }
        if (!std::isfinite(p.income) || p.income < 0.0) {
            throw DomainError("subsidy_table: income must be >= 0 for " + p.label);
        }
        const double years = std::holds_alternative<double>(p.horizon)
                                 ? std::get<double>(p.horizon)
                                 : moments(std::get<GompertzLaw>(p.horizon), p.age).mean;
        if (!std::isfinite(years) || !(years > 0.0)) {
            throw DomainError("subsidy_table: horizon must be > 0 years for " + p.label);
        }
        SubsidyRow row;
        row.label = p.label;
        row.years = years;
        row.income = p.income;
        row.pv_cents = std::llround(term_certain_pv(p.income, years, r, mode) * 100.0);
        report.total_liability_cents += row.pv_cents;
        report.rows.push_back(row);
        weights.push_back(std::llround(p.contribution * 100.0));
    }

    std::int64_t weight_total = std::accumulate(weights.begin(), weights.end(), std::int64_t{0});
    if (weight_total == 0) {
        std::fill(weights.begin(), weights.end(), 1);
        weight_total = static_cast<std::int64_t>(weights.size());
    }
    std::int64_t assigned = 0;
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto share = static_cast<wide>(report.total_liability_cents) * weights[i] /
                           weight_total;
        report.rows[i].funded_cents = static_cast<std::int64_t>(share);
        assigned += report.rows[i].funded_cents;
    }
    for (std::size_t i = 0; assigned < report.total_liability_cents;
         i = (i + 1) % report.rows.size()) {
        if (weights[i] == 0) continue;
        ++report.rows[i].funded_cents;
        ++assigned;
    }
    for (auto& row : report.rows) row.transfer_cents = row.pv_cents - row.funded_cents;
    return report;
}

std::vector<SweepPoint> delta_vs_g_sweep(double r, double gamma, double x,
                                         const std::vector<double>& g_grid,
                                         const std::variant<FixedHazards, ClamLine>& source) {
    if (g_grid.empty()) throw DomainError("delta_vs_g_sweep: empty growth grid");
    std::vector<SweepPoint> out;
    if (const auto* fixed = std::get_if<FixedHazards>(&source)) {
        if (fixed->hazards.empty()) throw DomainError("delta_vs_g_sweep: no hazards given");
        for (double h : fixed->hazards) {
            for (double g : g_grid) out.push_back({g, h, aew_homogeneous_hg(r, h, g, gamma).delta});
        }
    } else {
        const auto& line = std::get<ClamLine>(source);
        for (double g : g_grid) {
            const double h = std::exp(line.L + g * (x - line.x_star));
            out.push_back({g, h, aew_homogeneous_hg(r, h, g, gamma).delta});
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const SweepPoint& a, const SweepPoint& b) {
        return a.g < b.g || (a.g == b.g && a.hazard < b.hazard);
    });
    return out;
}

std::vector<ModalSweepPoint> delta_vs_m_sweep(double r, double gamma, double x, double b,
                                              const std::vector<double>& m_grid,
                                              const GompertzLaw& group) {
    if (m_grid.empty()) throw DomainError("delta_vs_m_sweep: empty modal-age grid");
    std::vector<ModalSweepPoint> out;
    out.reserve(m_grid.size());
    for (double m : m_grid) {
        const GompertzLaw law(m, b);
        out.push_back({m, aew_homogeneous(r, law, x, gamma).delta,
                       aew_group(r, law, group, x, gamma).delta});
    }
    return out;
}

}  // namespace longevity
