#include "longevity/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <cstdio>
#include <string>
#include <tuple>

#include "longevity/errors.hpp"
#include "longevity/mortality.hpp"
#include "longevity/pooling.hpp"
#include "longevity/pricing.hpp"

namespace longevity {

ReportRow evaluate_cohort(const CohortParameters& cohort, const CohortParameters& group, double r,
                          double gamma, double x) {
    const GompertzLaw law = from_hg({x, cohort.h, cohort.g});
    const LifetimeMoments mom = moments(law, x);
    const PoolingResult fair = aew_homogeneous_hg(r, cohort.h, cohort.g, gamma);
    const PoolingResult pooled = aew_group_hg(r, cohort.h, cohort.g, group.h, group.g, gamma);

    ReportRow row;
    row.percentile = cohort.percentile;
    row.gender = cohort.gender;
    row.h65 = cohort.h;
    row.g = cohort.g;
    row.m = law.modal();
    row.b = law.dispersion();
    row.e_t65 = mom.mean;
    row.sd_t65 = mom.sd;
    row.covol = mom.covol;
    row.annuity_factor = fair.factor_individual;
    row.delta_individual = fair.delta;
    row.delta_group = pooled.delta;
    row.wtp_individual = fair.wtp;
    row.wtp_group = pooled.wtp;
    return row;
}

Report build_report(std::vector<CohortParameters> cohorts, double r, double gamma, double x,
                    int group_percentile) {
    if (cohorts.empty()) throw ValidationError("build_report: no cohorts");
    std::stable_sort(cohorts.begin(), cohorts.end(), [](const auto& a, const auto& b) {
        return std::tie(a.gender, a.percentile) < std::tie(b.gender, b.percentile);
    });

    std::map<Gender, CohortParameters> groups;
    for (const auto& c : cohorts) {
        if (c.percentile == group_percentile) groups.emplace(c.gender, c);
    }

    Report report;
    for (const auto& c : cohorts) {
        const auto it = groups.find(c.gender);
        if (it == groups.end()) {
            throw ValidationError("build_report: no " + to_string(c.gender) + " cohort at percentile " +
                                  std::to_string(group_percentile) +
                                  " to price the group annuity");
        }
        report.rows.push_back(evaluate_cohort(c, it->second, r, gamma, x));
    }
    for (const auto& [gender, g] : groups) {
        report.notes.push_back("group pricing law (" + to_string(gender) + "): percentile " +
                               std::to_string(g.percentile) +
                               " fit, used as an approximation of the pooled population law");
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "r=%g gamma=%g age=%g", r, gamma, x);
    report.notes.insert(report.notes.begin(), buf);
    return report;
}

PipelineResult run_pipeline(const LoadedDataset& data, const RunConfig& config) {
    validate(config);
    if (data.cohorts.empty()) throw ValidationError("run_pipeline: dataset has no cohorts");

    PipelineResult result;
    result.cohorts = data.cohorts;
    std::map<Gender, std::vector<GompertzFit>> by_gender;
    std::vector<CohortParameters> params;
    for (const auto& obs : data.cohorts) {
        GompertzFit fit = gompertz_fit(obs, config.lambda, config.fit_window);
        params.push_back({obs.gender, obs.percentile, fit.h * std::exp(fit.g * config.x), fit.g});
        by_gender[obs.gender].push_back(fit);
        result.fits.push_back(std::move(fit));
    }
    for (const auto& [gender, fits] : by_gender) {
        if (fits.size() >= 3) result.clam.emplace_back(gender, clam_fit(fits));
    }
    result.report = build_report(std::move(params), config.r, config.gammas.front(), config.x,
                                 config.group_percentile);
    return result;
}

}  // namespace longevity
