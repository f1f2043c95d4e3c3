#pragma once

#include <utility>
#include <vector>

#include "longevity/calibrate.hpp"
#include "longevity/ingest.hpp"

namespace longevity {

// Gompertz parameters of one income cohort, with h the hazard at the
// purchase age.
struct CohortParameters {
    Gender gender = Gender::unisex;
    int percentile = 0;
    double h = 0.0;
    double g = 0.0;
};

ReportRow evaluate_cohort(const CohortParameters& cohort, const CohortParameters& group, double r,
                          double gamma, double x);

// One row per cohort, ordered by (gender, percentile). The group law for each
// gender is that gender's cohort at `group_percentile`.
Report build_report(std::vector<CohortParameters> cohorts, double r, double gamma, double x,
                    int group_percentile);

struct PipelineResult {
    std::vector<MortalityObservations> cohorts;
    std::vector<GompertzFit> fits;  // aligned with cohorts
    std::vector<std::pair<Gender, ClamFit>> clam;  // genders with >= 3 cohorts
    Report report;
};

// Dataset -> per-cohort Gompertz fits -> CLaM regression per gender -> report
// at config.x using config.gammas.front().
PipelineResult run_pipeline(const LoadedDataset& data, const RunConfig& config);

}  // namespace longevity
