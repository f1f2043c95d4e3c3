#pragma once

#include <vector>

#include "longevity/mortality.hpp"
#include "longevity/report.hpp"

namespace longevity::cohorts {

// Published age-65 (h, g) pairs by income percentile for U.S. males and
// females (percentile 1 is the lowest group, 100 the highest).
const std::vector<CohortParameters>& us_income_percentiles();

// Growth rates 11.5% down to 5.5% in steps of one point.
const std::vector<double>& illustrative_growth_rates();

// Laws (m, 1/g) for each illustrative growth rate.
std::vector<GompertzLaw> illustrative_laws(double m);

}  // namespace longevity::cohorts
