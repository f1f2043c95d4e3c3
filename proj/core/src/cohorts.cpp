#include "longevity/cohorts.hpp"

namespace longevity::cohorts {

const std::vector<CohortParameters>& us_income_percentiles() {
    static const std::vector<CohortParameters> table{
        {Gender::female, 1, 0.0164, 0.0529},   {Gender::female, 5, 0.0122, 0.0668},
        {Gender::female, 10, 0.0115, 0.0808},  {Gender::female, 20, 0.0100, 0.0890},
        {Gender::female, 30, 0.0086, 0.0861},  {Gender::female, 40, 0.0078, 0.0884},
        {Gender::female, 50, 0.0069, 0.0873},  {Gender::female, 60, 0.0069, 0.1006},
        {Gender::female, 70, 0.0055, 0.0908},  {Gender::female, 80, 0.0050, 0.1035},
        {Gender::female, 90, 0.0045, 0.1049},  {Gender::female, 95, 0.0038, 0.0974},
        {Gender::female, 100, 0.0034, 0.0989}, {Gender::male, 1, 0.0302, 0.0656},
        {Gender::male, 5, 0.0210, 0.0663},     {Gender::male, 10, 0.0200, 0.0746},
        {Gender::male, 20, 0.0175, 0.0831},    {Gender::male, 30, 0.0150, 0.0878},
        {Gender::male, 40, 0.0118, 0.0843},    {Gender::male, 50, 0.0106, 0.0883},
        {Gender::male, 60, 0.0089, 0.0868},    {Gender::male, 70, 0.0082, 0.0931},
        {Gender::male, 80, 0.0070, 0.0949},    {Gender::male, 90, 0.0060, 0.0980},
        {Gender::male, 95, 0.0051, 0.0968},    {Gender::male, 100, 0.0042, 0.0874},
    };
    return table;
}

const std::vector<double>& illustrative_growth_rates() {
    static const std::vector<double> g{0.115, 0.105, 0.095, 0.085, 0.075, 0.065, 0.055};
    return g;
}

std::vector<GompertzLaw> illustrative_laws(double m) {
    std::vector<GompertzLaw> laws;
    for (double g : illustrative_growth_rates()) laws.emplace_back(m, 1.0 / g);
    return laws;
}

}  // namespace longevity::cohorts
