#include <cmath>
#include <vector>

#include "doctest.h"
#include "longevity/errors.hpp"
#include "longevity/numerics.hpp"
#include "longevity/pricing.hpp"

using namespace longevity;

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

const AgeBounds kLoose{0.0, 0.0, false};
const std::vector<double> kHazards{0.001, 0.003, 0.01, 0.03, 0.1, 0.25, 0.5};
const std::vector<double> kGrowths{0.04, 0.06, 0.08, 0.1, 0.12, 0.15};
const std::vector<double> kRates{0.0, 0.01, 0.03, 0.06};

}  // namespace

TEST_CASE("closed-form factor golden values") {
    CHECK(std::abs(annuity_factor_hg(0.03, 0.1, 0.08) - 5.552432) < 1e-5);
    CHECK(std::abs(annuity_factor_hg(0.03, 0.2, 0.08) - 3.464195) < 1e-5);
    CHECK(std::abs(annuity_factor_hg(0.03, 0.3, 0.08) - 2.543422) < 1e-5);
    CHECK(std::abs(annuity_factor_hg(0.03, 0.1, 0.09) - 5.392625) < 1e-5);
    CHECK(std::abs(annuity_factor_hg(0.03, 0.1, 0.12) - 4.981276) < 1e-5);
    CHECK(std::abs(annuity_factor_hg(0.03, 0.1, 0.15) - 4.646376) < 1e-5);
}

TEST_CASE("zero rate gives life expectancy") {
    CHECK(annuity_factor_hg(0.0, 0.002586, 0.115) == doctest::Approx(28.82).epsilon(5e-3));
    CHECK(annuity_factor_mb(0.0, 65.0, 98.0, 8.696) == doctest::Approx(28.82).epsilon(5e-3));
}

TEST_CASE("worked two-group factors") {
    CHECK(rel_err(annuity_factor_mb(0.03, 65.0, 75.02, 11.87), 9.493) < 5e-3);
    CHECK(rel_err(annuity_factor_mb(0.03, 51.96, 75.02, 11.87), 14.528) < 5e-3);
    CHECK(rel_err(annuity_factor_mb(0.03, 65.0, 85.45, 12.41), 13.583) < 5e-3);
}

TEST_CASE("closed form agrees with quadrature over the grid") {
    for (double r : kRates) {
        for (double h : kHazards) {
            for (double g : kGrowths) {
                const GompertzLaw law = from_hg({65.0, h, g}, kLoose);
                const double closed = annuity_factor_hg(r, h, g);
                const double quad = annuity_factor_quadrature(r, law, 65.0);
                CAPTURE(r);
                CAPTURE(h);
                CAPTURE(g);
                CHECK(rel_err(closed, quad) <= 1e-8);
            }
        }
    }
}

TEST_CASE("quadrature oracle matches the published factors") {
    const double g_values[] = {0.09, 0.12};
    const double expected[] = {5.392625, 4.981276};
    for (int i = 0; i < 2; ++i) {
        const GompertzLaw law = from_hg({65.0, 0.1, g_values[i]});
        CHECK(std::abs(annuity_factor_quadrature(0.03, law, 65.0) - expected[i]) < 1e-5);
    }
}

TEST_CASE("factor declines in rate, hazard and growth") {
    for (double h : kHazards) {
        for (double g : kGrowths) {
            for (std::size_t i = 1; i < kRates.size(); ++i) {
                CHECK(annuity_factor_hg(kRates[i], h, g) < annuity_factor_hg(kRates[i - 1], h, g));
            }
        }
    }
    for (double r : kRates) {
        for (double g : kGrowths) {
            for (std::size_t i = 1; i < kHazards.size(); ++i) {
                CHECK(annuity_factor_hg(r, kHazards[i], g) < annuity_factor_hg(r, kHazards[i - 1], g));
            }
        }
        for (double h : kHazards) {
            for (std::size_t i = 1; i < kGrowths.size(); ++i) {
                CHECK(annuity_factor_hg(r, h, kGrowths[i]) < annuity_factor_hg(r, h, kGrowths[i - 1]));
            }
        }
    }
}

TEST_CASE("factor is bounded by life expectancy") {
    for (double h : kHazards) {
        for (double g : kGrowths) {
            for (double r : kRates) {
                CHECK(annuity_factor_hg(r, h, g) <= annuity_factor_hg(0.0, h, g));
            }
        }
    }
}

TEST_CASE("factor falls towards zero as the rate grows") {
    double previous = annuity_factor_hg(0.0, 0.01, 0.09);
    for (double r = 0.1; r <= 20.0; r *= 2.0) {
        const double a = annuity_factor_hg(r, 0.01, 0.09);
        CHECK(a < previous);
        CHECK(a > 0.0);
        previous = a;
    }
    CHECK(previous < 0.1);
}

TEST_CASE("both parameterizations agree") {
    for (double r : kRates) {
        for (double h : kHazards) {
            for (double g : kGrowths) {
                const GompertzLaw law = from_hg({65.0, h, g}, kLoose);
                const double mb = annuity_factor_mb(r, 65.0, law.modal(), law.dispersion());
                CHECK(rel_err(mb, annuity_factor_hg(r, h, g)) < 1e-12);
            }
        }
    }
    const MarketBasis basis(0.03, GompertzLaw(85.45, 12.41));
    CHECK(annuity_factor(basis, 65.0) == annuity_factor_mb(0.03, 65.0, 85.45, 12.41));
}

TEST_CASE("constant-hazard factor") {
    CHECK(exponential_annuity_factor(0.03, 0.07) == doctest::Approx(10.0));
    CHECK(exponential_annuity_factor(0.0, 0.05) == doctest::Approx(20.0));
    for (double r : {0.0, 0.02, 0.05}) {
        for (double lambda : {0.01, 0.1}) {
            const double quad = integrate([&](double t) { return std::exp(-(r + lambda) * t); }, 0.0,
                                          40.0 / (r + lambda), 0.0, 1e-13)
                                    .value;
            CHECK(std::abs(exponential_annuity_factor(r, lambda) - quad) < 1e-10 * quad);
        }
    }
    CHECK_THROWS_AS(exponential_annuity_factor(0.0, 0.0), DomainError);
}

TEST_CASE("term-certain present values") {
    const double annual_10 = term_certain_pv(25000.0, 10.0, 0.03);
    const double geometric = 25000.0 * (1.0 - std::pow(1.03, -10.0)) / 0.03;
    CHECK(annual_10 == doctest::Approx(geometric).epsilon(1e-12));
    CHECK(std::abs(annual_10 - 213255.0) < 1.0);
    CHECK(rel_err(annual_10, 212750.0) < 0.01);
    CHECK(rel_err(term_certain_pv(25000.0, 30.0, 0.03), 487250.0) < 0.01);

    for (auto mode :
         {PaymentMode::annual_immediate, PaymentMode::monthly_immediate, PaymentMode::continuous}) {
        CHECK(term_certain_pv(25000.0, 10.0, 0.0, mode) == doctest::Approx(250000.0));
    }

    double monthly = 0.0;
    for (int k = 1; k <= 120; ++k) monthly += 25000.0 / 12.0 * std::pow(1.03, -k / 12.0);
    CHECK(term_certain_pv(25000.0, 10.0, 0.03, PaymentMode::monthly_immediate) ==
          doctest::Approx(monthly).epsilon(1e-12));

    const double force = std::log(1.03);
    const double continuous =
        integrate([&](double t) { return 25000.0 * std::exp(-force * t); }, 0.0, 10.0).value;
    CHECK(term_certain_pv(25000.0, 10.0, 0.03, PaymentMode::continuous) ==
          doctest::Approx(continuous).epsilon(1e-12));
}

TEST_CASE("pricing domain errors") {
    CHECK_THROWS_AS(annuity_factor_hg(-0.01, 0.1, 0.08), DomainError);
    CHECK_THROWS_AS(annuity_factor_hg(0.03, 0.0, 0.08), DomainError);
    CHECK_THROWS_AS(annuity_factor_hg(0.03, 0.1, 0.0), DomainError);
    CHECK_THROWS_AS(annuity_factor_mb(0.03, 65.0, 85.0, 0.0), DomainError);
    CHECK_THROWS_AS(MarketBasis(-0.01, GompertzLaw(85.0, 10.0)), DomainError);
    CHECK_THROWS_AS(term_certain_pv(25000.0, 0.0, 0.03), DomainError);
    CHECK_THROWS_AS(term_certain_pv(25000.0, 10.0, -0.03), DomainError);
}
