#include "longevity/mortality.hpp"

#include <cmath>
#include <string>

#include "longevity/errors.hpp"
#include "longevity/numerics.hpp"
#include "longevity/pricing.hpp"

namespace longevity {
namespace {

void require_horizon(double t) {
    if (!(t >= 0.0)) throw DomainError("horizon t must be >= 0, got " + std::to_string(t));
}

// e^{(x - m)/b}, the integrated hazard scale at age x.
double hazard_scale(const GompertzLaw& law, double x) {
    return std::exp((x - law.modal()) / law.dispersion());
}

}  // namespace

GompertzLaw::GompertzLaw(double m, double b, AgeBounds bounds) : m_(m), b_(b), bounds_(bounds) {
    if (!std::isfinite(m) || !std::isfinite(b)) {
        throw DomainError("GompertzLaw: parameters must be finite");
    }
    if (!(b > 0.0)) {
        throw DomainError("GompertzLaw: dispersion b must be > 0, got " + std::to_string(b));
    }
    if (bounds.enforce && !(m > bounds.lo && m < bounds.hi)) {
        throw DomainError("GompertzLaw: modal age " + std::to_string(m) + " outside (" +
                          std::to_string(bounds.lo) + ", " + std::to_string(bounds.hi) +
                          "); check the rate scale");
    }
}

GompertzLaw from_hg(const AgeAnchoredLaw& anchored, AgeBounds bounds) {
    const double h = anchored.hazard;
    const double g = anchored.growth;
    if (!std::isfinite(h) || !(h > 0.0)) {
        throw DomainError("from_hg: hazard must be > 0, got " + std::to_string(h));
    }
    if (!std::isfinite(g) || !(g > 0.0)) {
        throw DomainError("from_hg: growth must be > 0, got " + std::to_string(g));
    }
    return GompertzLaw(anchored.age - std::log(h / g) / g, 1.0 / g, bounds);
}

AgeAnchoredLaw to_hg(const GompertzLaw& law, double x) {
    return {x, hazard(law, x), law.growth()};
}

double hazard(const GompertzLaw& law, double age) {
    return hazard_scale(law, age) / law.dispersion();
}

double log_survival(const GompertzLaw& law, double x, double t) {
    require_horizon(t);
    return -hazard_scale(law, x) * std::expm1(t / law.dispersion());
}

double survival(const GompertzLaw& law, double x, double t) {
    return std::exp(log_survival(law, x, t));
}

double density(const GompertzLaw& law, double x, double t) {
    return hazard(law, x + t) * survival(law, x, t);
}

double survival_horizon(const GompertzLaw& law, double x, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw DomainError("survival_horizon: threshold must lie in (0, 1)");
    }
    return law.dispersion() * std::log1p(-std::log(threshold) / hazard_scale(law, x));
}

LifetimeMoments moments(const GompertzLaw& law, double x) {
    if (law.bounds().enforce && !(x < law.bounds().hi)) {
        throw DomainError("moments: age " + std::to_string(x) + " beyond upper bound");
    }
    const double mean = annuity_factor_mb(0.0, x, law.modal(), law.dispersion());
    const double horizon = survival_horizon(law, x);
    auto central = [&](double t) {
        const double d = t - mean;
        return d * d * density(law, x, t);
    };

    // Split at the density mode so each piece is smooth and near-unimodal.
    const double mode = law.modal() - x;
    double variance = 0.0;
    if (mode > 0.0 && mode < horizon) {
        variance = integrate(central, 0.0, mode).value + integrate(central, mode, horizon).value;
    } else {
        variance = integrate(central, 0.0, horizon).value;
    }
    const double sd = std::sqrt(variance);
    return {mean, sd, sd / mean};
}

std::vector<CovolPoint> covol_profile(const GompertzLaw& law, const std::vector<double>& ages) {
    std::vector<CovolPoint> out;
    out.reserve(ages.size());
    for (std::size_t i = 0; i < ages.size(); ++i) {
        if (i > 0 && !(ages[i] > ages[i - 1])) {
            throw DomainError("covol_profile: ages must be strictly increasing");
        }
        out.push_back({ages[i], moments(law, ages[i]).covol});
    }
    return out;
}

LifetimeMoments exponential_moments(double lambda) {
    if (!std::isfinite(lambda) || !(lambda > 0.0)) {
        throw DomainError("exponential_moments: hazard must be > 0");
    }
    const double mean = 1.0 / lambda;
    return {mean, mean, 1.0};
}

void validate(const PlateauLaw& p) {
    if (!(p.lambda >= 0.0) || !(p.h > 0.0) || !(p.g >= 0.0) || !(p.lambda_star > p.lambda) ||
        !std::isfinite(p.x_star) || !std::isfinite(p.lambda_star) || !std::isfinite(p.h) ||
        !std::isfinite(p.g)) {
        throw DomainError(
            "PlateauLaw: requires lambda >= 0, h > 0, g >= 0, lambda_star > lambda");
    }
}

double plateau_hazard(const PlateauLaw& p, double x) {
    if (!(x >= 0.0)) throw DomainError("plateau_hazard: age must be >= 0");
    return x < p.x_star ? p.lambda + p.h * std::exp(p.g * x) : p.lambda_star;
}

double continuity_gap(const PlateauLaw& p) {
    return p.lambda + p.h * std::exp(p.g * p.x_star) - p.lambda_star;
}

PlateauLaw strong_clam_law(double lambda, double lambda_star, double x_star, double g) {
    PlateauLaw p{lambda, (lambda_star - lambda) * std::exp(-x_star * g), g, lambda_star, x_star};
    validate(p);
    return p;
}

}  // namespace longevity
