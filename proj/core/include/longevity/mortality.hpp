#pragma once

#include <vector>

namespace longevity {

// Sanity range for the modal age. Catches rates supplied per 1000 instead of
// per unit, which push m far outside any human lifetime.
struct AgeBounds {
    double lo = 0.0;
    double hi = 150.0;
    bool enforce = true;
};

// Gompertz law in modal/dispersion form: hazard(y) = (1/b) e^{(y - m)/b}.
class GompertzLaw {
public:
    GompertzLaw(double m, double b, AgeBounds bounds = {});

    double modal() const noexcept { return m_; }
    double dispersion() const noexcept { return b_; }
    double growth() const noexcept { return 1.0 / b_; }
    const AgeBounds& bounds() const noexcept { return bounds_; }

    friend bool operator==(const GompertzLaw& a, const GompertzLaw& b) noexcept {
        return a.m_ == b.m_ && a.b_ == b.b_;
    }

private:
    double m_;
    double b_;
    AgeBounds bounds_;
};

// The same law anchored at an age: hazard(age + t) = hazard * e^{growth t}.
struct AgeAnchoredLaw {
    double age = 0.0;
    double hazard = 0.0;
    double growth = 0.0;
};

GompertzLaw from_hg(const AgeAnchoredLaw& anchored, AgeBounds bounds = {});
AgeAnchoredLaw to_hg(const GompertzLaw& law, double x);

double hazard(const GompertzLaw& law, double age);

// Probability that a life aged x survives t more years, and its logarithm.
double survival(const GompertzLaw& law, double x, double t);
double log_survival(const GompertzLaw& law, double x, double t);

// Density of the remaining lifetime T_x at t.
double density(const GompertzLaw& law, double x, double t);

// Smallest t with survival(law, x, t) <= threshold.
double survival_horizon(const GompertzLaw& law, double x, double threshold = 1e-14);

struct LifetimeMoments {
    double mean = 0.0;
    double sd = 0.0;
    double covol = 0.0;  // sd / mean
};

// Mean from the closed-form zero-rate annuity factor, SD by quadrature of the
// central second moment up to survival_horizon.
LifetimeMoments moments(const GompertzLaw& law, double x);

struct CovolPoint {
    double age = 0.0;
    double covol = 0.0;
};

// Requires strictly increasing ages.
std::vector<CovolPoint> covol_profile(const GompertzLaw& law, const std::vector<double>& ages);

// Constant hazard lambda: mean = sd = 1/lambda.
LifetimeMoments exponential_moments(double lambda);

// Gompertz-Makeham hazard lambda + h e^{g x} below the plateau age x_star,
// constant lambda_star from x_star on.
struct PlateauLaw {
    double lambda = 0.0;
    double h = 0.0;
    double g = 0.0;
    double lambda_star = 0.0;
    double x_star = 0.0;
};

// Throws DomainError unless lambda >= 0, h > 0, g >= 0, lambda_star > lambda.
void validate(const PlateauLaw& p);

double plateau_hazard(const PlateauLaw& p, double x);

// lambda + h e^{g x_star} - lambda_star; zero when the hazard is continuous.
double continuity_gap(const PlateauLaw& p);

// Strong compensation law: h(g) = (lambda_star - lambda) e^{-x_star g}, so that
// every growth rate reaches the common plateau at x_star.
PlateauLaw strong_clam_law(double lambda, double lambda_star, double x_star, double g);

}  // namespace longevity
