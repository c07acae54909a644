#pragma once

#include <optional>

#include "traj/calibrate.hpp"
#include "traj/piecewise.hpp"
#include "traj/types.hpp"

namespace traj {

enum class CountFamily { Poisson, NegBin };

struct CountModelFit {
    double m1 = 0.0;
    double m2 = 0.0;
    double b = 0.0;
    double t_star = 0.0;
    std::optional<double> zeta;  // absent for Poisson
    double log_score = 0.0;
    bool converged = false;
    int n_restarts_used = 0;
};

// Conversion from trend scale to raw-count scale at a calendar year: the
// product of the coverage form and the (mode-dependent) growth form.
double q_factor(const AdjustmentModel& model, int calendar_year);

// Log-likelihood scores with parameter-free terms dropped. Both scores drop
// the same terms, so Poisson and fixed-dispersion scores are comparable.
// Throw std::domain_error when the trend is nonpositive at an observed year.
double poisson_score(const CareerSeries& raw_series, const AdjustmentModel& model,
                     double m1, double m2, double b, double t_star);

double negbin_score(const CareerSeries& raw_series, const AdjustmentModel& model,
                    double m1, double m2, double b, double t_star, double zeta);

// Numerical maximization: a least-squares seed plus fixed perturbed restarts,
// each polished by coordinate descent (golden-section line searches; change
// point refined on the same grid scheme as the least-squares fit; dispersion
// searched on log scale over [1e-6, 1e3]).
CountModelFit fit_count_model(const CareerSeries& raw_series, const AdjustmentModel& model,
                              CountFamily family);

const char* count_family_name(CountFamily f);

}  // namespace traj
