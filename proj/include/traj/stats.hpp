#pragma once

#include <span>
#include <vector>

namespace traj {

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double sse = 0.0;
    double r_squared = 0.0;
};

// Simple least squares of y on x. Throws DegenerateFit when fewer than two
// points or when x has no spread.
OlsFit ols_fit(std::span<const double> x, std::span<const double> y);

// Median with the usual midpoint convention for even sizes. Copies its input.
double median_of(std::vector<double> values);

double normal_cdf(double z);

}  // namespace traj
