#include "traj/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "traj/errors.hpp"

namespace traj {

OlsFit ols_fit(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size()) throw std::invalid_argument("ols_fit: size mismatch");
    if (n < 2) throw DegenerateFit("ols_fit: need at least two points");

    long double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const long double mx = sx / static_cast<long double>(n);
    const long double my = sy / static_cast<long double>(n);

    long double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const long double dx = x[i] - mx;
        const long double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0) throw DegenerateFit("ols_fit: x values are all identical");

    OlsFit fit;
    fit.slope = static_cast<double>(sxy / sxx);
    fit.intercept = static_cast<double>(my - (sxy / sxx) * mx);

    long double sse = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const long double r = y[i] - (fit.intercept + fit.slope * x[i]);
        sse += r * r;
    }
    fit.sse = static_cast<double>(sse);
    fit.r_squared = syy > 0 ? static_cast<double>(1.0L - sse / syy) : 1.0;
    return fit;
}

double median_of(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median_of: empty input");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace traj
