#include "traj/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace traj {

LorenzCurve lorenz(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("lorenz: empty input");
    std::vector<double> sorted = values;
    for (double v : sorted) {
        if (v < 0 || !std::isfinite(v)) throw std::invalid_argument("lorenz: values must be finite and non-negative");
    }
    std::sort(sorted.begin(), sorted.end());
    long double total = 0.0L;
    for (double v : sorted) total += v;
    if (total <= 0.0L) throw std::invalid_argument("lorenz: all values are zero; gini undefined");

    const std::size_t n = sorted.size();
    LorenzCurve curve;
    curve.points.reserve(n + 1);
    curve.points.emplace_back(0.0, 0.0);
    long double cum = 0.0L;
    long double area2 = 0.0L;  // twice the area under the curve
    long double prev_y = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        cum += sorted[i];
        const long double y = cum / total;
        curve.points.emplace_back(static_cast<double>(i + 1) / static_cast<double>(n),
                                  static_cast<double>(y));
        area2 += (prev_y + y) / static_cast<long double>(n);
        prev_y = y;
    }
    curve.gini = static_cast<double>(1.0L - area2);
    return curve;
}

DecadeGiniTable decade_ginis(const std::vector<FacultyRecord>& faculty,
                             const std::vector<CareerSeries>& series,
                             std::optional<int> window_years) {
    if (faculty.size() != series.size()) {
        throw std::invalid_argument("decade_ginis: faculty/series size mismatch");
    }
    if (window_years && *window_years < 1) {
        throw std::invalid_argument("decade_ginis: window_years must be positive");
    }
    std::map<int, std::vector<double>> per_decade;
    for (std::size_t i = 0; i < faculty.size(); ++i) {
        const int decade = static_cast<int>(std::floor(faculty[i].hire_year / 10.0)) * 10;
        const CareerSeries& sr = series[i];
        int span = sr.career_length();
        if (window_years) span = std::min(span, *window_years);
        double total = 0.0;
        for (int t = 0; t < span; ++t) total += sr.counts[static_cast<std::size_t>(t)];
        per_decade[decade].push_back(total);
    }

    DecadeGiniTable table;
    for (auto& [decade, values] : per_decade) {
        if (values.size() < 2) {
            table.warnings.push_back("decade " + std::to_string(decade) +
                                     ": fewer than two faculty; omitted");
            continue;
        }
        bool any_positive = false;
        for (double v : values) any_positive |= v > 0;
        if (!any_positive) {
            table.warnings.push_back("decade " + std::to_string(decade) +
                                     ": no production; gini undefined; omitted");
            continue;
        }
        DecadeGini row;
        row.decade = decade;
        row.n_faculty = static_cast<int>(values.size());
        row.curve = lorenz(values);
        row.gini = row.curve.gini;
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace traj
