#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "traj/types.hpp"

namespace traj {

struct LorenzCurve {
    // (cumulative population fraction, cumulative production fraction),
    // from (0,0) to (1,1), over values sorted ascending.
    std::vector<std::pair<double, double>> points;
    double gini = 0.0;
};

// Requires at least one strictly positive value; zeros are legitimate and
// contribute flat segments.
LorenzCurve lorenz(const std::vector<double>& values);

struct DecadeGini {
    int decade = 0;
    int n_faculty = 0;
    double gini = 0.0;
    LorenzCurve curve;
};

struct DecadeGiniTable {
    std::vector<DecadeGini> rows;
    std::vector<std::string> warnings;
};

// Groups faculty by hire decade and computes one Lorenz/Gini per decade over
// per-person production. Production sums the first window_years career years,
// or the whole career when window_years is absent. Decades with fewer than
// two people, or no production at all, are omitted with a warning.
DecadeGiniTable decade_ginis(const std::vector<FacultyRecord>& faculty,
                             const std::vector<CareerSeries>& series,
                             std::optional<int> window_years = 5);

}  // namespace traj
