#pragma once

#include <string>
#include <vector>

#include "traj/types.hpp"

namespace traj {

struct BenchmarkPair {
    int year = 0;
    long dblp_count = 0;
    long cv_count = 0;
};

// Two linear calibration forms on calendar year: a coverage fraction
// (database count / curated count) and a growth form (curated count relative
// to the reference year). normalize_growth makes counts at reference_year
// fixed points of the growth correction; the raw mode keeps the literal
// reciprocal of the growth form.
struct AdjustmentModel {
    double m_alpha = 0.0;
    double b_alpha = 1.0;
    double m_beta = 0.0;
    double b_beta = 1.0;
    int reference_year = 2011;
    bool normalize_growth = true;
    int year_min = 1970;
    int year_max = 2015;

    // Coefficients fitted on the 1970-2011 benchmark sample of hand-curated
    // CVs; the built-in constants shipped with the tool.
    static AdjustmentModel defaults();
    // No-op model: coverage 1 and growth 1 everywhere, unbounded domain.
    static AdjustmentModel identity();
};

struct CoverageFit {
    double m_alpha = 0.0;
    double b_alpha = 0.0;
    double r_squared = 0.0;
};

// Least squares of per-year count ratios on year. Counts are summed per
// calendar year across pairs before the ratio is taken.
CoverageFit fit_coverage(const std::vector<BenchmarkPair>& pairs);

// Value of the coverage form at a calendar year. Throws std::domain_error
// outside [year_min, year_max] or when the form leaves (0, 1.05].
double coverage_fraction(const AdjustmentModel& model, int year);

// Multiplier taking curated-scale counts to reference-year equivalents.
// Normalized mode returns g(reference_year)/g(year); raw mode 1/g(year).
double growth_factor(const AdjustmentModel& model, int year);

CareerSeries dblp_to_cv(const AdjustmentModel& model, const CareerSeries& series);
CareerSeries cv_to_dblp(const AdjustmentModel& model, const CareerSeries& series);
CareerSeries cv_to_2011(const AdjustmentModel& model, const CareerSeries& series);
CareerSeries y2011_to_cv(const AdjustmentModel& model, const CareerSeries& series);

// Full adjustment for one series: coverage correction (database sources
// only), then growth scaling.
CareerSeries adjust_series(const AdjustmentModel& model, const CareerSeries& series, Source source);

std::string model_to_json(const AdjustmentModel& model);
AdjustmentModel model_from_json(const std::string& text);
void save_model(const std::string& path, const AdjustmentModel& model);
AdjustmentModel load_model(const std::string& path);

std::vector<BenchmarkPair> load_benchmarks(const std::string& path);

}  // namespace traj
