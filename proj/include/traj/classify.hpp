#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "traj/piecewise.hpp"
#include "traj/types.hpp"

namespace traj {

// Slope-sign partition. Zero slopes count as nonpositive, so the boundary
// assignment is deterministic.
//   I: m1>0, m2>0    II: m1<=0, m2>0    III: m1<=0, m2<=0    IV: m1>0, m2<=0
enum class Quadrant { I = 1, II = 2, III = 3, IV = 4 };

Quadrant classify_quadrant(double m1, double m2);

// Rise, fall, early change point, and a decline gentler than the rise.
// An infinite cap disables the change-point condition.
bool is_canonical(const PiecewiseParams& params, double t_star_cap = 10.0);

// Career year with the highest count; ties break toward the earliest year.
// An all-zero series has no peak.
std::optional<int> peak_year(const CareerSeries& series);

// Everything the cohort-level summaries need about one fitted career.
struct FacultyFit {
    std::string faculty_id;
    int career_length = 0;
    PiecewiseParams fit;
    double sse_line = 0.0;
    bool piecewise_selected = false;
    bool stable = false;
};

struct ChangepointRow {
    int career_length = 0;
    double t_star = 0.0;
};

// Stable and piecewise-selected careers only, with a histogram of change
// points binned to the nearest year.
struct ChangepointTable {
    std::vector<ChangepointRow> rows;
    std::map<int, int> histogram;
};

ChangepointTable changepoint_table(const std::vector<FacultyFit>& fits);

struct StratumCurve {
    int stratum = 0;  // 1 = most prestigious (lowest ranks)
    std::vector<double> mean_counts;
    std::vector<int> n_at_year;
};

struct CohortCurves {
    std::vector<StratumCurve> strata;
    std::vector<std::string> warnings;
};

// Faculty indices grouped into prestige strata at the given cumulative
// fraction edges, ordered most to least prestigious. Faculty are ranked by
// employer rank with ties broken by id; groups may come back empty.
std::vector<std::vector<std::size_t>> rank_strata(const std::vector<FacultyRecord>& faculty,
                                                  const std::vector<double>& quantile_edges);

// Splits faculty into prestige strata at the given cumulative-fraction edges
// (sorted by employer rank, ties by id) and averages counts per career year
// over careers long enough to reach it.
CohortCurves cohort_curves(const std::vector<FacultyRecord>& faculty,
                           const std::vector<CareerSeries>& series,
                           const std::vector<double>& quantile_edges);

enum class ProductionWindow { FirstDecade, Lifetime };

struct InstitutionMedianRow {
    double employer_rank = 0.0;
    bool is_private = false;
    int n_faculty = 0;
    double median_total = 0.0;
};

// Median per-person production per institution, where an institution is an
// (employer_rank, is_private) pair. The first-decade window drops careers
// shorter than ten years.
std::vector<InstitutionMedianRow> institution_medians(const std::vector<FacultyRecord>& faculty,
                                                      const std::vector<CareerSeries>& series,
                                                      ProductionWindow window);

struct PopulationSummary {
    int n = 0;
    double frac_piecewise = 0.0;
    double frac_stable = 0.0;
    double frac_stable_nonlinear = 0.0;
    double frac_canonical = 0.0;
};

// Pipeline fractions over a cohort; canonical means stable, piecewise
// selected, and inside the canonical octant. Empty cohorts yield NaN.
PopulationSummary summarize_population(const std::vector<FacultyFit>& fits, double t_star_cap = 10.0);

}  // namespace traj
