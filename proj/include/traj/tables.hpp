#pragma once

#include <optional>
#include <string>
#include <vector>

#include "traj/authorship.hpp"
#include "traj/classify.hpp"
#include "traj/countmodels.hpp"
#include "traj/inequality.hpp"
#include "traj/perturb.hpp"
#include "traj/piecewise.hpp"

// CSV artifacts shared between the command-line tool and downstream steps.
// Column sets are part of the tool's contract; readers reject files whose
// headers do not carry the expected columns.

namespace traj::tables {

struct FitRow {
    std::string faculty_id;
    double m1 = 0.0;
    double m2 = 0.0;
    double b = 0.0;
    double t_star = 0.0;
    double sse = 0.0;
    double sse_line = 0.0;
    std::string chosen_model;  // "line" or "piecewise"
    std::string criterion;     // "aic", "aicc", "bic"
};

void write_fits(const std::string& path, const std::vector<FitRow>& rows);
std::vector<FitRow> read_fits(const std::string& path);

struct CountFitRow {
    std::string faculty_id;
    std::string family;  // "poisson" or "negbin"
    double m1 = 0.0;
    double m2 = 0.0;
    double b = 0.0;
    double t_star = 0.0;
    std::optional<double> zeta;
    double log_score = 0.0;
    bool converged = false;
};

void write_count_fits(const std::string& path, const std::vector<CountFitRow>& rows);
std::vector<CountFitRow> read_count_fits(const std::string& path);

struct SelectionRow {
    std::string faculty_id;
    std::string criterion;
    double score_line = 0.0;
    double score_piecewise = 0.0;
    std::string chosen;
};

void write_selection(const std::string& path, const std::vector<SelectionRow>& rows);
std::vector<SelectionRow> read_selection(const std::string& path);

void write_stability(const std::string& path, const std::vector<StabilityReport>& rows);

struct StabilityRow {
    std::string faculty_id;
    int votes[4] = {0, 0, 0, 0};
    int degenerate = 0;
    double modal_fraction = 0.0;
    bool stable = false;
    double signflip_fraction = 0.0;
};

std::vector<StabilityRow> read_stability(const std::string& path);

void write_ensemble(const std::string& path, const EnsembleTable& table);

void write_gini(const std::string& path, const DecadeGiniTable& table);
void write_lorenz(const std::string& path, const DecadeGiniTable& table);

void write_venues(const std::string& path, const std::vector<VenueOrderStats>& rows);
std::vector<VenueOrderStats> read_venues(const std::string& path);

// Per-faculty classification joined from fit, selection, and stability.
struct ClassRow {
    std::string faculty_id;
    int career_length = 0;
    double m1 = 0.0;
    double m2 = 0.0;
    double b = 0.0;
    double t_star = 0.0;
    int quadrant = 0;
    bool canonical = false;
    bool selected = false;
    bool stable = false;
    std::optional<int> peak_year;
};

void write_classes(const std::string& path, const std::vector<ClassRow>& rows);

void write_changepoints(const std::string& path, const ChangepointTable& table);
void write_tstar_hist(const std::string& path, const ChangepointTable& table);
// (career_length, rounded t*, count) triples for heatmap plotting.
void write_changepoint_heatmap(const std::string& path, const ChangepointTable& table);

void write_population(const std::string& path, const PopulationSummary& summary);

void write_curves(const std::string& path, const CohortCurves& curves, int year_base = 0);
void write_role_curves(const std::string& path, const std::vector<RoleCurvePoint>& rows,
                       int year_base = 0);

void write_medians(const std::string& path, const std::vector<InstitutionMedianRow>& rows);

struct TransitionSummary {
    int n_eligible = 0;      // careers long enough with papers in both windows
    int n_transitioned = 0;
    double rate = 0.0;       // NaN when n_eligible = 0
};

void write_transitions(const std::string& path, const std::vector<RoleFractions>& rows,
                       const TransitionSummary& summary);

}  // namespace traj::tables
