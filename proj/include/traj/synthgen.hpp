#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "traj/calibrate.hpp"
#include "traj/classify.hpp"
#include "traj/types.hpp"

namespace traj {

enum class CountNoise { None, Poisson, NegBin };

// First-author propensity over the career: declining faculty start at
// p_first_high and drop to p_first_low from switch_year on; the rest do the
// opposite.
struct RoleSchedule {
    double frac_declining = 0.7;
    double p_first_high = 0.9;
    double p_first_low = 0.1;
    int switch_year = 3;
};

// Mixture over trend parameters. Faculty are allocated to classes by largest
// remainder, so realized class counts match the weights exactly. Classes:
// canonical octant, pure line, and the four slope-sign quadrants (quadrant IV
// draws get a decline steeper than the rise, keeping them non-canonical).
struct ThetaMixture {
    double canonical_weight = 0.2;
    double linear_weight = 0.0;
    std::array<double, 4> quadrant_weights{0.2, 0.2, 0.2, 0.2};
    std::pair<double, double> slope_range{0.2, 0.8};
    std::pair<double, double> b_range{2.0, 8.0};
    bool integer_theta = false;
    // Raise b until the trend clears this floor everywhere; negative
    // disables the lift and lets rates clip at zero instead.
    double min_rate = 0.5;
};

struct GeneratorSpec {
    int n_faculty = 100;
    std::pair<int, int> career_length_range{10, 25};
    ThetaMixture theta;
    CountNoise count_noise = CountNoise::Poisson;
    double zeta = 0.5;  // NegBin dispersion
    bool apply_coverage_thinning = false;
    RoleSchedule roles;
    int census_year = 2011;
    int n_venues = 20;
    double frac_alpha_venues = 0.0;  // venues that order authors by surname
    double frac_single_author = 0.0;
    std::pair<int, int> coauthors_range{1, 4};
    std::uint64_t seed = 0;
};

struct TruthRow {
    std::string faculty_id;
    double m1 = 0.0;
    double m2 = 0.0;
    double b = 0.0;
    double t_star = 0.0;
    Quadrant quadrant = Quadrant::I;
    bool canonical = false;
    bool linear = false;
    bool declining_role = false;
    int t0 = 0;
    int career_length = 0;
    std::vector<double> rate;            // clipped at zero; used for draws
    std::vector<double> rate_unclipped;  // raw trend value
    std::vector<long> latent_counts;
    std::vector<long> observed_counts;   // after coverage thinning
};

struct SyntheticCohort {
    std::vector<FacultyRecord> faculty;
    std::vector<PublicationRecord> publications;
    std::vector<TruthRow> truth;
};

// Draws the cohort. The adjustment model supplies the coverage fraction for
// thinning and the growth factor that maps trend means to publication-year
// scale; pass the identity model for an uncorrected cohort.
SyntheticCohort generate_cohort(const GeneratorSpec& spec, const AdjustmentModel& model);

// The noise-free trend as a series (real-valued rates).
CareerSeries latent_series(const TruthRow& row);
CareerSeries observed_series(const TruthRow& row);

// Writes faculty.jsonl, publications.jsonl, truth.csv, truth_rates.csv.
void save_cohort(const std::string& dir, const SyntheticCohort& cohort);

}  // namespace traj
