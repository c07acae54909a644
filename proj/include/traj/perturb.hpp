#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "traj/calibrate.hpp"
#include "traj/classify.hpp"
#include "traj/piecewise.hpp"
#include "traj/types.hpp"

namespace traj {

struct NoiseSpec {
    double sigma = 0.7413011;
    int trials = 200;
    std::uint64_t seed = 0;
};

// Gaussian year noise, rounded half away from zero. Every (seed, faculty,
// trial, publication) tuple addresses its own random stream, so results do
// not depend on evaluation order.
std::vector<PublicationRecord> perturb_years(const std::vector<PublicationRecord>& pubs,
                                             const NoiseSpec& spec,
                                             int trial_index);

struct StabilityReport {
    std::string faculty_id;
    std::array<int, 4> quadrant_votes{};  // index 0 = quadrant I
    int degenerate = 0;
    Quadrant baseline_quadrant = Quadrant::I;
    Quadrant modal_quadrant = Quadrant::I;
    double modal_fraction = 0.0;
    bool stable = false;
    double signflip_fraction = 0.0;
};

// The verdict arithmetic, separated for direct testing: stable when the
// modal quadrant matches the noise-free one and wins at least the threshold
// fraction of trials. Modal ties break toward the lowest quadrant index.
void apply_verdict(StabilityReport& report, int trials, double stability_threshold);

// Refits `spec.trials` perturbed copies of one career. The observation span
// is frozen at the noise-free length; shifted years are clamped into it at
// both ends. Per-trial degenerate fits are tallied, not imputed.
StabilityReport stability_analysis(const FacultyRecord& faculty,
                                   const std::vector<PublicationRecord>& pubs,
                                   const AdjustmentModel& model,
                                   const NoiseSpec& spec,
                                   double stability_threshold = 0.75,
                                   int census_year = 2011);

std::vector<StabilityReport> stability_cohort(const std::vector<FacultyRecord>& faculty,
                                              const std::vector<PublicationRecord>& pubs,
                                              const AdjustmentModel& model,
                                              const NoiseSpec& spec,
                                              double stability_threshold = 0.75,
                                              int census_year = 2011,
                                              int threads = 1);

struct EnsembleTable {
    long long total_trials = 0;
    long long kept_trials = 0;  // trials where selection picked the kinked model
    std::array<long long, 4> quadrant_counts{};
    std::array<double, 4> quadrant_mass{};
    long long canonical_count = 0;
    double canonical_mass = 0.0;
};

// Pools every noise-added trial across the cohort, keeps those where model
// selection prefers the kinked trend, and reports where they land.
EnsembleTable ensemble_distribution(const std::vector<FacultyRecord>& faculty,
                                    const std::vector<PublicationRecord>& pubs,
                                    const AdjustmentModel& model,
                                    const NoiseSpec& spec,
                                    Criterion criterion = Criterion::Aicc,
                                    double t_star_cap = 10.0,
                                    int census_year = 2011,
                                    int threads = 1);

}  // namespace traj
