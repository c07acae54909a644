#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "traj/types.hpp"

namespace traj {

// Normalized sort key for an author name: the part before the first comma
// (or the whole name), last whitespace token, case folded, Latin diacritics
// stripped. "van/von/de" particles are not merged; hyphens are kept.
std::string surname_key(const std::string& name);

// Nondecreasing surname-key order. Requires at least two authors; empty
// names are malformed.
bool is_alphabetized(const std::vector<std::string>& authors);

enum class TailMode { Auto, Exact, MonteCarlo };

struct VenueOrderStats {
    std::string venue;
    int n_multi = 0;
    int n_alpha = 0;
    double expected_alpha = 0.0;
    double p_value = 1.0;
    bool flagged = false;
};

// Exact upper tail P(X >= k) of a sum of independent Bernoulli(p_j) draws,
// by dynamic-programming convolution.
double poisson_binomial_tail(const std::vector<double>& probs, int k);

double monte_carlo_tail(const std::vector<double>& probs, int k, long n_sims, std::uint64_t stream_key);

// Chance model: paper j with M_j authors is alphabetized with probability
// 1/M_j! (zero beyond M = 20). Flagged when the tail probability is below
// alpha_level and the observed count is at least ratio_threshold times the
// expected count. Exact mode up to 10^4 papers under Auto, simulation above.
VenueOrderStats venue_test(const std::string& venue,
                           const std::vector<const PublicationRecord*>& multi_author_papers,
                           double alpha_level = 0.05,
                           double ratio_threshold = 2.0,
                           TailMode mode = TailMode::Auto,
                           std::uint64_t seed = 0,
                           long n_sims = 100000);

struct VenueFlagResult {
    std::vector<VenueOrderStats> venues;  // sorted by venue name
    std::set<std::string> flagged;
};

// Groups multi-author papers by venue (single-author papers and empty venue
// labels are ignored) and tests each venue.
VenueFlagResult flag_alphabetized_venues(const std::vector<PublicationRecord>& pubs,
                                         double alpha_level = 0.05,
                                         double ratio_threshold = 2.0,
                                         TailMode mode = TailMode::Auto,
                                         std::uint64_t seed = 0);

struct RoleSeries {
    std::vector<double> frac_first;  // NaN where the year has no papers
    std::vector<double> frac_last;
    std::vector<int> n_papers;
};

// Per career year: share of first-author papers (single-author papers count
// as first-author) and of last-author papers among multi-author ones, both
// over all papers that year. Publications in flagged venues are excluded.
RoleSeries role_series(const FacultyRecord& faculty,
                       const std::vector<PublicationRecord>& pubs,
                       const std::set<std::string>& flagged_venues,
                       int census_year = 2011);

struct RoleFractions {
    std::string faculty_id;
    double frac_first_early = 0.0;  // career years 0-2
    double frac_first_late = 0.0;   // career years 3-5
    bool transitioned = false;      // early strictly above late
};

// Pooled first-author fractions over the two windows. Requires a career
// longer than six years; returns nothing when either window has no papers.
std::optional<RoleFractions> transition_fractions(const FacultyRecord& faculty,
                                                  const std::vector<PublicationRecord>& pubs,
                                                  const std::set<std::string>& flagged_venues,
                                                  int census_year = 2011);

struct RoleCurvePoint {
    int stratum = 0;
    int career_year = 0;
    double mean_frac_first = 0.0;
    double mean_frac_last = 0.0;
    int n = 0;  // faculty with at least one paper that year
};

// Mean role fractions per career year within prestige strata. Years where a
// stratum has no papers at all are omitted. Publications are grouped by
// faculty internally; an empty edge list yields a single stratum.
std::vector<RoleCurvePoint> role_curves(const std::vector<FacultyRecord>& faculty,
                                        const std::vector<PublicationRecord>& pubs,
                                        const std::set<std::string>& flagged_venues,
                                        const std::vector<double>& quantile_edges,
                                        int census_year = 2011);

}  // namespace traj
