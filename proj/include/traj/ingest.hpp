#pragma once

#include <map>
#include <string>
#include <vector>

#include "traj/types.hpp"

namespace traj {

struct Corpus {
    std::vector<FacultyRecord> faculty;
    std::vector<PublicationRecord> publications;
};

// Parses faculty and publication files (JSON Lines or CSV, chosen by file
// extension), validates per-record invariants, rejects duplicate ids, and
// checks that every publication references a known faculty member.
Corpus load_corpus(const std::string& faculty_path, const std::string& publications_path);

std::vector<FacultyRecord> load_faculty(const std::string& path);
std::vector<PublicationRecord> load_publications(const std::string& path);

void save_faculty(const std::string& path, const std::vector<FacultyRecord>& faculty);
void save_publications(const std::string& path, const std::vector<PublicationRecord>& pubs);

// Annual counts on the career clock. The series runs from the hire year
// through max(census_year, last publication year). Publications dated before
// the hire year are dropped when include_prehire is false, and bucketed into
// career year 0 otherwise.
CareerSeries build_series(const FacultyRecord& faculty,
                          const std::vector<PublicationRecord>& pubs,
                          bool include_prehire,
                          int census_year = 2011);

// Same bucketing with a fixed span: career years are clamped into [0, T-1] at
// both ends. Used when refitting perturbed copies of a career, where the
// observation window must not move with the noise.
CareerSeries build_series_fixed(const FacultyRecord& faculty,
                                const std::vector<PublicationRecord>& pubs,
                                int career_length);

bool eligible_for_fit(const CareerSeries& series,
                      int min_career = 10,
                      int max_career = 25,
                      int min_active_years = 3);

// Publication indices per faculty_id, in deterministic (sorted) key order.
std::map<std::string, std::vector<std::size_t>> group_by_faculty(
    const std::vector<PublicationRecord>& pubs);

}  // namespace traj
