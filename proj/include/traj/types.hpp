#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace traj {

enum class Gender { Male, Female, Unknown };

// Where a faculty member's publication list came from. Coverage adjustment
// applies only to records harvested from the bibliographic database; curated
// CV lists are taken at face value.
enum class Source { Database, Cv };

struct FacultyRecord {
    std::string faculty_id;
    int hire_year = 0;
    double doctoral_rank = 0.0;
    double employer_rank = 0.0;
    bool is_private = false;
    Gender gender = Gender::Unknown;
    bool had_postdoc = false;
    Source source = Source::Database;
};

struct PublicationRecord {
    std::string pub_id;
    std::string faculty_id;
    int year = 0;
    std::string venue;
    std::vector<std::string> authors;
    // Position of the faculty member in the author list, or -1 if unknown.
    int focal_index = -1;
};

// Per-person annual counts on the career clock: counts[i] is productivity in
// calendar year t0 + i.
struct CareerSeries {
    std::string faculty_id;
    int t0 = 0;
    std::vector<double> counts;

    int career_length() const { return static_cast<int>(counts.size()); }
    int year_of(int index) const { return t0 + index; }
};

}  // namespace traj
