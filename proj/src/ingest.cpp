#include "traj/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "traj/csv.hpp"
#include "traj/errors.hpp"

namespace traj {
namespace {

using nlohmann::json;

bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool is_csv_path(const std::string& path) { return has_suffix(path, ".csv"); }

std::string where(const std::string& path, std::size_t lineno) {
    return path + ":" + std::to_string(lineno) + ": ";
}

std::string json_to_id(const json& v, const std::string& ctx) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw ParseError(ctx + "id must be a string");
}

Gender parse_gender(const std::string& s, const std::string& ctx) {
    if (s == "M") return Gender::Male;
    if (s == "F") return Gender::Female;
    if (s == "unknown" || s.empty()) return Gender::Unknown;
    throw ParseError(ctx + "bad gender value '" + s + "' (expected M, F, or unknown)");
}

Source parse_source(const std::string& s, const std::string& ctx) {
    if (s == "DBLP") return Source::Database;
    if (s == "CV") return Source::Cv;
    throw ParseError(ctx + "bad source value '" + s + "' (expected DBLP or CV)");
}

bool parse_bool(const std::string& s, const std::string& ctx) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw ParseError(ctx + "bad boolean value '" + s + "'");
}

long parse_long(const std::string& s, const std::string& ctx) {
    try {
        std::size_t pos = 0;
        long v = std::stol(s, &pos);
        if (pos != s.size()) throw ParseError("");
        return v;
    } catch (...) {
        throw ParseError(ctx + "bad integer value '" + s + "'");
    }
}

double parse_real(const std::string& s, const std::string& ctx) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw ParseError("");
        return v;
    } catch (...) {
        throw ParseError(ctx + "bad numeric value '" + s + "'");
    }
}

void validate_faculty(const FacultyRecord& f, const std::string& ctx) {
    if (f.faculty_id.empty()) throw ParseError(ctx + "empty faculty_id");
    if (f.doctoral_rank < 1 || f.employer_rank < 1) throw ParseError(ctx + "ranks must be >= 1");
}

void validate_publication(const PublicationRecord& p, const std::string& ctx) {
    if (p.pub_id.empty()) throw ParseError(ctx + "empty pub_id");
    if (p.faculty_id.empty()) throw ParseError(ctx + "empty faculty_id");
    if (p.authors.empty()) throw ParseError(ctx + "author list is empty");
    for (const auto& a : p.authors) {
        if (a.empty()) throw ParseError(ctx + "empty author name");
    }
    if (p.focal_index < 0 || p.focal_index >= static_cast<int>(p.authors.size())) {
        throw ParseError(ctx + "focal_index " + std::to_string(p.focal_index) +
                         " outside author list of length " + std::to_string(p.authors.size()));
    }
}

std::vector<std::string> split_authors(const std::string& joined) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : joined) {
        if (c == '|') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

template <typename Fn>
void for_each_jsonl(const std::string& path, Fn&& fn) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(where(path, lineno) + e.what());
        }
        if (!obj.is_object()) throw ParseError(where(path, lineno) + "expected a JSON object");
        fn(obj, lineno);
    }
}

FacultyRecord faculty_from_json(const json& obj, const std::string& ctx) {
    FacultyRecord f;
    try {
        f.faculty_id = json_to_id(obj.at("faculty_id"), ctx);
        f.hire_year = obj.at("hire_year").get<int>();
        f.doctoral_rank = obj.at("doctoral_rank").get<double>();
        f.employer_rank = obj.at("employer_rank").get<double>();
        f.is_private = obj.at("is_private").get<bool>();
        f.gender = parse_gender(obj.value("gender", std::string("unknown")), ctx);
        f.had_postdoc = obj.value("had_postdoc", false);
        f.source = parse_source(obj.value("source", std::string("DBLP")), ctx);
    } catch (const json::exception& e) {
        throw ParseError(ctx + e.what());
    }
    validate_faculty(f, ctx);
    return f;
}

PublicationRecord publication_from_json(const json& obj, const std::string& ctx) {
    PublicationRecord p;
    try {
        p.pub_id = json_to_id(obj.at("pub_id"), ctx);
        p.faculty_id = json_to_id(obj.at("faculty_id"), ctx);
        p.year = obj.at("year").get<int>();
        p.venue = obj.value("venue", std::string());
        const json& authors = obj.at("authors");
        if (!authors.is_array()) throw ParseError(ctx + "authors must be an array");
        for (const auto& a : authors) {
            if (!a.is_string()) throw ParseError(ctx + "author names must be strings");
            p.authors.push_back(a.get<std::string>());
        }
        p.focal_index = obj.at("focal_index").get<int>();
    } catch (const json::exception& e) {
        throw ParseError(ctx + e.what());
    }
    validate_publication(p, ctx);
    return p;
}

int require_column(const csv::Table& t, const std::string& name, const std::string& path) {
    int c = t.column(name);
    if (c < 0) throw ParseError(path + ": missing column '" + name + "'");
    return c;
}

}  // namespace

std::vector<FacultyRecord> load_faculty(const std::string& path) {
    std::vector<FacultyRecord> out;
    if (is_csv_path(path)) {
        csv::Table t = csv::read_file(path);
        int c_id = require_column(t, "faculty_id", path);
        int c_hire = require_column(t, "hire_year", path);
        int c_doc = require_column(t, "doctoral_rank", path);
        int c_emp = require_column(t, "employer_rank", path);
        int c_priv = require_column(t, "is_private", path);
        int c_gender = t.column("gender");
        int c_postdoc = t.column("had_postdoc");
        int c_source = t.column("source");
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            const auto& row = t.rows[i];
            const std::string ctx = where(path, i + 2);
            FacultyRecord f;
            f.faculty_id = row[c_id];
            f.hire_year = static_cast<int>(parse_long(row[c_hire], ctx));
            f.doctoral_rank = parse_real(row[c_doc], ctx);
            f.employer_rank = parse_real(row[c_emp], ctx);
            f.is_private = parse_bool(row[c_priv], ctx);
            f.gender = c_gender >= 0 ? parse_gender(row[c_gender], ctx) : Gender::Unknown;
            f.had_postdoc = c_postdoc >= 0 && parse_bool(row[c_postdoc], ctx);
            f.source = c_source >= 0 ? parse_source(row[c_source], ctx) : Source::Database;
            validate_faculty(f, ctx);
            out.push_back(std::move(f));
        }
    } else {
        for_each_jsonl(path, [&](const json& obj, std::size_t lineno) {
            out.push_back(faculty_from_json(obj, where(path, lineno)));
        });
    }
    return out;
}

std::vector<PublicationRecord> load_publications(const std::string& path) {
    std::vector<PublicationRecord> out;
    if (is_csv_path(path)) {
        csv::Table t = csv::read_file(path);
        int c_pid = require_column(t, "pub_id", path);
        int c_fid = require_column(t, "faculty_id", path);
        int c_year = require_column(t, "year", path);
        int c_venue = t.column("venue");
        int c_authors = require_column(t, "authors", path);
        int c_focal = require_column(t, "focal_index", path);
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            const auto& row = t.rows[i];
            const std::string ctx = where(path, i + 2);
            PublicationRecord p;
            p.pub_id = row[c_pid];
            p.faculty_id = row[c_fid];
            p.year = static_cast<int>(parse_long(row[c_year], ctx));
            p.venue = c_venue >= 0 ? row[c_venue] : std::string();
            p.authors = split_authors(row[c_authors]);
            p.focal_index = static_cast<int>(parse_long(row[c_focal], ctx));
            validate_publication(p, ctx);
            out.push_back(std::move(p));
        }
    } else {
        for_each_jsonl(path, [&](const json& obj, std::size_t lineno) {
            out.push_back(publication_from_json(obj, where(path, lineno)));
        });
    }
    return out;
}

Corpus load_corpus(const std::string& faculty_path, const std::string& publications_path) {
    Corpus corpus;
    corpus.faculty = load_faculty(faculty_path);
    corpus.publications = load_publications(publications_path);

    std::unordered_set<std::string> faculty_ids;
    for (const auto& f : corpus.faculty) {
        if (!faculty_ids.insert(f.faculty_id).second) {
            throw ParseError(faculty_path + ": duplicate faculty_id '" + f.faculty_id + "'");
        }
    }
    std::unordered_set<std::string> pub_ids;
    std::vector<std::string> dangling;
    for (const auto& p : corpus.publications) {
        if (!pub_ids.insert(p.pub_id).second) {
            throw ParseError(publications_path + ": duplicate pub_id '" + p.pub_id + "'");
        }
        if (!faculty_ids.count(p.faculty_id)) dangling.push_back(p.pub_id + "->" + p.faculty_id);
    }
    if (!dangling.empty()) {
        std::string msg = publications_path + ": " + std::to_string(dangling.size()) +
                          " publication(s) reference unknown faculty:";
        const std::size_t shown = std::min<std::size_t>(dangling.size(), 10);
        for (std::size_t i = 0; i < shown; ++i) msg += " " + dangling[i];
        if (dangling.size() > shown) msg += " ...";
        throw ParseError(msg);
    }
    return corpus;
}

void save_faculty(const std::string& path, const std::vector<FacultyRecord>& faculty) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write file: " + path);
    for (const auto& f : faculty) {
        json obj;
        obj["faculty_id"] = f.faculty_id;
        obj["hire_year"] = f.hire_year;
        obj["doctoral_rank"] = f.doctoral_rank;
        obj["employer_rank"] = f.employer_rank;
        obj["is_private"] = f.is_private;
        obj["gender"] = f.gender == Gender::Male ? "M" : (f.gender == Gender::Female ? "F" : "unknown");
        obj["had_postdoc"] = f.had_postdoc;
        obj["source"] = f.source == Source::Database ? "DBLP" : "CV";
        out << obj.dump() << "\n";
    }
}

void save_publications(const std::string& path, const std::vector<PublicationRecord>& pubs) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write file: " + path);
    for (const auto& p : pubs) {
        json obj;
        obj["pub_id"] = p.pub_id;
        obj["faculty_id"] = p.faculty_id;
        obj["year"] = p.year;
        obj["venue"] = p.venue;
        obj["authors"] = p.authors;
        obj["focal_index"] = p.focal_index;
        out << obj.dump() << "\n";
    }
}

CareerSeries build_series(const FacultyRecord& faculty,
                          const std::vector<PublicationRecord>& pubs,
                          bool include_prehire,
                          int census_year) {
    for (const auto& p : pubs) {
        if (p.faculty_id != faculty.faculty_id) {
            throw std::invalid_argument("build_series: publication " + p.pub_id +
                                        " does not belong to faculty " + faculty.faculty_id);
        }
    }
    const int t0 = faculty.hire_year;
    int last_year = census_year;
    for (const auto& p : pubs) last_year = std::max(last_year, p.year);

    CareerSeries series;
    series.faculty_id = faculty.faculty_id;
    series.t0 = t0;
    series.counts.assign(static_cast<std::size_t>(std::max(1, last_year - t0 + 1)), 0.0);
    for (const auto& p : pubs) {
        int t = p.year - t0;
        if (t < 0) {
            if (!include_prehire) continue;
            t = 0;
        }
        series.counts[static_cast<std::size_t>(t)] += 1.0;
    }
    return series;
}

CareerSeries build_series_fixed(const FacultyRecord& faculty,
                                const std::vector<PublicationRecord>& pubs,
                                int career_length) {
    if (career_length < 1) throw std::invalid_argument("build_series_fixed: career_length must be >= 1");
    CareerSeries series;
    series.faculty_id = faculty.faculty_id;
    series.t0 = faculty.hire_year;
    series.counts.assign(static_cast<std::size_t>(career_length), 0.0);
    for (const auto& p : pubs) {
        int t = std::clamp(p.year - faculty.hire_year, 0, career_length - 1);
        series.counts[static_cast<std::size_t>(t)] += 1.0;
    }
    return series;
}

bool eligible_for_fit(const CareerSeries& series, int min_career, int max_career, int min_active_years) {
    const int t = series.career_length();
    if (t < min_career || t > max_career) return false;
    int active = 0;
    for (double c : series.counts) {
        if (c > 0) ++active;
    }
    return active >= min_active_years;
}

std::map<std::string, std::vector<std::size_t>> group_by_faculty(
    const std::vector<PublicationRecord>& pubs) {
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < pubs.size(); ++i) groups[pubs[i].faculty_id].push_back(i);
    return groups;
}

}  // namespace traj
