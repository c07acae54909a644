#include "traj/tables.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <utility>

#include <json.hpp>

#include "traj/csv.hpp"
#include "traj/errors.hpp"

namespace traj::tables {
namespace {

double parse_double(const std::string& s, const std::string& path) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double value = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ParseError(path + ": bad numeric field '" + s + "'");
    }
    return value;
}

int parse_int(const std::string& s, const std::string& path) {
    int value = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ParseError(path + ": bad integer field '" + s + "'");
    }
    return value;
}

bool parse_bool(const std::string& s, const std::string& path) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw ParseError(path + ": bad boolean field '" + s + "'");
}

int require_column(const csv::Table& table, const std::string& name, const std::string& path) {
    const int idx = table.column(name);
    if (idx < 0) throw ParseError(path + ": missing column '" + name + "'");
    return idx;
}

std::string fmt_bool(bool v) { return v ? "true" : "false"; }

}  // namespace

void write_fits(const std::string& path, const std::vector<FitRow>& rows) {
    csv::Table t;
    t.header = {"faculty_id", "m1", "m2", "b", "t_star", "sse", "sse_line", "chosen_model",
                "criterion"};
    for (const auto& r : rows) {
        t.rows.push_back({r.faculty_id, csv::format_double(r.m1), csv::format_double(r.m2),
                          csv::format_double(r.b), csv::format_double(r.t_star),
                          csv::format_double(r.sse), csv::format_double(r.sse_line),
                          r.chosen_model, r.criterion});
    }
    csv::write_file(path, t);
}

std::vector<FitRow> read_fits(const std::string& path) {
    const csv::Table t = csv::read_file(path);
    const int c_id = require_column(t, "faculty_id", path);
    const int c_m1 = require_column(t, "m1", path);
    const int c_m2 = require_column(t, "m2", path);
    const int c_b = require_column(t, "b", path);
    const int c_ts = require_column(t, "t_star", path);
    const int c_sse = require_column(t, "sse", path);
    const int c_sl = require_column(t, "sse_line", path);
    const int c_ch = require_column(t, "chosen_model", path);
    const int c_cr = require_column(t, "criterion", path);
    std::vector<FitRow> rows;
    for (const auto& row : t.rows) {
        FitRow r;
        r.faculty_id = row[static_cast<std::size_t>(c_id)];
        r.m1 = parse_double(row[static_cast<std::size_t>(c_m1)], path);
        r.m2 = parse_double(row[static_cast<std::size_t>(c_m2)], path);
        r.b = parse_double(row[static_cast<std::size_t>(c_b)], path);
        r.t_star = parse_double(row[static_cast<std::size_t>(c_ts)], path);
        r.sse = parse_double(row[static_cast<std::size_t>(c_sse)], path);
        r.sse_line = parse_double(row[static_cast<std::size_t>(c_sl)], path);
        r.chosen_model = row[static_cast<std::size_t>(c_ch)];
        r.criterion = row[static_cast<std::size_t>(c_cr)];
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_count_fits(const std::string& path, const std::vector<CountFitRow>& rows) {
    csv::Table t;
    t.header = {"faculty_id", "family", "m1", "m2", "b", "t_star", "zeta", "log_score",
                "converged"};
    for (const auto& r : rows) {
        t.rows.push_back({r.faculty_id, r.family, csv::format_double(r.m1),
                          csv::format_double(r.m2), csv::format_double(r.b),
                          csv::format_double(r.t_star),
                          r.zeta ? csv::format_double(*r.zeta) : std::string(),
                          csv::format_double(r.log_score), fmt_bool(r.converged)});
    }
    csv::write_file(path, t);
}

std::vector<CountFitRow> read_count_fits(const std::string& path) {
    const csv::Table t = csv::read_file(path);
    const int c_id = require_column(t, "faculty_id", path);
    const int c_fam = require_column(t, "family", path);
    const int c_m1 = require_column(t, "m1", path);
    const int c_m2 = require_column(t, "m2", path);
    const int c_b = require_column(t, "b", path);
    const int c_ts = require_column(t, "t_star", path);
    const int c_z = require_column(t, "zeta", path);
    const int c_ls = require_column(t, "log_score", path);
    const int c_cv = require_column(t, "converged", path);
    std::vector<CountFitRow> rows;
    for (const auto& row : t.rows) {
        CountFitRow r;
        r.faculty_id = row[static_cast<std::size_t>(c_id)];
        r.family = row[static_cast<std::size_t>(c_fam)];
        r.m1 = parse_double(row[static_cast<std::size_t>(c_m1)], path);
        r.m2 = parse_double(row[static_cast<std::size_t>(c_m2)], path);
        r.b = parse_double(row[static_cast<std::size_t>(c_b)], path);
        r.t_star = parse_double(row[static_cast<std::size_t>(c_ts)], path);
        const std::string& z = row[static_cast<std::size_t>(c_z)];
        if (!z.empty()) r.zeta = parse_double(z, path);
        r.log_score = parse_double(row[static_cast<std::size_t>(c_ls)], path);
        r.converged = parse_bool(row[static_cast<std::size_t>(c_cv)], path);
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_selection(const std::string& path, const std::vector<SelectionRow>& rows) {
    csv::Table t;
    t.header = {"faculty_id", "criterion", "score_line", "score_piecewise", "chosen"};
    for (const auto& r : rows) {
        t.rows.push_back({r.faculty_id, r.criterion, csv::format_double(r.score_line),
                          csv::format_double(r.score_piecewise), r.chosen});
    }
    csv::write_file(path, t);
}

std::vector<SelectionRow> read_selection(const std::string& path) {
    const csv::Table t = csv::read_file(path);
    const int c_id = require_column(t, "faculty_id", path);
    const int c_cr = require_column(t, "criterion", path);
    const int c_sl = require_column(t, "score_line", path);
    const int c_sp = require_column(t, "score_piecewise", path);
    const int c_ch = require_column(t, "chosen", path);
    std::vector<SelectionRow> rows;
    for (const auto& row : t.rows) {
        SelectionRow r;
        r.faculty_id = row[static_cast<std::size_t>(c_id)];
        r.criterion = row[static_cast<std::size_t>(c_cr)];
        r.score_line = parse_double(row[static_cast<std::size_t>(c_sl)], path);
        r.score_piecewise = parse_double(row[static_cast<std::size_t>(c_sp)], path);
        r.chosen = row[static_cast<std::size_t>(c_ch)];
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_stability(const std::string& path, const std::vector<StabilityReport>& rows) {
    csv::Table t;
    t.header = {"faculty_id", "votes_q1", "votes_q2", "votes_q3", "votes_q4", "degenerate",
                "modal_fraction", "stable", "signflip_fraction"};
    for (const auto& r : rows) {
        t.rows.push_back({r.faculty_id, csv::format_int(r.quadrant_votes[0]),
                          csv::format_int(r.quadrant_votes[1]), csv::format_int(r.quadrant_votes[2]),
                          csv::format_int(r.quadrant_votes[3]), csv::format_int(r.degenerate),
                          csv::format_double(r.modal_fraction), fmt_bool(r.stable),
                          csv::format_double(r.signflip_fraction)});
    }
    csv::write_file(path, t);
}

std::vector<StabilityRow> read_stability(const std::string& path) {
    const csv::Table t = csv::read_file(path);
    const int c_id = require_column(t, "faculty_id", path);
    const int c_q[4] = {require_column(t, "votes_q1", path), require_column(t, "votes_q2", path),
                        require_column(t, "votes_q3", path), require_column(t, "votes_q4", path)};
    const int c_dg = require_column(t, "degenerate", path);
    const int c_mf = require_column(t, "modal_fraction", path);
    const int c_st = require_column(t, "stable", path);
    const int c_sf = require_column(t, "signflip_fraction", path);
    std::vector<StabilityRow> rows;
    for (const auto& row : t.rows) {
        StabilityRow r;
        r.faculty_id = row[static_cast<std::size_t>(c_id)];
        for (int q = 0; q < 4; ++q) {
            r.votes[q] = parse_int(row[static_cast<std::size_t>(c_q[q])], path);
        }
        r.degenerate = parse_int(row[static_cast<std::size_t>(c_dg)], path);
        r.modal_fraction = parse_double(row[static_cast<std::size_t>(c_mf)], path);
        r.stable = parse_bool(row[static_cast<std::size_t>(c_st)], path);
        r.signflip_fraction = parse_double(row[static_cast<std::size_t>(c_sf)], path);
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_ensemble(const std::string& path, const EnsembleTable& table) {
    csv::Table t;
    t.header = {"class", "count", "mass"};
    const char* names[4] = {"quadrant_1", "quadrant_2", "quadrant_3", "quadrant_4"};
    for (int q = 0; q < 4; ++q) {
        t.rows.push_back({names[q], csv::format_int(table.quadrant_counts[static_cast<std::size_t>(q)]),
                          csv::format_double(table.quadrant_mass[static_cast<std::size_t>(q)])});
    }
    t.rows.push_back({"canonical", csv::format_int(table.canonical_count),
                      csv::format_double(table.canonical_mass)});
    t.rows.push_back({"kept", csv::format_int(table.kept_trials),
                      csv::format_double(table.total_trials > 0
                                             ? static_cast<double>(table.kept_trials) / table.total_trials
                                             : std::numeric_limits<double>::quiet_NaN())});
    t.rows.push_back({"total", csv::format_int(table.total_trials), csv::format_double(1.0)});
    csv::write_file(path, t);
}

void write_gini(const std::string& path, const DecadeGiniTable& table) {
    csv::Table t;
    t.header = {"decade", "n_faculty", "gini"};
    for (const auto& r : table.rows) {
        t.rows.push_back({csv::format_int(r.decade), csv::format_int(r.n_faculty),
                          csv::format_double(r.gini)});
    }
    csv::write_file(path, t);
}

void write_lorenz(const std::string& path, const DecadeGiniTable& table) {
    csv::Table t;
    t.header = {"decade", "X", "Y"};
    for (const auto& r : table.rows) {
        for (const auto& [x, y] : r.curve.points) {
            t.rows.push_back({csv::format_int(r.decade), csv::format_double(x),
                              csv::format_double(y)});
        }
    }
    csv::write_file(path, t);
}

void write_venues(const std::string& path, const std::vector<VenueOrderStats>& rows) {
    csv::Table t;
    t.header = {"venue", "n_multi", "n_alpha", "expected_alpha", "p_value", "flagged"};
    for (const auto& r : rows) {
        t.rows.push_back({r.venue, csv::format_int(r.n_multi), csv::format_int(r.n_alpha),
                          csv::format_double(r.expected_alpha), csv::format_double(r.p_value),
                          fmt_bool(r.flagged)});
    }
    csv::write_file(path, t);
}

std::vector<VenueOrderStats> read_venues(const std::string& path) {
    const csv::Table t = csv::read_file(path);
    const int c_v = require_column(t, "venue", path);
    const int c_nm = require_column(t, "n_multi", path);
    const int c_na = require_column(t, "n_alpha", path);
    const int c_ea = require_column(t, "expected_alpha", path);
    const int c_p = require_column(t, "p_value", path);
    const int c_f = require_column(t, "flagged", path);
    std::vector<VenueOrderStats> rows;
    for (const auto& row : t.rows) {
        VenueOrderStats r;
        r.venue = row[static_cast<std::size_t>(c_v)];
        r.n_multi = parse_int(row[static_cast<std::size_t>(c_nm)], path);
        r.n_alpha = parse_int(row[static_cast<std::size_t>(c_na)], path);
        r.expected_alpha = parse_double(row[static_cast<std::size_t>(c_ea)], path);
        r.p_value = parse_double(row[static_cast<std::size_t>(c_p)], path);
        r.flagged = parse_bool(row[static_cast<std::size_t>(c_f)], path);
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_classes(const std::string& path, const std::vector<ClassRow>& rows) {
    csv::Table t;
    t.header = {"faculty_id", "career_length", "m1", "m2", "b", "t_star", "quadrant",
                "canonical", "selected", "stable", "peak_year"};
    for (const auto& r : rows) {
        t.rows.push_back({r.faculty_id, csv::format_int(r.career_length), csv::format_double(r.m1),
                          csv::format_double(r.m2), csv::format_double(r.b),
                          csv::format_double(r.t_star), csv::format_int(r.quadrant),
                          fmt_bool(r.canonical), fmt_bool(r.selected), fmt_bool(r.stable),
                          r.peak_year ? csv::format_int(*r.peak_year) : std::string()});
    }
    csv::write_file(path, t);
}

void write_changepoints(const std::string& path, const ChangepointTable& table) {
    csv::Table t;
    t.header = {"career_length", "t_star"};
    for (const auto& r : table.rows) {
        t.rows.push_back({csv::format_int(r.career_length), csv::format_double(r.t_star)});
    }
    csv::write_file(path, t);
}

void write_tstar_hist(const std::string& path, const ChangepointTable& table) {
    csv::Table t;
    t.header = {"t_star", "count"};
    for (const auto& [year, count] : table.histogram) {
        t.rows.push_back({csv::format_int(year), csv::format_int(count)});
    }
    csv::write_file(path, t);
}

void write_changepoint_heatmap(const std::string& path, const ChangepointTable& table) {
    std::map<std::pair<int, int>, int> cells;
    for (const auto& r : table.rows) {
        cells[{r.career_length, static_cast<int>(std::llround(r.t_star))}] += 1;
    }
    csv::Table t;
    t.header = {"x", "y", "weight"};
    for (const auto& [cell, weight] : cells) {
        t.rows.push_back({csv::format_int(cell.first), csv::format_int(cell.second),
                          csv::format_int(weight)});
    }
    csv::write_file(path, t);
}

void write_population(const std::string& path, const PopulationSummary& summary) {
    nlohmann::json j;
    j["n"] = summary.n;
    j["frac_piecewise"] = summary.frac_piecewise;
    j["frac_stable"] = summary.frac_stable;
    j["frac_stable_nonlinear"] = summary.frac_stable_nonlinear;
    j["frac_canonical"] = summary.frac_canonical;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

void write_curves(const std::string& path, const CohortCurves& curves, int year_base) {
    csv::Table t;
    t.header = {"stratum", "career_year", "mean_count", "n"};
    for (const auto& c : curves.strata) {
        for (std::size_t y = 0; y < c.mean_counts.size(); ++y) {
            t.rows.push_back({csv::format_int(c.stratum),
                              csv::format_int(static_cast<int>(y) + year_base),
                              csv::format_double(c.mean_counts[y]), csv::format_int(c.n_at_year[y])});
        }
    }
    csv::write_file(path, t);
}

void write_role_curves(const std::string& path, const std::vector<RoleCurvePoint>& rows,
                       int year_base) {
    csv::Table t;
    t.header = {"stratum", "career_year", "mean_frac_first", "mean_frac_last", "n"};
    for (const auto& r : rows) {
        t.rows.push_back({csv::format_int(r.stratum), csv::format_int(r.career_year + year_base),
                          csv::format_double(r.mean_frac_first),
                          csv::format_double(r.mean_frac_last), csv::format_int(r.n)});
    }
    csv::write_file(path, t);
}

void write_medians(const std::string& path, const std::vector<InstitutionMedianRow>& rows) {
    csv::Table t;
    t.header = {"employer_rank", "is_private", "n_faculty", "median_total"};
    for (const auto& r : rows) {
        t.rows.push_back({csv::format_double(r.employer_rank), fmt_bool(r.is_private),
                          csv::format_int(r.n_faculty), csv::format_double(r.median_total)});
    }
    csv::write_file(path, t);
}

void write_transitions(const std::string& path, const std::vector<RoleFractions>& rows,
                       const TransitionSummary& summary) {
    csv::Table t;
    t.header = {"faculty_id", "frac_first_early", "frac_first_late", "transitioned"};
    for (const auto& r : rows) {
        t.rows.push_back({r.faculty_id, csv::format_double(r.frac_first_early),
                          csv::format_double(r.frac_first_late), fmt_bool(r.transitioned)});
    }
    csv::write_file(path, t);

    nlohmann::json j;
    j["n_eligible"] = summary.n_eligible;
    j["n_transitioned"] = summary.n_transitioned;
    j["rate"] = summary.rate;
    const std::string summary_path = path + ".summary.json";
    std::ofstream out(summary_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + summary_path);
    out << j.dump(2) << '\n';
}

}  // namespace traj::tables
