#include "traj/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "traj/stats.hpp"

namespace traj {

Quadrant classify_quadrant(double m1, double m2) {
    if (m1 > 0) return m2 > 0 ? Quadrant::I : Quadrant::IV;
    return m2 > 0 ? Quadrant::II : Quadrant::III;
}

bool is_canonical(const PiecewiseParams& params, double t_star_cap) {
    return params.m1 > 0 && params.m2 < 0 && params.t_star <= t_star_cap &&
           std::abs(params.m2) < params.m1;
}

std::optional<int> peak_year(const CareerSeries& series) {
    if (series.counts.empty()) return std::nullopt;
    int best = -1;
    double best_count = 0.0;
    for (int i = 0; i < series.career_length(); ++i) {
        const double c = series.counts[static_cast<std::size_t>(i)];
        if (c > best_count) {
            best_count = c;
            best = i;
        }
    }
    if (best < 0) return std::nullopt;
    return best;
}

ChangepointTable changepoint_table(const std::vector<FacultyFit>& fits) {
    ChangepointTable table;
    for (const auto& f : fits) {
        if (!f.stable || !f.piecewise_selected) continue;
        table.rows.push_back(ChangepointRow{f.career_length, f.fit.t_star});
        table.histogram[static_cast<int>(std::llround(f.fit.t_star))] += 1;
    }
    return table;
}

std::vector<std::vector<std::size_t>> rank_strata(const std::vector<FacultyRecord>& faculty,
                                                  const std::vector<double>& quantile_edges) {
    for (double e : quantile_edges) {
        if (e <= 0.0 || e >= 1.0) throw std::invalid_argument("rank_strata: edges must lie in (0, 1)");
    }
    std::vector<double> edges = quantile_edges;
    std::sort(edges.begin(), edges.end());

    const std::size_t n = faculty.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (faculty[a].employer_rank != faculty[b].employer_rank) {
            return faculty[a].employer_rank < faculty[b].employer_rank;
        }
        return faculty[a].faculty_id < faculty[b].faculty_id;
    });

    std::vector<std::size_t> cuts;
    for (double e : edges) cuts.push_back(static_cast<std::size_t>(std::floor(e * static_cast<double>(n))));
    cuts.push_back(n);

    std::vector<std::vector<std::size_t>> groups;
    std::size_t lo = 0;
    for (std::size_t cut : cuts) {
        const std::size_t hi = std::max(cut, lo);
        groups.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(lo),
                            order.begin() + static_cast<std::ptrdiff_t>(hi));
        lo = hi;
    }
    return groups;
}

CohortCurves cohort_curves(const std::vector<FacultyRecord>& faculty,
                           const std::vector<CareerSeries>& series,
                           const std::vector<double>& quantile_edges) {
    if (faculty.size() != series.size()) {
        throw std::invalid_argument("cohort_curves: faculty/series size mismatch");
    }
    const auto groups = rank_strata(faculty, quantile_edges);

    CohortCurves out;
    for (std::size_t s = 0; s < groups.size(); ++s) {
        const auto& members = groups[s];
        if (members.empty()) {
            out.warnings.push_back("stratum " + std::to_string(s + 1) + " is empty; omitted");
            continue;
        }
        int max_t = 0;
        for (std::size_t p : members) max_t = std::max(max_t, series[p].career_length());
        StratumCurve curve;
        curve.stratum = static_cast<int>(s + 1);
        curve.mean_counts.assign(static_cast<std::size_t>(max_t), 0.0);
        curve.n_at_year.assign(static_cast<std::size_t>(max_t), 0);
        for (std::size_t p : members) {
            const CareerSeries& sr = series[p];
            for (int t = 0; t < sr.career_length(); ++t) {
                curve.mean_counts[static_cast<std::size_t>(t)] += sr.counts[static_cast<std::size_t>(t)];
                curve.n_at_year[static_cast<std::size_t>(t)] += 1;
            }
        }
        for (std::size_t t = 0; t < curve.mean_counts.size(); ++t) {
            curve.mean_counts[t] /= curve.n_at_year[t];
        }
        out.strata.push_back(std::move(curve));
    }
    return out;
}

std::vector<InstitutionMedianRow> institution_medians(const std::vector<FacultyRecord>& faculty,
                                                      const std::vector<CareerSeries>& series,
                                                      ProductionWindow window) {
    if (faculty.size() != series.size()) {
        throw std::invalid_argument("institution_medians: faculty/series size mismatch");
    }
    std::map<std::pair<double, bool>, std::vector<double>> totals;
    for (std::size_t i = 0; i < faculty.size(); ++i) {
        const CareerSeries& sr = series[i];
        int span = sr.career_length();
        if (window == ProductionWindow::FirstDecade) {
            if (span < 10) continue;
            span = 10;
        }
        double total = 0.0;
        for (int t = 0; t < span; ++t) total += sr.counts[static_cast<std::size_t>(t)];
        totals[{faculty[i].employer_rank, faculty[i].is_private}].push_back(total);
    }
    std::vector<InstitutionMedianRow> rows;
    for (auto& [key, values] : totals) {
        InstitutionMedianRow row;
        row.employer_rank = key.first;
        row.is_private = key.second;
        row.n_faculty = static_cast<int>(values.size());
        row.median_total = median_of(std::move(values));
        rows.push_back(row);
    }
    return rows;
}

PopulationSummary summarize_population(const std::vector<FacultyFit>& fits, double t_star_cap) {
    PopulationSummary s;
    s.n = static_cast<int>(fits.size());
    if (fits.empty()) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        s.frac_piecewise = s.frac_stable = s.frac_stable_nonlinear = s.frac_canonical = nan;
        return s;
    }
    int selected = 0, stable = 0, both = 0, canonical = 0;
    for (const auto& f : fits) {
        if (f.piecewise_selected) ++selected;
        if (f.stable) ++stable;
        if (f.piecewise_selected && f.stable) {
            ++both;
            if (is_canonical(f.fit, t_star_cap)) ++canonical;
        }
    }
    const double n = static_cast<double>(s.n);
    s.frac_piecewise = selected / n;
    s.frac_stable = stable / n;
    s.frac_stable_nonlinear = both / n;
    s.frac_canonical = canonical / n;
    return s;
}

}  // namespace traj
