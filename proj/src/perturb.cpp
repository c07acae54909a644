#include "traj/perturb.hpp"

#include <cmath>
#include <stdexcept>

#include "traj/errors.hpp"
#include "traj/ingest.hpp"
#include "traj/parallel.hpp"
#include "traj/rng.hpp"

namespace traj {

std::vector<PublicationRecord> perturb_years(const std::vector<PublicationRecord>& pubs,
                                             const NoiseSpec& spec,
                                             int trial_index) {
    if (!(spec.sigma > 0.0)) throw std::invalid_argument("perturb_years: sigma must be positive");
    std::vector<PublicationRecord> out = pubs;
    for (auto& p : out) {
        std::uint64_t key = spec.seed;
        key = rng::derive(key, p.faculty_id);
        key = rng::derive(key, static_cast<std::uint64_t>(trial_index));
        key = rng::derive(key, p.pub_id);
        rng::Stream stream(key);
        const double g = stream.next_normal(0.0, spec.sigma);
        p.year = static_cast<int>(std::llround(p.year + g));
    }
    return out;
}

void apply_verdict(StabilityReport& report, int trials, double stability_threshold) {
    int modal = 0;
    for (int i = 1; i < 4; ++i) {
        if (report.quadrant_votes[static_cast<std::size_t>(i)] >
            report.quadrant_votes[static_cast<std::size_t>(modal)]) {
            modal = i;
        }
    }
    report.modal_quadrant = static_cast<Quadrant>(modal + 1);
    report.modal_fraction =
        trials > 0 ? static_cast<double>(report.quadrant_votes[static_cast<std::size_t>(modal)]) / trials : 0.0;
    report.stable = report.modal_fraction >= stability_threshold &&
                    report.modal_quadrant == report.baseline_quadrant;
}

StabilityReport stability_analysis(const FacultyRecord& faculty,
                                   const std::vector<PublicationRecord>& pubs,
                                   const AdjustmentModel& model,
                                   const NoiseSpec& spec,
                                   double stability_threshold,
                                   int census_year) {
    if (spec.trials < 1) throw std::invalid_argument("stability_analysis: trials must be >= 1");

    const CareerSeries baseline_raw = build_series(faculty, pubs, true, census_year);
    const CareerSeries baseline = adjust_series(model, baseline_raw, faculty.source);
    const PiecewiseParams base_fit = fit_piecewise(baseline);
    const int span = baseline.career_length();

    StabilityReport report;
    report.faculty_id = faculty.faculty_id;
    report.baseline_quadrant = classify_quadrant(base_fit.m1, base_fit.m2);

    int flips = 0;
    for (int trial = 0; trial < spec.trials; ++trial) {
        const auto shifted = perturb_years(pubs, spec, trial);
        const CareerSeries raw = build_series_fixed(faculty, shifted, span);
        const CareerSeries adjusted = adjust_series(model, raw, faculty.source);
        try {
            const PiecewiseParams fit = fit_piecewise(adjusted);
            const Quadrant q = classify_quadrant(fit.m1, fit.m2);
            report.quadrant_votes[static_cast<std::size_t>(static_cast<int>(q) - 1)] += 1;
            if (q != report.baseline_quadrant) ++flips;
        } catch (const DegenerateFit&) {
            report.degenerate += 1;
        }
    }
    report.signflip_fraction = static_cast<double>(flips) / spec.trials;
    apply_verdict(report, spec.trials, stability_threshold);
    return report;
}

std::vector<StabilityReport> stability_cohort(const std::vector<FacultyRecord>& faculty,
                                              const std::vector<PublicationRecord>& pubs,
                                              const AdjustmentModel& model,
                                              const NoiseSpec& spec,
                                              double stability_threshold,
                                              int census_year,
                                              int threads) {
    const auto groups = group_by_faculty(pubs);
    std::vector<std::vector<PublicationRecord>> per_faculty(faculty.size());
    for (std::size_t i = 0; i < faculty.size(); ++i) {
        auto it = groups.find(faculty[i].faculty_id);
        if (it == groups.end()) continue;
        for (std::size_t idx : it->second) per_faculty[i].push_back(pubs[idx]);
    }
    std::vector<StabilityReport> reports(faculty.size());
    parallel_for(faculty.size(), threads, [&](std::size_t i) {
        reports[i] = stability_analysis(faculty[i], per_faculty[i], model, spec,
                                        stability_threshold, census_year);
    });
    return reports;
}

EnsembleTable ensemble_distribution(const std::vector<FacultyRecord>& faculty,
                                    const std::vector<PublicationRecord>& pubs,
                                    const AdjustmentModel& model,
                                    const NoiseSpec& spec,
                                    Criterion criterion,
                                    double t_star_cap,
                                    int census_year,
                                    int threads) {
    const auto groups = group_by_faculty(pubs);

    struct Partial {
        long long total = 0;
        long long kept = 0;
        std::array<long long, 4> quadrants{};
        long long canonical = 0;
    };
    std::vector<Partial> partials(faculty.size());

    parallel_for(faculty.size(), threads, [&](std::size_t i) {
        std::vector<PublicationRecord> own;
        if (auto it = groups.find(faculty[i].faculty_id); it != groups.end()) {
            for (std::size_t idx : it->second) own.push_back(pubs[idx]);
        }
        const CareerSeries baseline = build_series(faculty[i], own, true, census_year);
        const int span = baseline.career_length();
        Partial& p = partials[i];
        for (int trial = 0; trial < spec.trials; ++trial) {
            p.total += 1;
            const auto shifted = perturb_years(own, spec, trial);
            const CareerSeries raw = build_series_fixed(faculty[i], shifted, span);
            const CareerSeries adjusted = adjust_series(model, raw, faculty[i].source);
            try {
                const LineParams line = fit_line(adjusted);
                const PiecewiseParams fit = fit_piecewise(adjusted);
                const double s_line = information_score(criterion, adjusted.career_length(), 2, line.sse);
                const double s_pw = information_score(criterion, adjusted.career_length(), 4, fit.sse);
                if (!(s_pw < s_line)) continue;
                p.kept += 1;
                const Quadrant q = classify_quadrant(fit.m1, fit.m2);
                p.quadrants[static_cast<std::size_t>(static_cast<int>(q) - 1)] += 1;
                if (is_canonical(fit, t_star_cap)) p.canonical += 1;
            } catch (const DegenerateFit&) {
            } catch (const std::invalid_argument&) {
                // selection undefined for this trial (e.g. too few points)
            }
        }
    });

    EnsembleTable table;
    for (const Partial& p : partials) {
        table.total_trials += p.total;
        table.kept_trials += p.kept;
        for (std::size_t q = 0; q < 4; ++q) table.quadrant_counts[q] += p.quadrants[q];
        table.canonical_count += p.canonical;
    }
    if (table.kept_trials > 0) {
        for (std::size_t q = 0; q < 4; ++q) {
            table.quadrant_mass[q] =
                static_cast<double>(table.quadrant_counts[q]) / static_cast<double>(table.kept_trials);
        }
        table.canonical_mass =
            static_cast<double>(table.canonical_count) / static_cast<double>(table.kept_trials);
    }
    return table;
}

}  // namespace traj
