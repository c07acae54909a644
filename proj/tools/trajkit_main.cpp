#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "traj/authorship.hpp"
#include "traj/calibrate.hpp"
#include "traj/classify.hpp"
#include "traj/countmodels.hpp"
#include "traj/csv.hpp"
#include "traj/errors.hpp"
#include "traj/inequality.hpp"
#include "traj/ingest.hpp"
#include "traj/perturb.hpp"
#include "traj/piecewise.hpp"
#include "traj/synthgen.hpp"
#include "traj/tables.hpp"

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

traj::Criterion parse_criterion(const std::string& name) {
    if (name == "aic") return traj::Criterion::Aic;
    if (name == "bic") return traj::Criterion::Bic;
    return traj::Criterion::Aicc;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

// Run metadata: everything needed to reproduce the outputs byte for byte.
// Deliberately no timestamps, so reruns with one config are identical.
void write_meta(const std::string& out_dir, const std::string& sub, json config) {
    json j;
    j["subcommand"] = sub;
    j["tool_version"] = kVersion;
    j["config"] = std::move(config);
    write_json_file(out_dir + "/" + sub + "_meta.json", j);
}

std::string prepare_out_dir(const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    return out_dir;
}

// Adjustment-model selection shared by the analysis subcommands.
struct ModelOpts {
    std::string path;
    bool identity = false;
    int reference_year = 2011;
    bool normalize_growth = true;
    CLI::Option* ref_opt = nullptr;
    CLI::Option* norm_opt = nullptr;
};

void add_model_opts(CLI::App* sub, ModelOpts& mo) {
    sub->add_option("--adjust-model", mo.path,
                    "Adjustment model JSON; omitted means the built-in coefficients");
    sub->add_option("--identity-adjust", mo.identity,
                    "true disables coverage and growth adjustment entirely");
    mo.ref_opt = sub->add_option("--reference-year", mo.reference_year,
                                 "Reference year for growth normalization");
    mo.norm_opt = sub->add_option("--normalize-growth", mo.normalize_growth,
                                  "Normalize the growth form at the reference year (true/false)");
}

traj::AdjustmentModel resolve_model(const ModelOpts& mo) {
    traj::AdjustmentModel m = mo.identity ? traj::AdjustmentModel::identity()
                              : mo.path.empty() ? traj::AdjustmentModel::defaults()
                                                : traj::load_model(mo.path);
    if (mo.ref_opt && mo.ref_opt->count() > 0) m.reference_year = mo.reference_year;
    if (mo.norm_opt && mo.norm_opt->count() > 0) m.normalize_growth = mo.normalize_growth;
    return m;
}

json model_meta(const ModelOpts& mo, const traj::AdjustmentModel& m) {
    json j;
    j["adjust_model"] = mo.identity ? "(identity)" : mo.path.empty() ? "(built-in)" : mo.path;
    j["reference_year"] = m.reference_year;
    j["normalize_growth"] = m.normalize_growth;
    return j;
}

struct DataOpts {
    std::string faculty_path;
    std::string pubs_path;
    bool include_prehire = true;
    int census_year = 2011;
    bool eligibility = true;
    int min_career = 10;
    int max_career = 25;
    int min_active = 3;
};

void add_data_opts(CLI::App* sub, DataOpts& d, bool default_eligibility) {
    d.eligibility = default_eligibility;
    sub->add_option("--faculty", d.faculty_path, "Faculty records (JSONL or CSV)")->required();
    sub->add_option("--pubs", d.pubs_path, "Publication records (JSONL or CSV)")->required();
    sub->add_option("--include-prehire", d.include_prehire,
                    "Bucket pre-hire publications into career year 0 (true/false)");
    sub->add_option("--census-year", d.census_year, "End of the observation window");
    sub->add_option("--eligibility", d.eligibility,
                    "Restrict to careers within the length window with enough active years");
    sub->add_option("--min-career", d.min_career, "Eligibility: minimum career length");
    sub->add_option("--max-career", d.max_career, "Eligibility: maximum career length");
    sub->add_option("--min-active", d.min_active, "Eligibility: minimum years with publications");
}

json data_meta(const DataOpts& d) {
    json j;
    j["faculty"] = d.faculty_path;
    j["pubs"] = d.pubs_path;
    j["include_prehire"] = d.include_prehire;
    j["census_year"] = d.census_year;
    j["eligibility"] = d.eligibility;
    if (d.eligibility) {
        j["min_career"] = d.min_career;
        j["max_career"] = d.max_career;
        j["min_active"] = d.min_active;
    }
    return j;
}

struct Loaded {
    std::vector<traj::FacultyRecord> faculty;  // eligible subset, input order
    std::vector<traj::CareerSeries> raw;
    std::vector<traj::CareerSeries> adjusted;
    std::vector<traj::PublicationRecord> pubs;  // full corpus
};

Loaded load_and_build(const DataOpts& d, const traj::AdjustmentModel& model) {
    traj::Corpus corpus = traj::load_corpus(d.faculty_path, d.pubs_path);
    const auto groups = traj::group_by_faculty(corpus.publications);
    Loaded out;
    for (const auto& f : corpus.faculty) {
        std::vector<traj::PublicationRecord> mine;
        if (const auto it = groups.find(f.faculty_id); it != groups.end()) {
            for (const std::size_t idx : it->second) mine.push_back(corpus.publications[idx]);
        }
        traj::CareerSeries s = traj::build_series(f, mine, d.include_prehire, d.census_year);
        if (d.eligibility && !traj::eligible_for_fit(s, d.min_career, d.max_career, d.min_active)) {
            continue;
        }
        out.adjusted.push_back(traj::adjust_series(model, s, f.source));
        out.raw.push_back(std::move(s));
        out.faculty.push_back(f);
    }
    out.pubs = std::move(corpus.publications);
    return out;
}

void note(const std::string& path, std::size_t rows) {
    std::cout << "wrote " << path << " (" << rows << " rows)\n";
}

// ---------------------------------------------------------------------------

int run_calibrate(const std::string& benchmarks_path, const std::string& out_dir,
                  const ModelOpts& mo) {
    const auto pairs = traj::load_benchmarks(benchmarks_path);
    const traj::CoverageFit fit = traj::fit_coverage(pairs);
    traj::AdjustmentModel model = resolve_model(mo);
    model.m_alpha = fit.m_alpha;
    model.b_alpha = fit.b_alpha;
    traj::save_model(out_dir + "/model.json", model);
    std::cout << "coverage fit: m_alpha=" << traj::csv::format_double(fit.m_alpha)
              << " b_alpha=" << traj::csv::format_double(fit.b_alpha)
              << " r2=" << traj::csv::format_double(fit.r_squared) << "\n";
    json cfg = model_meta(mo, model);
    cfg["benchmarks"] = benchmarks_path;
    cfg["coverage_r2"] = fit.r_squared;
    write_meta(out_dir, "calibrate", cfg);
    return 0;
}

int run_fit(const DataOpts& d, const ModelOpts& mo, const std::string& out_dir,
            const std::string& family, const std::string& criterion_name) {
    const traj::AdjustmentModel model = resolve_model(mo);
    const Loaded data = load_and_build(d, model);

    json cfg = data_meta(d);
    cfg.update(model_meta(mo, model));
    cfg["family"] = family;

    if (family == "ls") {
        const traj::Criterion crit = parse_criterion(criterion_name);
        cfg["criterion"] = criterion_name;
        std::vector<traj::tables::FitRow> rows;
        for (std::size_t i = 0; i < data.faculty.size(); ++i) {
            const traj::CareerSeries& s = data.adjusted[i];
            traj::tables::FitRow r;
            r.faculty_id = data.faculty[i].faculty_id;
            try {
                const traj::PiecewiseParams p = traj::fit_piecewise(s);
                const traj::LineParams line = traj::fit_line(s);
                const traj::SelectionResult sel = traj::select_model(s, crit);
                r.m1 = p.m1;
                r.m2 = p.m2;
                r.b = p.b;
                r.t_star = p.t_star;
                r.sse = p.sse;
                r.sse_line = line.sse;
                r.chosen_model = traj::model_kind_name(sel.chosen);
                r.criterion = criterion_name;
            } catch (const traj::DegenerateFit&) {
                continue;  // too short or singular; skipped, not imputed
            }
            rows.push_back(std::move(r));
        }
        traj::tables::write_fits(out_dir + "/fits.csv", rows);
        note(out_dir + "/fits.csv", rows.size());
        write_meta(out_dir, "fit", cfg);
        return 0;
    }

    const traj::CountFamily fam =
        family == "poisson" ? traj::CountFamily::Poisson : traj::CountFamily::NegBin;
    std::vector<traj::tables::CountFitRow> rows;
    for (std::size_t i = 0; i < data.faculty.size(); ++i) {
        traj::tables::CountFitRow r;
        r.faculty_id = data.faculty[i].faculty_id;
        r.family = family;
        try {
            const traj::CountModelFit f = traj::fit_count_model(data.raw[i], model, fam);
            r.m1 = f.m1;
            r.m2 = f.m2;
            r.b = f.b;
            r.t_star = f.t_star;
            r.zeta = f.zeta;
            r.log_score = f.log_score;
            r.converged = f.converged;
        } catch (const traj::FitFailure&) {
            continue;
        } catch (const traj::DegenerateFit&) {
            continue;
        }
        rows.push_back(std::move(r));
    }
    traj::tables::write_count_fits(out_dir + "/countfits.csv", rows);
    note(out_dir + "/countfits.csv", rows.size());
    write_meta(out_dir, "fit", cfg);
    return 0;
}

int run_select(const DataOpts& d, const ModelOpts& mo, const std::string& out_dir,
               const std::string& criterion_name) {
    const traj::AdjustmentModel model = resolve_model(mo);
    const Loaded data = load_and_build(d, model);
    const traj::Criterion crit = parse_criterion(criterion_name);

    std::vector<traj::tables::SelectionRow> rows;
    for (std::size_t i = 0; i < data.faculty.size(); ++i) {
        traj::tables::SelectionRow r;
        r.faculty_id = data.faculty[i].faculty_id;
        r.criterion = criterion_name;
        try {
            const traj::SelectionResult sel = traj::select_model(data.adjusted[i], crit);
            r.score_line = sel.score_line;
            r.score_piecewise = sel.score_piecewise;
            r.chosen = traj::model_kind_name(sel.chosen);
        } catch (const traj::DegenerateFit&) {
            continue;
        } catch (const std::invalid_argument&) {
            continue;  // criterion undefined at this sample size
        }
        rows.push_back(std::move(r));
    }
    traj::tables::write_selection(out_dir + "/selection.csv", rows);
    note(out_dir + "/selection.csv", rows.size());

    json cfg = data_meta(d);
    cfg.update(model_meta(mo, model));
    cfg["criterion"] = criterion_name;
    write_meta(out_dir, "select", cfg);
    return 0;
}

int run_classify(const DataOpts& d, const ModelOpts& mo, const std::string& out_dir,
                 const std::string& fits_path, const std::string& stability_path,
                 double t_star_cap) {
    const traj::AdjustmentModel model = resolve_model(mo);
    const Loaded data = load_and_build(d, model);
    const auto fit_rows = traj::tables::read_fits(fits_path);

    std::map<std::string, std::size_t> faculty_index;
    for (std::size_t i = 0; i < data.faculty.size(); ++i) {
        faculty_index[data.faculty[i].faculty_id] = i;
    }
    std::map<std::string, bool> stable_by_id;
    if (!stability_path.empty()) {
        for (const auto& s : traj::tables::read_stability(stability_path)) {
            stable_by_id[s.faculty_id] = s.stable;
        }
    }

    std::vector<traj::FacultyFit> fits;
    std::vector<traj::tables::ClassRow> classes;
    for (const auto& fr : fit_rows) {
        const auto it = faculty_index.find(fr.faculty_id);
        if (it == faculty_index.end()) {
            throw traj::ParseError(fits_path + ": faculty '" + fr.faculty_id +
                                   "' not present in the loaded cohort");
        }
        const traj::CareerSeries& series = data.adjusted[it->second];

        traj::FacultyFit ff;
        ff.faculty_id = fr.faculty_id;
        ff.career_length = series.career_length();
        ff.fit = traj::PiecewiseParams{fr.m1, fr.m2, fr.b, fr.t_star, fr.sse};
        ff.sse_line = fr.sse_line;
        ff.piecewise_selected = fr.chosen_model == "piecewise";
        if (stability_path.empty()) {
            ff.stable = true;
        } else {
            const auto st = stable_by_id.find(fr.faculty_id);
            ff.stable = st != stable_by_id.end() && st->second;
        }

        traj::tables::ClassRow row;
        row.faculty_id = ff.faculty_id;
        row.career_length = ff.career_length;
        row.m1 = fr.m1;
        row.m2 = fr.m2;
        row.b = fr.b;
        row.t_star = fr.t_star;
        row.quadrant = static_cast<int>(traj::classify_quadrant(fr.m1, fr.m2));
        row.canonical = traj::is_canonical(ff.fit, t_star_cap);
        row.selected = ff.piecewise_selected;
        row.stable = ff.stable;
        row.peak_year = traj::peak_year(series);
        classes.push_back(std::move(row));
        fits.push_back(std::move(ff));
    }

    traj::tables::write_classes(out_dir + "/classes.csv", classes);
    note(out_dir + "/classes.csv", classes.size());

    traj::tables::write_population(out_dir + "/population.json",
                                   traj::summarize_population(fits, t_star_cap));

    // Change-point displays exclude short careers entirely; with the default
    // eligibility window this is a no-op.
    std::vector<traj::FacultyFit> long_enough;
    for (const auto& f : fits) {
        if (f.career_length >= 10) long_enough.push_back(f);
    }
    const traj::ChangepointTable table = traj::changepoint_table(long_enough);
    traj::tables::write_changepoints(out_dir + "/changepoints.csv", table);
    traj::tables::write_tstar_hist(out_dir + "/tstar_hist.csv", table);
    traj::tables::write_changepoint_heatmap(out_dir + "/changepoint_heatmap.csv", table);
    note(out_dir + "/changepoints.csv", table.rows.size());

    json cfg = data_meta(d);
    cfg.update(model_meta(mo, model));
    cfg["fits"] = fits_path;
    cfg["stability"] = stability_path.empty() ? "(none: all treated as stable)" : stability_path;
    cfg["tstar_cap"] = t_star_cap;
    cfg["short_career_rule"] = "careers under 10 years excluded from change-point tables";
    write_meta(out_dir, "classify", cfg);
    return 0;
}

int run_stability(const DataOpts& d, const ModelOpts& mo, const std::string& out_dir,
                  const traj::NoiseSpec& spec, double threshold, int threads) {
    const traj::AdjustmentModel model = resolve_model(mo);
    const Loaded data = load_and_build(d, model);
    const auto reports = traj::stability_cohort(data.faculty, data.pubs, model, spec, threshold,
                                                d.census_year, threads);
    traj::tables::write_stability(out_dir + "/stability.csv", reports);
    note(out_dir + "/stability.csv", reports.size());

    json cfg = data_meta(d);
    cfg.update(model_meta(mo, model));
    cfg["sigma"] = spec.sigma;
    cfg["trials"] = spec.trials;
    cfg["seed"] = spec.seed;
    cfg["stability_threshold"] = threshold;
    cfg["threads"] = threads;
    cfg["prehire_rule"] = "perturbed years outside the window are clamped to its edges";
    write_meta(out_dir, "stability", cfg);
    return 0;
}

int run_ensemble(const DataOpts& d, const ModelOpts& mo, const std::string& out_dir,
                 const traj::NoiseSpec& spec, const std::string& criterion_name,
                 double t_star_cap, int threads) {
    const traj::AdjustmentModel model = resolve_model(mo);
    const Loaded data = load_and_build(d, model);
    const traj::EnsembleTable table =
        traj::ensemble_distribution(data.faculty, data.pubs, model, spec,
                                    parse_criterion(criterion_name), t_star_cap, d.census_year,
                                    threads);
    traj::tables::write_ensemble(out_dir + "/ensemble.csv", table);
    note(out_dir + "/ensemble.csv", 6);

    json cfg = data_meta(d);
    cfg.update(model_meta(mo, model));
    cfg["sigma"] = spec.sigma;
    cfg["trials"] = spec.trials;
    cfg["seed"] = spec.seed;
    cfg["criterion"] = criterion_name;
    cfg["tstar_cap"] = t_star_cap;
    cfg["threads"] = threads;
    write_meta(out_dir, "ensemble", cfg);
    return 0;
}

int run_gini(const DataOpts& d, const ModelOpts& mo, const std::string& out_dir,
             int window_years) {
    const traj::AdjustmentModel model = resolve_model(mo);
    const Loaded data = load_and_build(d, model);
    const std::optional<int> window =
        window_years > 0 ? std::optional<int>(window_years) : std::nullopt;
    const traj::DecadeGiniTable table = traj::decade_ginis(data.faculty, data.adjusted, window);
    traj::tables::write_gini(out_dir + "/gini.csv", table);
    traj::tables::write_lorenz(out_dir + "/lorenz.csv", table);
    note(out_dir + "/gini.csv", table.rows.size());
    for (const auto& w : table.warnings) std::cout << "note: " << w << "\n";

    json cfg = data_meta(d);
    cfg.update(model_meta(mo, model));
    cfg["window_years"] = window_years;
    write_meta(out_dir, "gini", cfg);
    return 0;
}

int run_authorship(const DataOpts& d, const std::string& out_dir, double alpha_level,
                   double ratio_threshold, const std::string& mode_name, std::uint64_t seed) {
    traj::Corpus corpus = traj::load_corpus(d.faculty_path, d.pubs_path);
    const traj::TailMode mode = mode_name == "exact"      ? traj::TailMode::Exact
                                : mode_name == "montecarlo" ? traj::TailMode::MonteCarlo
                                                            : traj::TailMode::Auto;
    const traj::VenueFlagResult flags =
        traj::flag_alphabetized_venues(corpus.publications, alpha_level, ratio_threshold, mode,
                                       seed);
    traj::tables::write_venues(out_dir + "/venues.csv", flags.venues);
    note(out_dir + "/venues.csv", flags.venues.size());

    const auto groups = traj::group_by_faculty(corpus.publications);
    std::vector<traj::RoleFractions> rows;
    int short_careers = 0, sparse_windows = 0;
    for (const auto& f : corpus.faculty) {
        std::vector<traj::PublicationRecord> mine;
        if (const auto it = groups.find(f.faculty_id); it != groups.end()) {
            for (const std::size_t idx : it->second) mine.push_back(corpus.publications[idx]);
        }
        try {
            const auto rf =
                traj::transition_fractions(f, mine, flags.flagged, d.census_year);
            if (rf) {
                rows.push_back(*rf);
            } else {
                ++sparse_windows;
            }
        } catch (const std::invalid_argument&) {
            ++short_careers;
        }
    }
    traj::tables::TransitionSummary summary;
    summary.n_eligible = static_cast<int>(rows.size());
    for (const auto& r : rows) summary.n_transitioned += r.transitioned ? 1 : 0;
    summary.rate = rows.empty() ? std::numeric_limits<double>::quiet_NaN()
                                : static_cast<double>(summary.n_transitioned) / summary.n_eligible;
    traj::tables::write_transitions(out_dir + "/transitions.csv", rows, summary);
    note(out_dir + "/transitions.csv", rows.size());

    json cfg;
    cfg["faculty"] = d.faculty_path;
    cfg["pubs"] = d.pubs_path;
    cfg["census_year"] = d.census_year;
    cfg["alpha_level"] = alpha_level;
    cfg["ratio_threshold"] = ratio_threshold;
    cfg["mode"] = mode_name;
    cfg["seed"] = seed;
    cfg["skipped_short_careers"] = short_careers;
    cfg["skipped_sparse_windows"] = sparse_windows;
    write_meta(out_dir, "authorship", cfg);
    return 0;
}

int run_curves(const DataOpts& d, const ModelOpts& mo, const std::string& out_dir,
               const std::vector<double>& strata, const std::string& venues_path, int year_base) {
    const traj::AdjustmentModel model = resolve_model(mo);
    const Loaded data = load_and_build(d, model);

    const traj::CohortCurves curves = traj::cohort_curves(data.faculty, data.adjusted, strata);
    traj::tables::write_curves(out_dir + "/curves.csv", curves, year_base);
    for (const auto& w : curves.warnings) std::cout << "note: " << w << "\n";

    std::set<std::string> flagged;
    if (!venues_path.empty()) {
        for (const auto& v : traj::tables::read_venues(venues_path)) {
            if (v.flagged) flagged.insert(v.venue);
        }
    }
    const auto role_rows =
        traj::role_curves(data.faculty, data.pubs, flagged, strata, d.census_year);
    traj::tables::write_role_curves(out_dir + "/role_curves.csv", role_rows, year_base);
    note(out_dir + "/curves.csv", curves.strata.size());
    note(out_dir + "/role_curves.csv", role_rows.size());

    json cfg = data_meta(d);
    cfg.update(model_meta(mo, model));
    cfg["strata"] = strata;
    cfg["venues"] = venues_path.empty() ? "(none: no venues excluded)" : venues_path;
    cfg["year_base"] = year_base;
    write_meta(out_dir, "curves", cfg);
    return 0;
}

int run_medians(const DataOpts& d, const ModelOpts& mo, const std::string& out_dir,
                const std::string& window_name) {
    const traj::AdjustmentModel model = resolve_model(mo);
    const Loaded data = load_and_build(d, model);
    const traj::ProductionWindow window = window_name == "lifetime"
                                              ? traj::ProductionWindow::Lifetime
                                              : traj::ProductionWindow::FirstDecade;
    const auto rows = traj::institution_medians(data.faculty, data.adjusted, window);
    traj::tables::write_medians(out_dir + "/medians.csv", rows);
    note(out_dir + "/medians.csv", rows.size());

    json cfg = data_meta(d);
    cfg.update(model_meta(mo, model));
    cfg["window"] = window_name;
    write_meta(out_dir, "medians", cfg);
    return 0;
}

struct SimulateOpts {
    traj::GeneratorSpec spec;
    std::string noise = "poisson";
    double canonical_weight = 0.2;
    double linear_weight = 0.0;
    std::vector<double> quadrant_weights{0.2, 0.2, 0.2, 0.2};
    double slope_min = 0.2, slope_max = 0.8;
    double b_min = 2.0, b_max = 8.0;
    int career_min = 10, career_max = 25;
    int coauthors_min = 1, coauthors_max = 4;
};

int run_simulate(SimulateOpts& so, const ModelOpts& mo, const std::string& out_dir) {
    traj::GeneratorSpec& spec = so.spec;
    spec.count_noise = so.noise == "none"     ? traj::CountNoise::None
                       : so.noise == "negbin" ? traj::CountNoise::NegBin
                                              : traj::CountNoise::Poisson;
    spec.theta.canonical_weight = so.canonical_weight;
    spec.theta.linear_weight = so.linear_weight;
    if (so.quadrant_weights.size() != 4) {
        throw std::invalid_argument("--quadrant-weights needs exactly four values");
    }
    std::copy(so.quadrant_weights.begin(), so.quadrant_weights.end(),
              spec.theta.quadrant_weights.begin());
    spec.theta.slope_range = {so.slope_min, so.slope_max};
    spec.theta.b_range = {so.b_min, so.b_max};
    spec.career_length_range = {so.career_min, so.career_max};
    spec.coauthors_range = {so.coauthors_min, so.coauthors_max};

    const traj::AdjustmentModel model = resolve_model(mo);
    const traj::SyntheticCohort cohort = traj::generate_cohort(spec, model);
    traj::save_cohort(out_dir, cohort);
    note(out_dir + "/faculty.jsonl", cohort.faculty.size());
    note(out_dir + "/publications.jsonl", cohort.publications.size());

    json cfg = model_meta(mo, model);
    cfg["n_faculty"] = spec.n_faculty;
    cfg["career_min"] = so.career_min;
    cfg["career_max"] = so.career_max;
    cfg["noise"] = so.noise;
    cfg["zeta"] = spec.zeta;
    cfg["thinning"] = spec.apply_coverage_thinning;
    cfg["canonical_weight"] = so.canonical_weight;
    cfg["linear_weight"] = so.linear_weight;
    cfg["quadrant_weights"] = so.quadrant_weights;
    cfg["slope_range"] = {so.slope_min, so.slope_max};
    cfg["b_range"] = {so.b_min, so.b_max};
    cfg["integer_theta"] = spec.theta.integer_theta;
    cfg["min_rate"] = spec.theta.min_rate;
    cfg["frac_declining"] = spec.roles.frac_declining;
    cfg["p_first_high"] = spec.roles.p_first_high;
    cfg["p_first_low"] = spec.roles.p_first_low;
    cfg["switch_year"] = spec.roles.switch_year;
    cfg["n_venues"] = spec.n_venues;
    cfg["frac_alpha_venues"] = spec.frac_alpha_venues;
    cfg["frac_single_author"] = spec.frac_single_author;
    cfg["coauthors_range"] = {so.coauthors_min, so.coauthors_max};
    cfg["census_year"] = spec.census_year;
    cfg["seed"] = spec.seed;
    write_meta(out_dir, "simulate", cfg);
    return 0;
}

int run_report(const std::string& dir, std::string out_path) {
    if (out_path.empty()) out_path = dir + "/report.json";
    json report;
    json artifacts = json::object();
    bool any = false;

    const auto exists = [&](const std::string& name) {
        return std::filesystem::exists(dir + "/" + name);
    };

    if (exists("fits.csv")) {
        const auto rows = traj::tables::read_fits(dir + "/fits.csv");
        int piecewise = 0;
        for (const auto& r : rows) piecewise += r.chosen_model == "piecewise" ? 1 : 0;
        artifacts["fits"] = {{"rows", rows.size()}, {"piecewise_chosen", piecewise}};
        any = true;
    }
    if (exists("countfits.csv")) {
        const auto rows = traj::tables::read_count_fits(dir + "/countfits.csv");
        int converged = 0;
        for (const auto& r : rows) converged += r.converged ? 1 : 0;
        artifacts["countfits"] = {{"rows", rows.size()}, {"converged", converged}};
        any = true;
    }
    if (exists("selection.csv")) {
        const auto rows = traj::tables::read_selection(dir + "/selection.csv");
        int piecewise = 0;
        for (const auto& r : rows) piecewise += r.chosen == "piecewise" ? 1 : 0;
        artifacts["selection"] = {{"rows", rows.size()}, {"piecewise_chosen", piecewise}};
        any = true;
    }
    if (exists("stability.csv")) {
        const auto rows = traj::tables::read_stability(dir + "/stability.csv");
        int stable = 0;
        for (const auto& r : rows) stable += r.stable ? 1 : 0;
        artifacts["stability"] = {{"rows", rows.size()}, {"stable", stable}};
        any = true;
    }
    if (exists("population.json")) {
        std::ifstream in(dir + "/population.json", std::ios::binary);
        artifacts["population"] = json::parse(in);
        any = true;
    }
    if (exists("gini.csv")) {
        const traj::csv::Table t = traj::csv::read_file(dir + "/gini.csv");
        artifacts["gini"] = json::array();
        for (const auto& row : t.rows) {
            artifacts["gini"].push_back({{"decade", row[0]}, {"n_faculty", row[1]}, {"gini", row[2]}});
        }
        any = true;
    }
    if (exists("venues.csv")) {
        const auto rows = traj::tables::read_venues(dir + "/venues.csv");
        json flagged = json::array();
        for (const auto& v : rows) {
            if (v.flagged) flagged.push_back(v.venue);
        }
        artifacts["venues"] = {{"rows", rows.size()}, {"flagged", flagged}};
        any = true;
    }
    if (exists("ensemble.csv")) {
        const traj::csv::Table t = traj::csv::read_file(dir + "/ensemble.csv");
        json rows = json::object();
        for (const auto& row : t.rows) rows[row[0]] = {{"count", row[1]}, {"mass", row[2]}};
        artifacts["ensemble"] = rows;
        any = true;
    }
    if (exists("transitions.csv.summary.json")) {
        std::ifstream in(dir + "/transitions.csv.summary.json", std::ios::binary);
        artifacts["transitions"] = json::parse(in);
        any = true;
    }

    if (!any) {
        throw std::runtime_error("no known artifacts found under: " + dir);
    }
    report["source_dir"] = dir;
    report["tool_version"] = kVersion;
    report["artifacts"] = std::move(artifacts);
    write_json_file(out_path, report);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

// Flat JSON config: keys are long option names without dashes; explicit flags
// win because config values are only appended for absent options.
void apply_config_file(std::vector<std::string>& args) {
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                       args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (config_path.empty()) return;

    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file: " + config_path);
    json j = json::parse(in);
    if (!j.is_object()) throw std::runtime_error("config must be a flat JSON object");
    for (const auto& [key, value] : j.items()) {
        const std::string flag = "--" + key;
        bool present = false;
        for (const auto& a : args) {
            if (a == flag || a.rfind(flag + "=", 0) == 0) {
                present = true;
                break;
            }
        }
        if (present) continue;
        args.push_back(flag);
        args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Career-trajectory analysis toolkit", "trajkit"};
    app.require_subcommand(1);

    int exit_code = 0;

    // calibrate
    auto* calibrate = app.add_subcommand("calibrate", "Fit the coverage form from benchmark pairs");
    std::string cal_benchmarks, cal_out;
    ModelOpts cal_model;
    calibrate->add_option("--benchmarks", cal_benchmarks, "CSV of year,dblp_count,cv_count")
        ->required();
    calibrate->add_option("--out-dir", cal_out, "Output directory")->required();
    add_model_opts(calibrate, cal_model);
    calibrate->callback([&] {
        exit_code = run_calibrate(cal_benchmarks, prepare_out_dir(cal_out), cal_model);
    });

    // fit
    auto* fit = app.add_subcommand("fit", "Fit per-career trend models");
    DataOpts fit_data;
    ModelOpts fit_model;
    std::string fit_out, fit_family = "ls", fit_criterion = "aicc";
    add_data_opts(fit, fit_data, true);
    add_model_opts(fit, fit_model);
    fit->add_option("--out-dir", fit_out, "Output directory")->required();
    fit->add_option("--family", fit_family, "Model family")
        ->check(CLI::IsMember({"ls", "poisson", "negbin"}));
    fit->add_option("--criterion", fit_criterion, "Selection criterion for the ls family")
        ->check(CLI::IsMember({"aic", "aicc", "bic"}));
    fit->callback([&] {
        exit_code = run_fit(fit_data, fit_model, prepare_out_dir(fit_out), fit_family,
                            fit_criterion);
    });

    // select
    auto* select = app.add_subcommand("select", "Score line vs kinked trend per career");
    DataOpts sel_data;
    ModelOpts sel_model;
    std::string sel_out, sel_criterion = "aicc";
    add_data_opts(select, sel_data, true);
    add_model_opts(select, sel_model);
    select->add_option("--out-dir", sel_out, "Output directory")->required();
    select->add_option("--criterion", sel_criterion, "Selection criterion")
        ->check(CLI::IsMember({"aic", "aicc", "bic"}));
    select->callback([&] {
        exit_code = run_select(sel_data, sel_model, prepare_out_dir(sel_out), sel_criterion);
    });

    // classify
    auto* classify = app.add_subcommand("classify", "Quadrants, peaks, and population summaries");
    DataOpts cls_data;
    ModelOpts cls_model;
    std::string cls_out, cls_fits, cls_stability;
    double cls_cap = 10.0;
    add_data_opts(classify, cls_data, true);
    add_model_opts(classify, cls_model);
    classify->add_option("--out-dir", cls_out, "Output directory")->required();
    classify->add_option("--fits", cls_fits, "fits.csv from a fit run")->required();
    classify->add_option("--stability", cls_stability, "stability.csv from a stability run");
    classify->add_option("--tstar-cap", cls_cap, "Latest change point the canonical class allows");
    classify->callback([&] {
        exit_code = run_classify(cls_data, cls_model, prepare_out_dir(cls_out), cls_fits,
                                 cls_stability, cls_cap);
    });

    // stability
    auto* stability = app.add_subcommand("stability", "Per-career noise-perturbation verdicts");
    DataOpts st_data;
    ModelOpts st_model;
    std::string st_out;
    traj::NoiseSpec st_spec;
    double st_threshold = 0.75;
    int st_threads = 1;
    add_data_opts(stability, st_data, true);
    add_model_opts(stability, st_model);
    stability->add_option("--out-dir", st_out, "Output directory")->required();
    stability->add_option("--seed", st_spec.seed, "RNG seed")->required();
    stability->add_option("--sigma", st_spec.sigma, "Year-noise standard deviation");
    stability->add_option("--trials", st_spec.trials, "Perturbation trials per career");
    stability->add_option("--stability-threshold", st_threshold, "Modal-fraction threshold");
    stability->add_option("--threads", st_threads, "Worker threads");
    stability->callback([&] {
        exit_code = run_stability(st_data, st_model, prepare_out_dir(st_out), st_spec,
                                  st_threshold, st_threads);
    });

    // ensemble
    auto* ensemble = app.add_subcommand("ensemble", "Pooled noise-added trial distribution");
    DataOpts en_data;
    ModelOpts en_model;
    std::string en_out, en_criterion = "aicc";
    traj::NoiseSpec en_spec;
    double en_cap = 10.0;
    int en_threads = 1;
    add_data_opts(ensemble, en_data, true);
    add_model_opts(ensemble, en_model);
    ensemble->add_option("--out-dir", en_out, "Output directory")->required();
    ensemble->add_option("--seed", en_spec.seed, "RNG seed")->required();
    ensemble->add_option("--sigma", en_spec.sigma, "Year-noise standard deviation");
    ensemble->add_option("--trials", en_spec.trials, "Perturbation trials per career");
    ensemble->add_option("--criterion", en_criterion, "Selection criterion")
        ->check(CLI::IsMember({"aic", "aicc", "bic"}));
    ensemble->add_option("--tstar-cap", en_cap, "Canonical change-point cap");
    ensemble->add_option("--threads", en_threads, "Worker threads");
    ensemble->callback([&] {
        exit_code = run_ensemble(en_data, en_model, prepare_out_dir(en_out), en_spec,
                                 en_criterion, en_cap, en_threads);
    });

    // gini
    auto* gini = app.add_subcommand("gini", "Per-decade Lorenz curves and Gini coefficients");
    DataOpts gi_data;
    ModelOpts gi_model;
    std::string gi_out;
    int gi_window = 5;
    add_data_opts(gini, gi_data, false);
    add_model_opts(gini, gi_model);
    gini->add_option("--out-dir", gi_out, "Output directory")->required();
    gini->add_option("--window-years", gi_window,
                     "Early-career window in years; 0 means whole career");
    gini->callback([&] {
        exit_code = run_gini(gi_data, gi_model, prepare_out_dir(gi_out), gi_window);
    });

    // authorship
    auto* authorship =
        app.add_subcommand("authorship", "Alphabetized-venue flags and role transitions");
    DataOpts au_data;
    std::string au_out, au_mode = "auto";
    double au_alpha = 0.05, au_ratio = 2.0;
    std::uint64_t au_seed = 0;
    authorship->add_option("--faculty", au_data.faculty_path, "Faculty records")->required();
    authorship->add_option("--pubs", au_data.pubs_path, "Publication records")->required();
    authorship->add_option("--census-year", au_data.census_year, "End of the observation window");
    authorship->add_option("--out-dir", au_out, "Output directory")->required();
    authorship->add_option("--alpha-level", au_alpha, "Significance level for venue flags");
    authorship->add_option("--ratio-threshold", au_ratio, "Required multiple of expected count");
    authorship->add_option("--mode", au_mode, "Tail computation")
        ->check(CLI::IsMember({"auto", "exact", "montecarlo"}));
    authorship->add_option("--seed", au_seed, "RNG seed for Monte-Carlo tails");
    authorship->callback([&] {
        exit_code = run_authorship(au_data, prepare_out_dir(au_out), au_alpha, au_ratio, au_mode,
                                   au_seed);
    });

    // curves
    auto* curves = app.add_subcommand("curves", "Prestige-stratified productivity and role curves");
    DataOpts cu_data;
    ModelOpts cu_model;
    std::string cu_out, cu_venues;
    std::vector<double> cu_strata{0.2, 0.4, 0.6, 0.8};
    int cu_year_base = 0;
    add_data_opts(curves, cu_data, false);
    add_model_opts(curves, cu_model);
    curves->add_option("--out-dir", cu_out, "Output directory")->required();
    curves->add_option("--strata", cu_strata, "Prestige quantile edges in (0,1)")->delimiter(',');
    curves->add_option("--venues", cu_venues, "venues.csv whose flagged venues are excluded");
    curves->add_option("--year-base", cu_year_base, "Career-year origin in emitted tables (0 or 1)");
    curves->callback([&] {
        exit_code = run_curves(cu_data, cu_model, prepare_out_dir(cu_out), cu_strata, cu_venues,
                               cu_year_base);
    });

    // medians
    auto* medians = app.add_subcommand("medians", "Per-institution median production");
    DataOpts me_data;
    ModelOpts me_model;
    std::string me_out, me_window = "first_decade";
    add_data_opts(medians, me_data, false);
    add_model_opts(medians, me_model);
    medians->add_option("--out-dir", me_out, "Output directory")->required();
    medians->add_option("--window", me_window, "Production window")
        ->check(CLI::IsMember({"first_decade", "lifetime"}));
    medians->callback([&] {
        exit_code = run_medians(me_data, me_model, prepare_out_dir(me_out), me_window);
    });

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic cohort with ground truth");
    SimulateOpts sim;
    ModelOpts sim_model;
    std::string sim_out;
    simulate->add_option("--out-dir", sim_out, "Output directory")->required();
    simulate->add_option("--seed", sim.spec.seed, "RNG seed")->required();
    simulate->add_option("--n-faculty", sim.spec.n_faculty, "Cohort size");
    simulate->add_option("--career-min", sim.career_min, "Shortest career length");
    simulate->add_option("--career-max", sim.career_max, "Longest career length");
    simulate->add_option("--noise", sim.noise, "Count noise law")
        ->check(CLI::IsMember({"none", "poisson", "negbin"}));
    simulate->add_option("--zeta", sim.spec.zeta, "NegBin dispersion");
    simulate->add_option("--thinning", sim.spec.apply_coverage_thinning,
                         "Emit raw-scale counts thinned by coverage (true/false)");
    simulate->add_option("--canonical-weight", sim.canonical_weight, "Canonical-octant mass");
    simulate->add_option("--linear-weight", sim.linear_weight, "Pure-line mass");
    simulate->add_option("--quadrant-weights", sim.quadrant_weights, "Four quadrant masses")
        ->delimiter(',');
    simulate->add_option("--slope-min", sim.slope_min, "Slope magnitude lower bound");
    simulate->add_option("--slope-max", sim.slope_max, "Slope magnitude upper bound");
    simulate->add_option("--b-min", sim.b_min, "Intercept lower bound");
    simulate->add_option("--b-max", sim.b_max, "Intercept upper bound");
    simulate->add_option("--integer-theta", sim.spec.theta.integer_theta,
                         "Integer-valued trend parameters (true/false)");
    simulate->add_option("--min-rate", sim.spec.theta.min_rate,
                         "Lift intercepts until the trend clears this floor; negative disables");
    simulate->add_option("--frac-declining", sim.spec.roles.frac_declining,
                         "Share of faculty whose first-author rate declines");
    simulate->add_option("--p-first-high", sim.spec.roles.p_first_high, "High first-author rate");
    simulate->add_option("--p-first-low", sim.spec.roles.p_first_low, "Low first-author rate");
    simulate->add_option("--switch-year", sim.spec.roles.switch_year, "Career year of the switch");
    simulate->add_option("--n-venues", sim.spec.n_venues, "Venue pool size");
    simulate->add_option("--frac-alpha-venues", sim.spec.frac_alpha_venues,
                         "Share of venues that order authors alphabetically");
    simulate->add_option("--frac-single", sim.spec.frac_single_author,
                         "Share of single-author papers");
    simulate->add_option("--coauthors-min", sim.coauthors_min, "Fewest coauthors");
    simulate->add_option("--coauthors-max", sim.coauthors_max, "Most coauthors");
    simulate->add_option("--census-year", sim.spec.census_year, "Careers end at this year");
    add_model_opts(simulate, sim_model);
    simulate->callback(
        [&] { exit_code = run_simulate(sim, sim_model, prepare_out_dir(sim_out)); });

    // report
    auto* report = app.add_subcommand("report", "Summarize artifacts already on disk");
    std::string rp_dir, rp_out;
    report->add_option("--dir", rp_dir, "Directory holding earlier outputs")->required();
    report->add_option("--out", rp_out, "Report path (default <dir>/report.json)");
    report->callback([&] { exit_code = run_report(rp_dir, rp_out); });

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        apply_config_file(args);
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return exit_code;
}
