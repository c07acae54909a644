#include "traj/calibrate.hpp"

#include <fstream>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "traj/csv.hpp"
#include "traj/errors.hpp"
#include "traj/stats.hpp"

namespace traj {

AdjustmentModel AdjustmentModel::defaults() {
    AdjustmentModel m;
    m.m_alpha = 0.010588;
    m.b_alpha = -20.434804;
    m.m_beta = 0.131873;
    m.b_beta = -258.286620;
    m.reference_year = 2011;
    m.normalize_growth = true;
    m.year_min = 1970;
    m.year_max = 2015;
    return m;
}

AdjustmentModel AdjustmentModel::identity() {
    AdjustmentModel m;
    m.m_alpha = 0.0;
    m.b_alpha = 1.0;
    m.m_beta = 0.0;
    m.b_beta = 1.0;
    m.reference_year = 2011;
    m.normalize_growth = true;
    m.year_min = -1000000;
    m.year_max = 1000000;
    return m;
}

CoverageFit fit_coverage(const std::vector<BenchmarkPair>& pairs) {
    std::map<int, std::pair<long, long>> per_year;
    for (const auto& p : pairs) {
        if (p.cv_count <= 0) throw std::invalid_argument("fit_coverage: cv_count must be positive");
        if (p.dblp_count < 0) throw std::invalid_argument("fit_coverage: dblp_count must be non-negative");
        auto& acc = per_year[p.year];
        acc.first += p.dblp_count;
        acc.second += p.cv_count;
    }
    if (per_year.size() < 2) {
        throw DegenerateFit("fit_coverage: need benchmark pairs from at least two distinct years");
    }
    std::vector<double> years, ratios;
    for (const auto& [year, acc] : per_year) {
        years.push_back(static_cast<double>(year));
        ratios.push_back(static_cast<double>(acc.first) / static_cast<double>(acc.second));
    }
    OlsFit fit = ols_fit(years, ratios);
    return CoverageFit{fit.slope, fit.intercept, fit.r_squared};
}

namespace {

void check_domain(const AdjustmentModel& model, int year) {
    if (year < model.year_min || year > model.year_max) {
        throw std::domain_error("year " + std::to_string(year) + " outside calibration domain [" +
                                std::to_string(model.year_min) + ", " + std::to_string(model.year_max) + "]");
    }
}

double growth_form(const AdjustmentModel& model, int year) {
    const double g = model.m_beta * year + model.b_beta;
    if (g <= 0.0) {
        throw std::domain_error("growth form nonpositive at year " + std::to_string(year));
    }
    return g;
}

template <typename Fn>
CareerSeries map_counts(const CareerSeries& series, Fn&& factor_at) {
    CareerSeries out = series;
    for (std::size_t t = 0; t < out.counts.size(); ++t) {
        out.counts[t] *= factor_at(series.t0 + static_cast<int>(t));
    }
    return out;
}

}  // namespace

double coverage_fraction(const AdjustmentModel& model, int year) {
    check_domain(model, year);
    const double v = model.m_alpha * year + model.b_alpha;
    if (v <= 0.0 || v > 1.05) {
        throw std::domain_error("coverage fraction " + std::to_string(v) + " at year " +
                                std::to_string(year) + " outside (0, 1.05]");
    }
    return v;
}

double growth_factor(const AdjustmentModel& model, int year) {
    check_domain(model, year);
    const double g = growth_form(model, year);
    if (model.normalize_growth) return growth_form(model, model.reference_year) / g;
    return 1.0 / g;
}

CareerSeries dblp_to_cv(const AdjustmentModel& model, const CareerSeries& series) {
    return map_counts(series, [&](int year) { return 1.0 / coverage_fraction(model, year); });
}

CareerSeries cv_to_dblp(const AdjustmentModel& model, const CareerSeries& series) {
    return map_counts(series, [&](int year) { return coverage_fraction(model, year); });
}

CareerSeries cv_to_2011(const AdjustmentModel& model, const CareerSeries& series) {
    return map_counts(series, [&](int year) { return growth_factor(model, year); });
}

CareerSeries y2011_to_cv(const AdjustmentModel& model, const CareerSeries& series) {
    return map_counts(series, [&](int year) { return 1.0 / growth_factor(model, year); });
}

CareerSeries adjust_series(const AdjustmentModel& model, const CareerSeries& series, Source source) {
    if (source == Source::Database) return cv_to_2011(model, dblp_to_cv(model, series));
    return cv_to_2011(model, series);
}

std::string model_to_json(const AdjustmentModel& model) {
    nlohmann::json obj;
    obj["m_alpha"] = model.m_alpha;
    obj["b_alpha"] = model.b_alpha;
    obj["m_beta"] = model.m_beta;
    obj["b_beta"] = model.b_beta;
    obj["reference_year"] = model.reference_year;
    obj["normalize_growth"] = model.normalize_growth;
    obj["year_min"] = model.year_min;
    obj["year_max"] = model.year_max;
    return obj.dump(2);
}

AdjustmentModel model_from_json(const std::string& text) {
    nlohmann::json obj;
    try {
        obj = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("adjustment model: ") + e.what());
    }
    AdjustmentModel m;
    try {
        m.m_alpha = obj.at("m_alpha").get<double>();
        m.b_alpha = obj.at("b_alpha").get<double>();
        m.m_beta = obj.at("m_beta").get<double>();
        m.b_beta = obj.at("b_beta").get<double>();
        m.reference_year = obj.value("reference_year", 2011);
        m.normalize_growth = obj.value("normalize_growth", true);
        m.year_min = obj.value("year_min", 1970);
        m.year_max = obj.value("year_max", 2015);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("adjustment model: ") + e.what());
    }
    return m;
}

void save_model(const std::string& path, const AdjustmentModel& model) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write file: " + path);
    out << model_to_json(model) << "\n";
}

AdjustmentModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return model_from_json(text);
}

std::vector<BenchmarkPair> load_benchmarks(const std::string& path) {
    csv::Table t = csv::read_file(path);
    const int c_year = t.column("year");
    const int c_dblp = t.column("dblp_count");
    const int c_cv = t.column("cv_count");
    if (c_year < 0 || c_dblp < 0 || c_cv < 0) {
        throw ParseError(path + ": benchmark file needs columns year, dblp_count, cv_count");
    }
    std::vector<BenchmarkPair> pairs;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        const std::string ctx = path + ":" + std::to_string(i + 2) + ": ";
        BenchmarkPair p;
        try {
            p.year = std::stoi(row[c_year]);
            p.dblp_count = std::stol(row[c_dblp]);
            p.cv_count = std::stol(row[c_cv]);
        } catch (...) {
            throw ParseError(ctx + "bad numeric value");
        }
        if (p.cv_count <= 0) throw ParseError(ctx + "cv_count must be positive");
        if (p.dblp_count < 0) throw ParseError(ctx + "dblp_count must be non-negative");
        pairs.push_back(p);
    }
    return pairs;
}

}  // namespace traj
