#include "traj/synthgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "traj/authorship.hpp"
#include "traj/csv.hpp"
#include "traj/ingest.hpp"
#include "traj/piecewise.hpp"
#include "traj/rng.hpp"

namespace traj {
namespace {

enum ThetaClass { kCanonical = 0, kLinear, kQ1, kQ2, kQ3, kQ4, kClassCount };

void validate(const GeneratorSpec& spec) {
    if (spec.n_faculty < 1) throw std::invalid_argument("generate_cohort: n_faculty must be >= 1");
    const auto [tlo, thi] = spec.career_length_range;
    if (tlo < 5 || thi < tlo) {
        throw std::invalid_argument("generate_cohort: career_length_range must satisfy 5 <= min <= max");
    }
    const ThetaMixture& mix = spec.theta;
    double wsum = mix.canonical_weight + mix.linear_weight;
    for (double w : mix.quadrant_weights) wsum += w;
    if (mix.canonical_weight < 0 || mix.linear_weight < 0 ||
        *std::min_element(mix.quadrant_weights.begin(), mix.quadrant_weights.end()) < 0 || wsum <= 0) {
        throw std::invalid_argument("generate_cohort: mixture weights must be non-negative and not all zero");
    }
    if (mix.slope_range.first <= 0 || mix.slope_range.second < mix.slope_range.first) {
        throw std::invalid_argument("generate_cohort: bad slope_range");
    }
    if (mix.b_range.second < mix.b_range.first) throw std::invalid_argument("generate_cohort: bad b_range");
    if (spec.count_noise == CountNoise::NegBin && !(spec.zeta > 0)) {
        throw std::invalid_argument("generate_cohort: dispersion must be positive");
    }
    if (spec.frac_alpha_venues < 0 || spec.frac_alpha_venues > 1 || spec.frac_single_author < 0 ||
        spec.frac_single_author > 1 || spec.roles.frac_declining < 0 || spec.roles.frac_declining > 1) {
        throw std::invalid_argument("generate_cohort: fractions must lie in [0, 1]");
    }
    if (spec.n_venues < 1) throw std::invalid_argument("generate_cohort: n_venues must be >= 1");
    if (spec.coauthors_range.first < 1 || spec.coauthors_range.second < spec.coauthors_range.first ||
        spec.coauthors_range.second > 19) {
        throw std::invalid_argument("generate_cohort: coauthors_range must lie in [1, 19]");
    }
    if (spec.roles.switch_year < 1) throw std::invalid_argument("generate_cohort: switch_year must be >= 1");
}

// Exact class counts from weights via largest remainder.
std::vector<int> allocate_classes(const ThetaMixture& mix, int n) {
    std::array<double, kClassCount> w{mix.canonical_weight, mix.linear_weight,
                                      mix.quadrant_weights[0], mix.quadrant_weights[1],
                                      mix.quadrant_weights[2], mix.quadrant_weights[3]};
    const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
    std::array<int, kClassCount> counts{};
    std::array<double, kClassCount> frac{};
    int assigned = 0;
    for (int c = 0; c < kClassCount; ++c) {
        const double share = w[static_cast<std::size_t>(c)] / wsum * n;
        counts[static_cast<std::size_t>(c)] = static_cast<int>(std::floor(share));
        frac[static_cast<std::size_t>(c)] = share - counts[static_cast<std::size_t>(c)];
        assigned += counts[static_cast<std::size_t>(c)];
    }
    std::array<int, kClassCount> order{0, 1, 2, 3, 4, 5};
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (frac[static_cast<std::size_t>(a)] != frac[static_cast<std::size_t>(b)]) {
            return frac[static_cast<std::size_t>(a)] > frac[static_cast<std::size_t>(b)];
        }
        return a < b;
    });
    for (int r = 0; assigned < n; ++r, ++assigned) {
        counts[static_cast<std::size_t>(order[static_cast<std::size_t>(r % kClassCount)])] += 1;
    }
    std::vector<int> classes;
    classes.reserve(static_cast<std::size_t>(n));
    for (int c = 0; c < kClassCount; ++c) {
        classes.insert(classes.end(), static_cast<std::size_t>(counts[static_cast<std::size_t>(c)]), c);
    }
    return classes;
}

double uniform_in(rng::Stream& s, double lo, double hi) { return lo + (hi - lo) * s.next_unit(); }

struct Theta {
    double m1 = 0, m2 = 0, b = 0, t_star = 0;
};

Theta draw_theta(rng::Stream& s, int cls, int career_length, const ThetaMixture& mix) {
    const auto [slo, shi] = mix.slope_range;
    const double t_lo = 2.0, t_hi = static_cast<double>(career_length - 3);
    Theta th;
    if (mix.integer_theta) {
        auto pick_mag = [&]() { return 1.0 + static_cast<double>(s.next_below(2)); };
        th.b = std::floor(uniform_in(s, mix.b_range.first, mix.b_range.second + 1.0));
        th.t_star = t_lo + static_cast<double>(s.next_below(static_cast<std::uint64_t>(t_hi - t_lo) + 1));
        switch (cls) {
            case kCanonical: th.m1 = 2.0; th.m2 = -1.0; break;
            case kLinear: th.m1 = th.m2 = (s.next_bernoulli(0.75) ? 1.0 : -1.0); break;
            case kQ1: th.m1 = pick_mag(); th.m2 = 3.0 - th.m1; break;
            case kQ2: th.m1 = -pick_mag(); th.m2 = pick_mag(); break;
            case kQ3: th.m1 = -pick_mag(); th.m2 = -(3.0 + th.m1); break;
            default: th.m1 = 1.0; th.m2 = -2.0; break;
        }
        return th;
    }
    th.b = uniform_in(s, mix.b_range.first, mix.b_range.second);
    th.t_star = uniform_in(s, t_lo, t_hi);
    auto mag = [&]() { return uniform_in(s, slo, shi); };
    // Same-sign quadrants keep the slopes separated so the change point
    // stays identifiable in the noise-free limit.
    const double min_gap = 0.1 * (shi - slo);
    auto mag_apart = [&](double other) {
        double m = mag();
        while (std::abs(m - other) < min_gap) m = mag();
        return m;
    };
    switch (cls) {
        case kCanonical:
            th.m1 = std::max(0.25, mag());
            th.m2 = -th.m1 * uniform_in(s, 0.25, 0.8);
            th.t_star = uniform_in(s, t_lo, std::min(8.0, t_hi));
            break;
        case kLinear:
            th.m1 = th.m2 = (s.next_bernoulli(0.75) ? 1.0 : -1.0) * mag();
            th.t_star = 0.5 * (t_lo + t_hi);
            break;
        case kQ1: th.m1 = mag(); th.m2 = mag_apart(th.m1); break;
        case kQ2: th.m1 = -mag(); th.m2 = mag(); break;
        case kQ3: th.m1 = -mag(); th.m2 = -mag_apart(-th.m1); break;
        default:
            th.m1 = mag();
            th.m2 = -th.m1 * uniform_in(s, 1.25, 2.5);
            break;
    }
    return th;
}

std::string gen_surname(rng::Stream& s) {
    const int len = 5 + static_cast<int>(s.next_below(4));
    std::string name;
    name.push_back(static_cast<char>('A' + s.next_below(26)));
    for (int i = 1; i < len; ++i) name.push_back(static_cast<char>('a' + s.next_below(26)));
    return name;
}

}  // namespace

SyntheticCohort generate_cohort(const GeneratorSpec& spec, const AdjustmentModel& model) {
    validate(spec);
    SyntheticCohort cohort;
    const std::vector<int> classes = allocate_classes(spec.theta, spec.n_faculty);
    const int n_declining = static_cast<int>(std::llround(spec.roles.frac_declining * spec.n_faculty));
    const int n_alpha_venues =
        static_cast<int>(std::llround(spec.frac_alpha_venues * spec.n_venues));

    std::vector<std::string> venues;
    for (int v = 0; v < spec.n_venues; ++v) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "V%03d", v);
        venues.emplace_back(buf);
    }

    for (int i = 0; i < spec.n_faculty; ++i) {
        char idbuf[16];
        std::snprintf(idbuf, sizeof idbuf, "F%05d", i);
        const std::string fid = idbuf;

        rng::Stream fstream(rng::derive(rng::derive(spec.seed, "faculty"), fid));
        const auto [tlo, thi] = spec.career_length_range;
        const int career = tlo + static_cast<int>(fstream.next_below(
                                     static_cast<std::uint64_t>(thi - tlo) + 1));
        const int t0 = spec.census_year - career + 1;

        Theta th = draw_theta(fstream, classes[static_cast<std::size_t>(i)], career, spec.theta);
        if (spec.theta.min_rate >= 0.0) {
            double fmin = std::numeric_limits<double>::infinity();
            for (int t = 0; t < career; ++t) {
                fmin = std::min(fmin, piecewise_value(th.m1, th.m2, th.b, th.t_star, t));
            }
            if (fmin < spec.theta.min_rate) {
                double lift = spec.theta.min_rate - fmin;
                if (spec.theta.integer_theta) lift = std::ceil(lift);
                th.b += lift;
            }
        }

        FacultyRecord fac;
        fac.faculty_id = fid;
        fac.hire_year = t0;
        fac.doctoral_rank = 1.0 + static_cast<double>(fstream.next_below(100));
        fac.employer_rank = 1.0 + static_cast<double>(fstream.next_below(100));
        fac.is_private = fstream.next_bernoulli(0.3);
        fac.gender = fstream.next_bernoulli(0.5) ? Gender::Male : Gender::Female;
        fac.had_postdoc = fstream.next_bernoulli(0.5);
        fac.source = spec.apply_coverage_thinning ? Source::Database : Source::Cv;
        const std::string focal_name = gen_surname(fstream) + ", " +
                                       std::string(1, static_cast<char>('A' + fstream.next_below(26))) + ".";

        TruthRow truth;
        truth.faculty_id = fid;
        truth.m1 = th.m1;
        truth.m2 = th.m2;
        truth.b = th.b;
        truth.t_star = th.t_star;
        truth.quadrant = classify_quadrant(th.m1, th.m2);
        truth.canonical = is_canonical(PiecewiseParams{th.m1, th.m2, th.b, th.t_star, 0.0}, 10.0);
        truth.linear = classes[static_cast<std::size_t>(i)] == kLinear;
        truth.declining_role = i < n_declining;
        truth.t0 = t0;
        truth.career_length = career;

        for (int t = 0; t < career; ++t) {
            const int year = t0 + t;
            const double f = piecewise_value(th.m1, th.m2, th.b, th.t_star, t);
            const double rate = std::max(0.0, f);
            truth.rate_unclipped.push_back(f);
            truth.rate.push_back(rate);

            double mean = rate;
            if (spec.apply_coverage_thinning) mean /= growth_factor(model, year);

            rng::Stream cstream(rng::derive(
                rng::derive(rng::derive(spec.seed, "counts"), fid), static_cast<std::uint64_t>(t)));
            long latent = 0;
            switch (spec.count_noise) {
                case CountNoise::None: latent = std::llround(mean); break;
                case CountNoise::Poisson: latent = cstream.next_poisson(mean); break;
                case CountNoise::NegBin: latent = cstream.next_negbin(mean, spec.zeta); break;
            }
            truth.latent_counts.push_back(latent);

            long observed = latent;
            if (spec.apply_coverage_thinning) {
                const double cov = coverage_fraction(model, year);
                rng::Stream tstream(rng::derive(
                    rng::derive(rng::derive(spec.seed, "thin"), fid), static_cast<std::uint64_t>(t)));
                observed = 0;
                for (long j = 0; j < latent; ++j) observed += tstream.next_bernoulli(cov) ? 1 : 0;
            }
            truth.observed_counts.push_back(observed);

            const bool late = t >= spec.roles.switch_year;
            const bool declining = truth.declining_role;
            const double p_first = (declining != late) ? spec.roles.p_first_high : spec.roles.p_first_low;

            for (long j = 0; j < observed; ++j) {
                rng::Stream pstream(rng::derive(
                    rng::derive(rng::derive(rng::derive(spec.seed, "pub"), fid),
                                static_cast<std::uint64_t>(t)),
                    static_cast<std::uint64_t>(j)));
                PublicationRecord pub;
                pub.pub_id = fid + "-" + std::to_string(t) + "-" + std::to_string(j);
                pub.faculty_id = fid;
                pub.year = year;
                const int venue_idx = static_cast<int>(pstream.next_below(
                    static_cast<std::uint64_t>(spec.n_venues)));
                pub.venue = venues[static_cast<std::size_t>(venue_idx)];

                const bool single = pstream.next_bernoulli(spec.frac_single_author);
                if (single) {
                    pub.authors.push_back(focal_name);
                    pub.focal_index = 0;
                } else {
                    const auto [clo, chi] = spec.coauthors_range;
                    const int n_co = clo + static_cast<int>(pstream.next_below(
                                               static_cast<std::uint64_t>(chi - clo) + 1));
                    std::vector<std::string> coauthors;
                    std::vector<std::string> keys{surname_key(focal_name)};
                    for (int cidx = 0; cidx < n_co; ++cidx) {
                        std::string name;
                        for (int attempt = 0; attempt < 50; ++attempt) {
                            name = gen_surname(pstream) + ", " +
                                   std::string(1, static_cast<char>('A' + pstream.next_below(26))) + ".";
                            const std::string key = surname_key(name);
                            if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
                                keys.push_back(key);
                                break;
                            }
                        }
                        coauthors.push_back(name);
                    }
                    const bool first = pstream.next_bernoulli(p_first);
                    if (first) {
                        pub.authors.push_back(focal_name);
                        pub.authors.insert(pub.authors.end(), coauthors.begin(), coauthors.end());
                        pub.focal_index = 0;
                    } else {
                        pub.authors = coauthors;
                        pub.authors.push_back(focal_name);
                        pub.focal_index = static_cast<int>(pub.authors.size()) - 1;
                    }
                    if (venue_idx < n_alpha_venues) {
                        std::stable_sort(pub.authors.begin(), pub.authors.end(),
                                         [](const std::string& a, const std::string& b) {
                                             return surname_key(a) < surname_key(b);
                                         });
                        pub.focal_index = static_cast<int>(
                            std::find(pub.authors.begin(), pub.authors.end(), focal_name) -
                            pub.authors.begin());
                    }
                }
                cohort.publications.push_back(std::move(pub));
            }
        }
        cohort.faculty.push_back(std::move(fac));
        cohort.truth.push_back(std::move(truth));
    }
    return cohort;
}

CareerSeries latent_series(const TruthRow& row) {
    CareerSeries s;
    s.faculty_id = row.faculty_id;
    s.t0 = row.t0;
    s.counts = row.rate;
    return s;
}

CareerSeries observed_series(const TruthRow& row) {
    CareerSeries s;
    s.faculty_id = row.faculty_id;
    s.t0 = row.t0;
    s.counts.assign(row.observed_counts.begin(), row.observed_counts.end());
    return s;
}

void save_cohort(const std::string& dir, const SyntheticCohort& cohort) {
    std::filesystem::create_directories(dir);
    save_faculty(dir + "/faculty.jsonl", cohort.faculty);
    save_publications(dir + "/publications.jsonl", cohort.publications);

    csv::Table truth;
    truth.header = {"faculty_id", "m1", "m2", "b", "t_star", "quadrant", "canonical",
                    "linear", "declining_role", "t0", "career_length"};
    for (const auto& r : cohort.truth) {
        truth.rows.push_back({r.faculty_id, csv::format_double(r.m1), csv::format_double(r.m2),
                              csv::format_double(r.b), csv::format_double(r.t_star),
                              csv::format_int(static_cast<int>(r.quadrant)),
                              r.canonical ? "true" : "false", r.linear ? "true" : "false",
                              r.declining_role ? "true" : "false", csv::format_int(r.t0),
                              csv::format_int(r.career_length)});
    }
    csv::write_file(dir + "/truth.csv", truth);

    csv::Table rates;
    rates.header = {"faculty_id", "career_year", "rate", "rate_unclipped", "latent_count",
                    "observed_count"};
    for (const auto& r : cohort.truth) {
        for (int t = 0; t < r.career_length; ++t) {
            const auto ti = static_cast<std::size_t>(t);
            rates.rows.push_back({r.faculty_id, csv::format_int(t), csv::format_double(r.rate[ti]),
                                  csv::format_double(r.rate_unclipped[ti]),
                                  csv::format_int(r.latent_counts[ti]),
                                  csv::format_int(r.observed_counts[ti])});
        }
    }
    csv::write_file(dir + "/truth_rates.csv", rates);
}

}  // namespace traj
