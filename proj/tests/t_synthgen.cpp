#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "test_util.hpp"
#include "traj/authorship.hpp"
#include "traj/calibrate.hpp"
#include "traj/classify.hpp"
#include "traj/csv.hpp"
#include "traj/ingest.hpp"
#include "traj/piecewise.hpp"
#include "traj/synthgen.hpp"

using namespace traj;

namespace {

GeneratorSpec quiet_spec(int n, std::uint64_t seed) {
    GeneratorSpec spec;
    spec.n_faculty = n;
    spec.seed = seed;
    spec.frac_single_author = 0.2;
    return spec;
}

int count_quadrant(const SyntheticCohort& c, Quadrant q) {
    int n = 0;
    for (const auto& r : c.truth) n += r.quadrant == q ? 1 : 0;
    return n;
}

}  // namespace

TEST_CASE("class allocation matches the weights exactly") {
    GeneratorSpec spec = quiet_spec(10, 3);
    spec.theta.canonical_weight = 0.0;
    spec.theta.quadrant_weights = {0.3, 0.3, 0.2, 0.2};
    auto cohort = generate_cohort(spec, AdjustmentModel::identity());
    CHECK(count_quadrant(cohort, Quadrant::I) == 3);
    CHECK(count_quadrant(cohort, Quadrant::II) == 3);
    CHECK(count_quadrant(cohort, Quadrant::III) == 2);
    CHECK(count_quadrant(cohort, Quadrant::IV) == 2);
    for (const auto& r : cohort.truth) CHECK_FALSE(r.canonical);
}

TEST_CASE("fractional remainders go to the largest shares, ties by class order") {
    GeneratorSpec spec = quiet_spec(100, 4);
    spec.theta.canonical_weight = 0.2;
    spec.theta.linear_weight = 0.1;
    spec.theta.quadrant_weights = {0.175, 0.175, 0.175, 0.175};
    auto cohort = generate_cohort(spec, AdjustmentModel::identity());

    int n_canonical = 0, n_linear = 0;
    for (const auto& r : cohort.truth) {
        n_canonical += r.canonical ? 1 : 0;
        n_linear += r.linear ? 1 : 0;
    }
    // Shares 20 / 10 / 17.5 x 4: the two leftover seats land on the first two
    // quadrant classes.
    CHECK(n_canonical == 20);
    CHECK(n_linear == 10);
    CHECK(count_quadrant(cohort, Quadrant::II) == 18);
    CHECK(count_quadrant(cohort, Quadrant::IV) == 20 + 17);

    // Even a tiny cohort fills every positive-weight class it can.
    GeneratorSpec tiny = quiet_spec(6, 4);
    tiny.theta.canonical_weight = 0.0;
    tiny.theta.quadrant_weights = {0.25, 0.25, 0.25, 0.25};
    auto small = generate_cohort(tiny, AdjustmentModel::identity());
    CHECK(count_quadrant(small, Quadrant::I) == 2);
    CHECK(count_quadrant(small, Quadrant::II) == 2);
    CHECK(count_quadrant(small, Quadrant::III) == 1);
    CHECK(count_quadrant(small, Quadrant::IV) == 1);
}

TEST_CASE("truth rows are internally consistent") {
    GeneratorSpec spec = quiet_spec(60, 11);
    auto cohort = generate_cohort(spec, AdjustmentModel::identity());
    REQUIRE(cohort.truth.size() == 60);
    std::size_t total_years = 0, total_obs = 0;
    for (const auto& r : cohort.truth) {
        CHECK(classify_quadrant(r.m1, r.m2) == r.quadrant);
        CHECK(is_canonical(PiecewiseParams{r.m1, r.m2, r.b, r.t_star, 0.0}, 10.0) == r.canonical);
        CHECK(r.t0 + r.career_length - 1 == spec.census_year);
        REQUIRE(r.rate.size() == static_cast<std::size_t>(r.career_length));
        for (std::size_t t = 0; t < r.rate.size(); ++t) {
            CHECK(r.rate_unclipped[t] ==
                  doctest::Approx(piecewise_value(r.m1, r.m2, r.b, r.t_star,
                                                  static_cast<double>(t))).epsilon(1e-12));
            CHECK(r.rate[t] == std::max(0.0, r.rate_unclipped[t]));
            CHECK(r.rate_unclipped[t] >= spec.theta.min_rate - 1e-9);
        }
        total_years += r.rate.size();
        for (long c : r.observed_counts) total_obs += static_cast<std::size_t>(c);
    }
    CHECK(cohort.publications.size() == total_obs);
    CHECK(total_years > 60 * 10);

    for (const auto& f : cohort.faculty) CHECK(f.source == Source::Cv);
}

TEST_CASE("noise-free integer trends survive the fit round trip") {
    GeneratorSpec spec = quiet_spec(30, 21);
    spec.count_noise = CountNoise::None;
    spec.theta.integer_theta = true;
    spec.theta.linear_weight = 0.1;
    spec.theta.canonical_weight = 0.2;
    auto cohort = generate_cohort(spec, AdjustmentModel::identity());
    int checked = 0;
    for (const auto& r : cohort.truth) {
        for (std::size_t t = 0; t < r.rate.size(); ++t) {
            CHECK(r.latent_counts[t] == std::llround(r.rate[t]));
            CHECK(r.observed_counts[t] == r.latent_counts[t]);
        }
        auto fit = fit_piecewise(observed_series(r));
        if (r.linear) {
            CHECK(fit.sse < 1e-9);
            CHECK(fit.m1 == doctest::Approx(fit.m2).epsilon(1e-9));
            continue;
        }
        CAPTURE(r.faculty_id);
        CHECK(fit.m1 == doctest::Approx(r.m1).epsilon(1e-6));
        CHECK(fit.m2 == doctest::Approx(r.m2).epsilon(1e-6));
        CHECK(fit.b == doctest::Approx(r.b).epsilon(1e-6));
        CHECK(std::abs(fit.t_star - r.t_star) < 1e-4);
        ++checked;
    }
    CHECK(checked >= 20);
}

TEST_CASE("poisson draws track the latent rates in aggregate") {
    GeneratorSpec spec = quiet_spec(200, 33);
    auto cohort = generate_cohort(spec, AdjustmentModel::identity());
    double rate_sum = 0.0;
    long latent_sum = 0;
    for (const auto& r : cohort.truth) {
        for (std::size_t t = 0; t < r.rate.size(); ++t) {
            rate_sum += r.rate[t];
            latent_sum += r.latent_counts[t];
        }
    }
    CHECK(std::abs(latent_sum - rate_sum) < 3.0 * std::sqrt(rate_sum));
    for (const auto& r : cohort.truth) {
        for (std::size_t t = 0; t < r.rate.size(); ++t) CHECK(r.observed_counts[t] == r.latent_counts[t]);
    }
}

TEST_CASE("negative binomial noise is overdispersed relative to poisson") {
    GeneratorSpec spec = quiet_spec(300, 41);
    spec.count_noise = CountNoise::NegBin;
    spec.zeta = 1.0;
    spec.theta.canonical_weight = 0.0;
    spec.theta.quadrant_weights = {0, 0, 0, 0};
    spec.theta.linear_weight = 1.0;
    spec.theta.slope_range = {0.01, 0.02};
    spec.theta.b_range = {5.0, 5.0};
    auto cohort = generate_cohort(spec, AdjustmentModel::identity());
    double sum = 0.0, sumsq = 0.0, expected = 0.0;
    long n = 0;
    for (const auto& r : cohort.truth) {
        for (std::size_t t = 0; t < r.rate.size(); ++t) {
            const auto c = static_cast<double>(r.latent_counts[t]);
            sum += c;
            sumsq += c * c;
            expected += r.rate[t];
            ++n;
        }
    }
    const double mean = sum / static_cast<double>(n);
    const double var = sumsq / static_cast<double>(n) - mean * mean;
    // Mean stays near the trend level while the variance reflects zeta.
    CHECK(std::abs(sum - expected) < 4.0 * std::sqrt(expected * (1.0 + 1.0 * mean)));
    CHECK(var > 2.0 * mean);
}

TEST_CASE("coverage thinning removes the expected share") {
    GeneratorSpec spec = quiet_spec(150, 55);
    spec.apply_coverage_thinning = true;
    auto model = AdjustmentModel::defaults();
    auto cohort = generate_cohort(spec, model);
    for (const auto& f : cohort.faculty) CHECK(f.source == Source::Database);

    double expected_latent = 0.0, expected_obs = 0.0;
    long latent_sum = 0, obs_sum = 0;
    for (const auto& r : cohort.truth) {
        for (std::size_t t = 0; t < r.rate.size(); ++t) {
            const int year = r.t0 + static_cast<int>(t);
            const double mean = r.rate[t] / growth_factor(model, year);
            expected_latent += mean;
            expected_obs += mean * coverage_fraction(model, year);
            latent_sum += r.latent_counts[t];
            obs_sum += r.observed_counts[t];
            CHECK(r.observed_counts[t] <= r.latent_counts[t]);
        }
    }
    CHECK(std::abs(latent_sum - expected_latent) < 3.0 * std::sqrt(expected_latent));
    CHECK(std::abs(obs_sum - expected_obs) < 3.0 * std::sqrt(expected_obs));
    CHECK(obs_sum < latent_sum);
}

TEST_CASE("role schedule drives who writes first") {
    GeneratorSpec spec = quiet_spec(40, 61);
    spec.frac_single_author = 0.0;
    spec.roles.frac_declining = 0.7;
    spec.roles.p_first_high = 1.0;
    spec.roles.p_first_low = 0.0;
    spec.roles.switch_year = 3;
    auto cohort = generate_cohort(spec, AdjustmentModel::identity());

    const int n_declining = static_cast<int>(std::llround(0.7 * 40));
    std::map<std::string, const TruthRow*> truth;
    for (std::size_t i = 0; i < cohort.truth.size(); ++i) {
        CHECK(cohort.truth[i].declining_role == (static_cast<int>(i) < n_declining));
        truth[cohort.truth[i].faculty_id] = &cohort.truth[i];
    }
    for (const auto& p : cohort.publications) {
        const TruthRow& r = *truth.at(p.faculty_id);
        const bool late = p.year - r.t0 >= spec.roles.switch_year;
        const bool expect_first = r.declining_role != late;
        REQUIRE(p.authors.size() >= 2);
        if (expect_first) {
            CHECK(p.focal_index == 0);
        } else {
            CHECK(p.focal_index == static_cast<int>(p.authors.size()) - 1);
        }
    }
}

TEST_CASE("designated venues order their author lists") {
    GeneratorSpec spec = quiet_spec(60, 71);
    spec.n_venues = 10;
    spec.frac_alpha_venues = 0.5;
    spec.frac_single_author = 0.0;
    auto cohort = generate_cohort(spec, AdjustmentModel::identity());
    const std::set<std::string> alpha{"V000", "V001", "V002", "V003", "V004"};
    int n_alpha = 0, n_unsorted = 0;
    std::map<std::string, std::string> focal_key;
    for (const auto& p : cohort.publications) {
        REQUIRE(p.focal_index >= 0);
        REQUIRE(p.focal_index < static_cast<int>(p.authors.size()));
        const std::string key =
            surname_key(p.authors[static_cast<std::size_t>(p.focal_index)]);
        auto [it, fresh] = focal_key.emplace(p.faculty_id, key);
        if (!fresh) CHECK(it->second == key);
        if (alpha.count(p.venue)) {
            CHECK(is_alphabetized(p.authors));
            ++n_alpha;
        } else if (!is_alphabetized(p.authors)) {
            ++n_unsorted;
        }
    }
    CHECK(n_alpha > 100);
    CHECK(n_unsorted > 100);
}

TEST_CASE("latent and observed series mirror the truth row") {
    GeneratorSpec spec = quiet_spec(5, 81);
    auto cohort = generate_cohort(spec, AdjustmentModel::identity());
    const TruthRow& r = cohort.truth.front();
    auto lat = latent_series(r);
    auto obs = observed_series(r);
    CHECK(lat.faculty_id == r.faculty_id);
    CHECK(lat.t0 == r.t0);
    REQUIRE(lat.counts.size() == r.rate.size());
    for (std::size_t t = 0; t < r.rate.size(); ++t) {
        CHECK(lat.counts[t] == r.rate[t]);
        CHECK(obs.counts[t] == static_cast<double>(r.observed_counts[t]));
    }
}

TEST_CASE("generation is reproducible and seed-sensitive") {
    GeneratorSpec spec = quiet_spec(20, 91);
    auto a = generate_cohort(spec, AdjustmentModel::identity());
    auto b = generate_cohort(spec, AdjustmentModel::identity());
    REQUIRE(a.publications.size() == b.publications.size());
    for (std::size_t i = 0; i < a.truth.size(); ++i) {
        CHECK(a.truth[i].m1 == b.truth[i].m1);
        CHECK(a.truth[i].t_star == b.truth[i].t_star);
        CHECK(a.truth[i].latent_counts == b.truth[i].latent_counts);
    }
    for (std::size_t i = 0; i < a.publications.size(); ++i) {
        CHECK(a.publications[i].pub_id == b.publications[i].pub_id);
        CHECK(a.publications[i].authors == b.publications[i].authors);
    }

    spec.seed = 92;
    auto c = generate_cohort(spec, AdjustmentModel::identity());
    int differs = 0;
    for (std::size_t i = 0; i < a.truth.size(); ++i) {
        differs += a.truth[i].m1 != c.truth[i].m1 ? 1 : 0;
    }
    CHECK(differs > 0);
}

TEST_CASE("disabling the rate floor lets trends clip at zero") {
    GeneratorSpec spec = quiet_spec(30, 101);
    spec.theta.canonical_weight = 0.0;
    spec.theta.quadrant_weights = {0.0, 0.0, 0.0, 1.0};
    spec.theta.slope_range = {0.5, 0.8};
    spec.theta.b_range = {2.0, 3.0};
    spec.career_length_range = {15, 15};
    spec.theta.min_rate = -1.0;
    auto cohort = generate_cohort(spec, AdjustmentModel::identity());
    int clipped = 0;
    for (const auto& r : cohort.truth) {
        for (std::size_t t = 0; t < r.rate.size(); ++t) {
            CHECK(r.rate[t] == std::max(0.0, r.rate_unclipped[t]));
            if (r.rate_unclipped[t] < 0.0) {
                CHECK(r.rate[t] == 0.0);
                ++clipped;
            }
        }
    }
    CHECK(clipped > 0);
}

TEST_CASE("saved cohorts round trip through the loaders") {
    testutil::TempDir dir("synth");
    GeneratorSpec spec = quiet_spec(12, 111);
    auto cohort = generate_cohort(spec, AdjustmentModel::identity());
    save_cohort(dir.path, cohort);

    auto faculty = load_faculty(dir.file("faculty.jsonl"));
    auto pubs = load_publications(dir.file("publications.jsonl"));
    REQUIRE(faculty.size() == cohort.faculty.size());
    REQUIRE(pubs.size() == cohort.publications.size());
    CHECK(faculty.front().faculty_id == cohort.faculty.front().faculty_id);
    CHECK(faculty.front().hire_year == cohort.faculty.front().hire_year);
    CHECK(pubs.front().authors == cohort.publications.front().authors);
    CHECK(pubs.front().focal_index == cohort.publications.front().focal_index);

    auto truth = csv::read_file(dir.file("truth.csv"));
    REQUIRE(truth.rows.size() == cohort.truth.size());
    CHECK(truth.header.front() == "faculty_id");

    std::size_t total_years = 0;
    for (const auto& r : cohort.truth) total_years += r.rate.size();
    auto rates = csv::read_file(dir.file("truth_rates.csv"));
    CHECK(rates.rows.size() == total_years);
}

TEST_CASE("generator specs are validated") {
    const auto id = AdjustmentModel::identity();
    GeneratorSpec spec = quiet_spec(10, 1);

    spec.n_faculty = 0;
    CHECK_THROWS_AS(generate_cohort(spec, id), std::invalid_argument);
    spec = quiet_spec(10, 1);
    spec.career_length_range = {3, 12};
    CHECK_THROWS_AS(generate_cohort(spec, id), std::invalid_argument);
    spec = quiet_spec(10, 1);
    spec.career_length_range = {12, 10};
    CHECK_THROWS_AS(generate_cohort(spec, id), std::invalid_argument);
    spec = quiet_spec(10, 1);
    spec.count_noise = CountNoise::NegBin;
    spec.zeta = 0.0;
    CHECK_THROWS_AS(generate_cohort(spec, id), std::invalid_argument);
    spec = quiet_spec(10, 1);
    spec.theta.canonical_weight = 0.0;
    spec.theta.linear_weight = 0.0;
    spec.theta.quadrant_weights = {0, 0, 0, 0};
    CHECK_THROWS_AS(generate_cohort(spec, id), std::invalid_argument);
    spec = quiet_spec(10, 1);
    spec.theta.quadrant_weights = {-0.1, 0.3, 0.4, 0.4};
    CHECK_THROWS_AS(generate_cohort(spec, id), std::invalid_argument);
    spec = quiet_spec(10, 1);
    spec.theta.slope_range = {0.0, 0.5};
    CHECK_THROWS_AS(generate_cohort(spec, id), std::invalid_argument);
    spec = quiet_spec(10, 1);
    spec.theta.b_range = {5.0, 2.0};
    CHECK_THROWS_AS(generate_cohort(spec, id), std::invalid_argument);
    spec = quiet_spec(10, 1);
    spec.frac_alpha_venues = 1.5;
    CHECK_THROWS_AS(generate_cohort(spec, id), std::invalid_argument);
    spec = quiet_spec(10, 1);
    spec.n_venues = 0;
    CHECK_THROWS_AS(generate_cohort(spec, id), std::invalid_argument);
    spec = quiet_spec(10, 1);
    spec.coauthors_range = {0, 4};
    CHECK_THROWS_AS(generate_cohort(spec, id), std::invalid_argument);
    spec = quiet_spec(10, 1);
    spec.coauthors_range = {1, 25};
    CHECK_THROWS_AS(generate_cohort(spec, id), std::invalid_argument);
    spec = quiet_spec(10, 1);
    spec.roles.switch_year = 0;
    CHECK_THROWS_AS(generate_cohort(spec, id), std::invalid_argument);
}
