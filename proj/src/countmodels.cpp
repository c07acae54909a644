#include "traj/countmodels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "traj/errors.hpp"

namespace traj {

double q_factor(const AdjustmentModel& model, int calendar_year) {
    return coverage_fraction(model, calendar_year) / growth_factor(model, calendar_year);
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kZetaMin = 1e-6;
constexpr double kZetaMax = 1e3;

std::vector<double> q_values(const CareerSeries& series, const AdjustmentModel& model) {
    std::vector<double> q(series.counts.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        q[i] = q_factor(model, series.t0 + static_cast<int>(i));
    }
    return q;
}

// -inf instead of throwing, for use inside the search loop.
double poisson_score_impl(const CareerSeries& s, const std::vector<double>& q,
                          double m1, double m2, double b, double t_star) {
    double acc = 0.0;
    for (std::size_t i = 0; i < s.counts.size(); ++i) {
        const double f = piecewise_value(m1, m2, b, t_star, static_cast<double>(i));
        if (!(f > 0.0)) return kNegInf;
        acc += -q[i] * f;
        if (s.counts[i] > 0) acc += s.counts[i] * std::log(f);
    }
    return acc;
}

// Per-dispersion constants of the fixed-dispersion score.
struct NegbinCache {
    double zeta = 0.0;
    double inv_zeta = 0.0;
    double log_zeta = 0.0;
    double gamma_terms = 0.0;  // sum lnG(y_i + 1/z) - T lnG(1/z)

    NegbinCache(const CareerSeries& s, double z) : zeta(z), inv_zeta(1.0 / z), log_zeta(std::log(z)) {
        const double lg_inv = std::lgamma(inv_zeta);
        for (double y : s.counts) gamma_terms += std::lgamma(y + inv_zeta) - lg_inv;
    }
};

double negbin_score_impl(const CareerSeries& s, const std::vector<double>& q, const NegbinCache& cache,
                         double m1, double m2, double b, double t_star) {
    double acc = cache.gamma_terms;
    for (std::size_t i = 0; i < s.counts.size(); ++i) {
        const double f = piecewise_value(m1, m2, b, t_star, static_cast<double>(i));
        if (!(f > 0.0)) return kNegInf;
        const double lqf = std::log1p(cache.zeta * q[i] * f);
        acc += -cache.inv_zeta * lqf;
        if (s.counts[i] > 0) acc += s.counts[i] * (cache.log_zeta + std::log(f) - lqf);
    }
    return acc;
}

void check_positive_trend(const CareerSeries& s, double m1, double m2, double b, double t_star) {
    for (std::size_t i = 0; i < s.counts.size(); ++i) {
        if (!(piecewise_value(m1, m2, b, t_star, static_cast<double>(i)) > 0.0)) {
            throw std::domain_error("trend not strictly positive at career year " + std::to_string(i));
        }
    }
}

struct Candidate {
    double m1 = 0.0;
    double m2 = 0.0;
    double b = 0.0;
    double t_star = 0.0;
    double log_zeta = 0.0;
};

class Objective {
public:
    Objective(const CareerSeries& s, const AdjustmentModel& model, CountFamily family)
        : series_(s), q_(q_values(s, model)), family_(family) {}

    double eval(const Candidate& c) const {
        if (family_ == CountFamily::Poisson) {
            return poisson_score_impl(series_, q_, c.m1, c.m2, c.b, c.t_star);
        }
        const double zeta = std::exp(c.log_zeta);
        if (!cache_ || cache_->zeta != zeta) cache_.emplace(series_, zeta);
        return negbin_score_impl(series_, q_, *cache_, c.m1, c.m2, c.b, c.t_star);
    }

    bool has_zeta() const { return family_ == CountFamily::NegBin; }
    const std::vector<double>& q() const { return q_; }

private:
    const CareerSeries& series_;
    std::vector<double> q_;
    CountFamily family_;
    mutable std::optional<NegbinCache> cache_;
};

// Golden-section maximization on [lo, hi].
template <typename Fn>
double golden_max(Fn&& fn, double lo, double hi, double tol) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = fn(x1), f2 = fn(x2);
    for (int i = 0; i < 90 && (b - a) > tol; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = fn(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = fn(x1);
        }
    }
    return f1 > f2 ? x1 : x2;
}

// Expands a bracket around x until the score stops improving, then refines.
template <typename Fn>
double line_search(Fn&& fn, double x, double lo, double hi, double init_step) {
    double best_x = x, best_f = fn(x);
    double step = init_step;
    for (int dir : {+1, -1}) {
        double h = step;
        for (int i = 0; i < 40; ++i) {
            const double cand = std::clamp(x + dir * h, lo, hi);
            const double f = fn(cand);
            if (f > best_f) {
                best_f = f;
                best_x = cand;
                h *= 2.0;
            } else {
                break;
            }
            if (cand == lo || cand == hi) break;
        }
    }
    const double width = std::max(step, std::abs(best_x - x)) * 2.0;
    const double a = std::clamp(best_x - width, lo, hi);
    const double b = std::clamp(best_x + width, lo, hi);
    const double refined = golden_max(fn, a, b, 1e-9 * (1.0 + std::abs(best_x)));
    return fn(refined) > best_f ? refined : best_x;
}

Candidate repair_positivity(const CareerSeries& s, Candidate c) {
    double fmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.counts.size(); ++i) {
        fmin = std::min(fmin, piecewise_value(c.m1, c.m2, c.b, c.t_star, static_cast<double>(i)));
    }
    if (fmin < 0.05) c.b += 0.05 - fmin;
    return c;
}

struct PolishResult {
    Candidate c;
    double score = kNegInf;
    bool converged = false;
};

PolishResult polish(const Objective& obj, const TstarWindow& window, Candidate c) {
    PolishResult res;
    c.t_star = std::clamp(c.t_star, window.lo, window.hi);
    double score = obj.eval(c);
    if (score == kNegInf) return res;

    const double log_zeta_lo = std::log(kZetaMin), log_zeta_hi = std::log(kZetaMax);
    bool first_round = true;
    for (int round = 0; round < 60; ++round) {
        const double before = score;

        auto tstar_fn = [&](double t) {
            Candidate tmp = c;
            tmp.t_star = t;
            return obj.eval(tmp);
        };
        if (first_round) {
            double best_t = c.t_star, best_f = score;
            for (double t = window.lo; t <= window.hi + 1e-12; t += 0.1) {
                const double f = tstar_fn(std::min(t, window.hi));
                if (f > best_f) {
                    best_f = f;
                    best_t = std::min(t, window.hi);
                }
            }
            c.t_star = best_t;
            first_round = false;
        }
        c.t_star = golden_max(tstar_fn, std::max(window.lo, c.t_star - 0.5),
                              std::min(window.hi, c.t_star + 0.5), 1e-9);

        c.b = line_search([&](double v) { Candidate t = c; t.b = v; return obj.eval(t); },
                          c.b, -1e6, 1e6, std::max(0.05, 0.1 * std::abs(c.b)));
        c.m1 = line_search([&](double v) { Candidate t = c; t.m1 = v; return obj.eval(t); },
                           c.m1, -1e6, 1e6, std::max(0.02, 0.1 * std::abs(c.m1)));
        c.m2 = line_search([&](double v) { Candidate t = c; t.m2 = v; return obj.eval(t); },
                           c.m2, -1e6, 1e6, std::max(0.02, 0.1 * std::abs(c.m2)));
        if (obj.has_zeta()) {
            c.log_zeta = line_search([&](double v) { Candidate t = c; t.log_zeta = v; return obj.eval(t); },
                                     c.log_zeta, log_zeta_lo, log_zeta_hi, 0.5);
        }

        score = obj.eval(c);
        if (score - before < 1e-8) {
            res.converged = true;
            break;
        }
    }
    res.c = c;
    res.score = score;
    return res;
}

}  // namespace

double poisson_score(const CareerSeries& raw_series, const AdjustmentModel& model,
                     double m1, double m2, double b, double t_star) {
    check_positive_trend(raw_series, m1, m2, b, t_star);
    return poisson_score_impl(raw_series, q_values(raw_series, model), m1, m2, b, t_star);
}

double negbin_score(const CareerSeries& raw_series, const AdjustmentModel& model,
                    double m1, double m2, double b, double t_star, double zeta) {
    if (!(zeta > 0.0)) throw std::domain_error("dispersion must be positive");
    check_positive_trend(raw_series, m1, m2, b, t_star);
    const NegbinCache cache(raw_series, zeta);
    return negbin_score_impl(raw_series, q_values(raw_series, model), cache, m1, m2, b, t_star);
}

CountModelFit fit_count_model(const CareerSeries& raw_series, const AdjustmentModel& model,
                              CountFamily family) {
    const int n = raw_series.career_length();
    const TstarWindow window = tstar_window(n);
    const Objective obj(raw_series, model, family);

    // Seed from least squares on counts mapped back to trend scale.
    CareerSeries descaled = raw_series;
    for (std::size_t i = 0; i < descaled.counts.size(); ++i) descaled.counts[i] /= obj.q()[i];
    double mean_descaled = 0.0;
    for (double v : descaled.counts) mean_descaled += v;
    mean_descaled /= n;

    Candidate ls_seed;
    try {
        const PiecewiseParams p = fit_piecewise(descaled);
        ls_seed = Candidate{p.m1, p.m2, p.b, p.t_star, 0.0};
    } catch (const DegenerateFit&) {
        ls_seed = Candidate{0.0, 0.0, std::max(0.1, mean_descaled), 0.5 * (window.lo + window.hi), 0.0};
    }
    const double mid = 0.5 * (window.lo + window.hi);
    const double quarter = window.lo + 0.25 * (window.hi - window.lo);
    const double three_quarter = window.lo + 0.75 * (window.hi - window.lo);

    std::vector<Candidate> seeds;
    seeds.push_back(ls_seed);
    seeds.push_back(Candidate{ls_seed.m1, ls_seed.m2, ls_seed.b, quarter, 0.0});
    seeds.push_back(Candidate{ls_seed.m1, ls_seed.m2, ls_seed.b, three_quarter, 0.0});
    seeds.push_back(Candidate{0.0, 0.0, std::max(0.1, mean_descaled), mid, 0.0});
    seeds.push_back(Candidate{0.5 * ls_seed.m1, 0.5 * ls_seed.m2, ls_seed.b + 0.5, ls_seed.t_star, 0.0});

    PolishResult best;
    int valid = 0;
    for (Candidate seed : seeds) {
        if (family == CountFamily::NegBin) seed.log_zeta = std::log(0.5);
        seed = repair_positivity(raw_series, seed);
        const PolishResult r = polish(obj, window, seed);
        if (r.score == kNegInf) continue;
        ++valid;
        if (r.score > best.score) best = r;
    }
    if (valid == 0) {
        throw FitFailure("no restart produced a valid positive trend for faculty " + raw_series.faculty_id);
    }

    CountModelFit fit;
    fit.m1 = best.c.m1;
    fit.m2 = best.c.m2;
    fit.b = best.c.b;
    fit.t_star = best.c.t_star;
    if (family == CountFamily::NegBin) fit.zeta = std::exp(best.c.log_zeta);
    fit.log_score = best.score;
    fit.converged = best.converged;
    fit.n_restarts_used = valid;
    return fit;
}

const char* count_family_name(CountFamily f) {
    return f == CountFamily::Poisson ? "poisson" : "negbin";
}

}  // namespace traj
