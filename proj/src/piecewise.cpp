#include "traj/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "traj/errors.hpp"
#include "traj/stats.hpp"

namespace traj {

double piecewise_value(double m1, double m2, double b, double t_star, double t) {
    if (t <= t_star) return b + m1 * t;
    return b + m1 * t_star + m2 * (t - t_star);
}

double piecewise_value(const PiecewiseParams& p, double t) {
    return piecewise_value(p.m1, p.m2, p.b, p.t_star, t);
}

TstarWindow tstar_window(int career_length) {
    const TstarWindow w{1.05, static_cast<double>(career_length - 1) - 1.05};
    if (career_length < 2 || w.hi < w.lo) {
        throw DegenerateFit("no admissible change-point window for career length " +
                            std::to_string(career_length));
    }
    return w;
}

namespace {

// Solves a symmetric 3x3 system by Gaussian elimination with partial
// pivoting. Throws DegenerateFit on (numerical) singularity.
void solve3(long double a[3][3], long double rhs[3], double out[3]) {
    long double scale = 0.0L;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) scale = std::max(scale, std::abs(a[i][j]));
    }
    if (scale == 0.0L) throw DegenerateFit("singular normal equations");
    const long double tiny = 1e-14L * scale;

    int perm[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(a[perm[r]][col]) > std::abs(a[perm[piv]][col])) piv = r;
        }
        std::swap(perm[col], perm[piv]);
        const long double p = a[perm[col]][col];
        if (std::abs(p) < tiny) throw DegenerateFit("singular normal equations");
        for (int r = col + 1; r < 3; ++r) {
            const long double factor = a[perm[r]][col] / p;
            for (int c = col; c < 3; ++c) a[perm[r]][c] -= factor * a[perm[col]][c];
            rhs[perm[r]] -= factor * rhs[perm[col]];
        }
    }
    long double x[3];
    for (int i = 2; i >= 0; --i) {
        long double acc = rhs[perm[i]];
        for (int c = i + 1; c < 3; ++c) acc -= a[perm[i]][c] * x[c];
        x[i] = acc / a[perm[i]][i];
    }
    for (int i = 0; i < 3; ++i) out[i] = static_cast<double>(x[i]);
}

// Running sums over the integer grid permitting O(1) assembly of the normal
// equations at any candidate change point.
struct PrefixSums {
    std::vector<long double> t, t2, y, yt;
    long double y2_total = 0.0L;
    int n = 0;

    explicit PrefixSums(const CareerSeries& s) : n(s.career_length()) {
        t.assign(n + 1, 0.0L);
        t2.assign(n + 1, 0.0L);
        y.assign(n + 1, 0.0L);
        yt.assign(n + 1, 0.0L);
        for (int i = 0; i < n; ++i) {
            const long double yi = s.counts[static_cast<std::size_t>(i)];
            t[i + 1] = t[i] + i;
            t2[i + 1] = t2[i] + static_cast<long double>(i) * i;
            y[i + 1] = y[i] + yi;
            yt[i + 1] = yt[i] + yi * i;
            y2_total += yi * yi;
        }
    }

    // Least-squares error at t_star, using SSE = y'y - x'A'y at the solution.
    double sse_at(double t_star, double params[3]) const {
        const int k = std::clamp(static_cast<int>(std::ceil(t_star)), 0, n);
        const long double ts = t_star;
        const long double n2 = n - k;
        const long double s1 = t[n] - t[k];
        const long double s2 = t2[n] - t2[k];
        const long double y1 = y[n] - y[k];

        const long double su = t[k] + n2 * ts;
        const long double sv = s1 - n2 * ts;
        const long double su2 = t2[k] + n2 * ts * ts;
        const long double suv = ts * (s1 - n2 * ts);
        const long double sv2 = s2 - 2.0L * ts * s1 + n2 * ts * ts;
        const long double suy = yt[k] + ts * y1;
        const long double svy = (yt[n] - yt[k]) - ts * y1;

        long double a[3][3] = {{su2, suv, su}, {suv, sv2, sv}, {su, sv, static_cast<long double>(n)}};
        long double rhs[3] = {suy, svy, y[n]};
        solve3(a, rhs, params);
        const long double sse = y2_total - (params[0] * suy + params[1] * svy + params[2] * y[n]);
        return std::max(0.0, static_cast<double>(sse));
    }
};

}  // namespace

FixedTstarFit solve_fixed_tstar(const CareerSeries& series, double t_star) {
    const int n = series.career_length();
    int n1 = 0;
    for (int i = 0; i < n; ++i) {
        if (i < t_star) ++n1;
    }
    if (n1 == 0 || n1 == n) {
        throw DegenerateFit("change point " + std::to_string(t_star) + " leaves an empty segment");
    }

    long double su = 0, sv = 0, su2 = 0, sv2 = 0, suv = 0, suy = 0, svy = 0, sy = 0;
    for (int i = 0; i < n; ++i) {
        const long double u = std::min<long double>(i, t_star);
        const long double v = std::max<long double>(0.0L, i - static_cast<long double>(t_star));
        const long double yi = series.counts[static_cast<std::size_t>(i)];
        su += u;
        sv += v;
        su2 += u * u;
        sv2 += v * v;
        suv += u * v;
        suy += u * yi;
        svy += v * yi;
        sy += yi;
    }
    long double a[3][3] = {{su2, suv, su}, {suv, sv2, sv}, {su, sv, static_cast<long double>(n)}};
    long double rhs[3] = {suy, svy, sy};
    double params[3];
    solve3(a, rhs, params);

    FixedTstarFit fit;
    fit.m1 = params[0];
    fit.m2 = params[1];
    fit.b = params[2];
    long double acc = 0.0L;
    for (int i = 0; i < n; ++i) {
        const long double r = series.counts[static_cast<std::size_t>(i)] -
                              piecewise_value(fit.m1, fit.m2, fit.b, t_star, i);
        acc += r * r;
    }
    fit.sse = static_cast<double>(acc);
    return fit;
}

PiecewiseParams fit_piecewise(const CareerSeries& series) {
    const int n = series.career_length();
    const TstarWindow window = tstar_window(n);
    const PrefixSums sums(series);

    double best_t = window.lo;
    double best_sse = std::numeric_limits<double>::infinity();
    double params[3];

    auto consider = [&](double t_star) {
        t_star = std::clamp(t_star, window.lo, window.hi);
        double s;
        try {
            s = sums.sse_at(t_star, params);
        } catch (const DegenerateFit&) {
            return;
        }
        if (s < best_sse) {
            best_sse = s;
            best_t = t_star;
        }
    };

    for (double t = window.lo; t < window.hi; t += 0.1) consider(t);
    consider(window.hi);
    if (!std::isfinite(best_sse)) throw DegenerateFit("all change-point candidates were singular");

    double step = 0.1;
    for (int round = 0; round < 7; ++round) {
        step /= 10.0;
        const double center = best_t;
        for (int k = -10; k <= 10; ++k) consider(center + k * step);
    }

    const FixedTstarFit exact = solve_fixed_tstar(series, best_t);
    PiecewiseParams out;
    out.m1 = exact.m1;
    out.m2 = exact.m2;
    out.b = exact.b;
    out.t_star = best_t;
    out.sse = exact.sse;
    return out;
}

LineParams fit_line(const CareerSeries& series) {
    const int n = series.career_length();
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = i;
    const OlsFit fit = ols_fit(t, series.counts);
    return LineParams{fit.slope, fit.intercept, fit.sse};
}

double information_score(Criterion criterion, int n, int k, double sse) {
    if (n < 1 || k < 1) throw std::invalid_argument("information_score: n and k must be positive");
    if (sse < 0) throw std::invalid_argument("information_score: negative sse");
    if (criterion == Criterion::Aicc && n <= k + 1) {
        throw std::invalid_argument("information_score: AICc undefined for n <= k + 1");
    }
    if (sse == 0.0) return -std::numeric_limits<double>::infinity();
    const double base = n * std::log(sse / n);
    switch (criterion) {
        case Criterion::Aic:
            return base + 2.0 * k;
        case Criterion::Aicc:
            return base + 2.0 * k + (2.0 * k * (k + 1)) / (n - k - 1);
        case Criterion::Bic:
            return base + k * std::log(static_cast<double>(n));
    }
    throw std::invalid_argument("information_score: unknown criterion");
}

SelectionResult select_model(const CareerSeries& series, Criterion criterion) {
    const LineParams line = fit_line(series);
    const PiecewiseParams pw = fit_piecewise(series);
    SelectionResult result;
    result.criterion = criterion;
    result.score_line = information_score(criterion, series.career_length(), 2, line.sse);
    result.score_piecewise = information_score(criterion, series.career_length(), 4, pw.sse);
    result.chosen = result.score_piecewise < result.score_line ? ModelKind::Piecewise : ModelKind::Line;
    return result;
}

const char* criterion_name(Criterion c) {
    switch (c) {
        case Criterion::Aic:
            return "aic";
        case Criterion::Aicc:
            return "aicc";
        case Criterion::Bic:
            return "bic";
    }
    return "?";
}

const char* model_kind_name(ModelKind m) {
    return m == ModelKind::Line ? "line" : "piecewise";
}

}  // namespace traj
