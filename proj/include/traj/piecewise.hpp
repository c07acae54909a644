#pragma once

#include "traj/types.hpp"

namespace traj {

// Continuous two-slope trend: b + m1*t up to the change point t_star, then
// linear continuation with slope m2.
struct PiecewiseParams {
    double m1 = 0.0;
    double m2 = 0.0;
    double b = 0.0;
    double t_star = 0.0;
    double sse = 0.0;
};

struct LineParams {
    double slope = 0.0;
    double intercept = 0.0;
    double sse = 0.0;
};

enum class Criterion { Aic, Aicc, Bic };
enum class ModelKind { Line, Piecewise };

struct SelectionResult {
    Criterion criterion = Criterion::Aicc;
    double score_line = 0.0;
    double score_piecewise = 0.0;
    ModelKind chosen = ModelKind::Line;
};

struct FixedTstarFit {
    double m1 = 0.0;
    double m2 = 0.0;
    double b = 0.0;
    double sse = 0.0;
};

// Admissible change-point range [1.05, T-2.05]: keeps at least two
// observations on each side of the kink.
struct TstarWindow {
    double lo = 0.0;
    double hi = 0.0;
};

double piecewise_value(double m1, double m2, double b, double t_star, double t);
double piecewise_value(const PiecewiseParams& p, double t);

TstarWindow tstar_window(int career_length);

// Least squares at a fixed change point via the 3x3 normal equations.
FixedTstarFit solve_fixed_tstar(const CareerSeries& series, double t_star);

// Grid search over the change point (coarse step 0.1, then seven rounds of
// 10x local refinement), exact least squares at each candidate. Equal-error
// candidates resolve to the smallest change point.
PiecewiseParams fit_piecewise(const CareerSeries& series);

LineParams fit_line(const CareerSeries& series);

// n log(SSE/n) plus the complexity penalty of the chosen criterion. A perfect
// fit (sse = 0) scores -infinity.
double information_score(Criterion criterion, int n, int k, double sse);

SelectionResult select_model(const CareerSeries& series, Criterion criterion = Criterion::Aicc);

const char* criterion_name(Criterion c);
const char* model_kind_name(ModelKind m);

}  // namespace traj
