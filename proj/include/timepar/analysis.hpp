#pragma once

#include "timepar/schemes.hpp"
#include "timepar/window.hpp"

#include <cstddef>
#include <vector>

namespace timepar {

/** Convergence statistics of one windowed run at window size P. */
struct SweepRow {
    std::size_t window = 0;      // P
    double mean_converged = 0.0;  // slices accepted per iteration, M / k
    double cost_factor = 0.0;     // P / mean_converged: iteration cost factor
    std::size_t iterations = 0;   // k, total corrector sweeps
};

/// Reduces an iteration log to a SweepRow.  Throws config_error on an empty
/// log or when the log does not cover every slice of cfg.
SweepRow summarize(const std::vector<IterationRecord>& log, const WindowConfig& cfg);

/** Straight-line model of the normalized cost factor: I/j = a*P + b. */
struct FitParams {
    double a = 0.0;
    double b = 0.0;
    std::size_t substeps = 1;  // the j used to normalize
    double rss = 0.0;          // residual sum of squares of I/j
};

/// Ordinary least squares of cost_factor/j against window size over the
/// sweep rows.  Throws degenerate_fit_error with fewer than two distinct
/// window sizes.
FitParams fit_ab(const std::vector<SweepRow>& rows, std::size_t substeps);

/// Iteration count the fitted model implies for window P over N fine steps:
/// k = N * (a + b/P).
double implied_iterations(const FitParams& fit, std::size_t window, std::size_t steps);

/** Inputs of the parallel speed-up model. */
struct SpeedupInputs {
    double a = 0.0;            // fitted slope
    double b = 0.0;            // fitted intercept
    std::size_t substeps = 1;  // j
    double predict_cost = 1.0;  // wall-clock of one slice prediction
    double correct_cost = 1.0;  // wall-clock of one slice correction
};

/**
 * Speed-up of a windowed run over the sequential integrator at window size P:
 *
 *   S(P) = (Tp / (a Tc)) * P / (P^2 + B P + C),
 *   B = Tp/Tc + b/a - 1/(j a),   C = b Tp / (a Tc).
 *
 * S(0) is defined as 0.  Throws model_domain_error when the denominator is
 * not positive.
 */
double speedup(const SpeedupInputs& in, std::size_t window);

/// The same rational function on real window sizes (used by the optimum).
double speedup_continuous(const SpeedupInputs& in, double window);

/// Closed form of the speed-up at the real maximizer sqrt(C):
/// 1 / (a + 2 sqrt(a b Tc/Tp) + (b - 1/j) Tc/Tp).
double speedup_at_continuous_optimum(const SpeedupInputs& in);

/** Location and value of the optimal window size. */
struct OptimalWindow {
    std::size_t p_star = 0;       // integer maximizer of speedup()
    double s_at_p_star = 0.0;     // speedup(p_star)
    double p_continuous = 0.0;    // real maximizer sqrt(b Tp / (a Tc))
    double bound = 0.0;           // supremum 1/a no window size can exceed
};

/// Maximizes the speed-up: the integer optimum is the better of the two
/// integers bracketing the real maximizer.
OptimalWindow optimal_window(const SpeedupInputs& in);

/** Stage-count cost model of one window iteration. */
struct CostModel {
    double predict_cost = 0.0;    // one slice prediction: j (nd Ta + nk Tb)
    double correct_cost = 0.0;    // one slice correction: j nd Ta + Tb
    double iteration_cost = 0.0;  // predict + (P - C) corrections
    double ratio = 0.0;           // predict_cost / correct_cost
    double ratio_limit = 0.0;     // large-j limit 1 + (nk Tb)/(nd Ta)
};

/// Evaluates the cost model for a scheme with nd drift and nk kick stages
/// per fine step.  Requires positive stage costs and mean_converged <= P.
CostModel cost_model(const SchemeSpec& scheme, std::size_t substeps, std::size_t window,
                     double mean_converged, double drift_cost, double kick_cost);

}  // namespace timepar
