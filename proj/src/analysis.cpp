#include "timepar/analysis.hpp"

#include "timepar/errors.hpp"

#include <cmath>
#include <string>

namespace timepar {

SweepRow summarize(const std::vector<IterationRecord>& log, const WindowConfig& cfg) {
    if (log.empty())
        throw config_error("summary requires a non-empty iteration log");
    std::size_t total = 0;
    for (const IterationRecord& rec : log) total += rec.converged;
    if (total != cfg.slices())
        throw config_error("iteration log covers " + std::to_string(total) +
                           " slices, configuration has " + std::to_string(cfg.slices()));
    SweepRow row;
    row.window = cfg.window;
    row.iterations = log.size();
    row.mean_converged = double(total) / double(log.size());
    row.cost_factor = double(cfg.window) / row.mean_converged;
    return row;
}

FitParams fit_ab(const std::vector<SweepRow>& rows, std::size_t substeps) {
    if (substeps == 0)
        throw config_error("fit requires positive substeps");
    if (rows.size() < 2)
        throw degenerate_fit_error("fit requires at least two sweep rows");

    double sx = 0.0, sy = 0.0;
    for (const SweepRow& row : rows) {
        sx += double(row.window);
        sy += row.cost_factor / double(substeps);
    }
    const double n = double(rows.size());
    const double mx = sx / n;
    const double my = sy / n;

    double sxx = 0.0, sxy = 0.0;
    for (const SweepRow& row : rows) {
        const double dx = double(row.window) - mx;
        const double dy = row.cost_factor / double(substeps) - my;
        sxx += dx * dx;
        sxy += dx * dy;
    }
    if (sxx == 0.0)
        throw degenerate_fit_error("fit requires at least two distinct window sizes");

    FitParams fit;
    fit.a = sxy / sxx;
    fit.b = my - fit.a * mx;
    fit.substeps = substeps;
    for (const SweepRow& row : rows) {
        const double res =
            row.cost_factor / double(substeps) - (fit.a * double(row.window) + fit.b);
        fit.rss += res * res;
    }
    return fit;
}

double implied_iterations(const FitParams& fit, std::size_t window, std::size_t steps) {
    if (window == 0)
        throw config_error("implied iteration count requires a positive window");
    return double(steps) * (fit.a + fit.b / double(window));
}

namespace {

void check_inputs(const SpeedupInputs& in) {
    if (!(in.a > 0.0) || !std::isfinite(in.a))
        throw config_error("speed-up model requires slope a > 0");
    if (!(in.b >= 0.0) || !std::isfinite(in.b))
        throw config_error("speed-up model requires intercept b >= 0");
    if (in.substeps == 0)
        throw config_error("speed-up model requires positive substeps");
    if (!(in.predict_cost > 0.0) || !(in.correct_cost > 0.0))
        throw config_error("speed-up model requires positive slice costs");
}

}  // namespace

double speedup_continuous(const SpeedupInputs& in, double window) {
    check_inputs(in);
    if (!(window >= 0.0) || !std::isfinite(window))
        throw config_error("speed-up requires a finite window size >= 0");
    if (window == 0.0) return 0.0;
    const double cost_ratio = in.predict_cost / in.correct_cost;
    const double bb = cost_ratio + in.b / in.a - 1.0 / (double(in.substeps) * in.a);
    const double cc = in.b * cost_ratio / in.a;
    const double denom = window * window + bb * window + cc;
    if (!(denom > 0.0))
        throw model_domain_error("speed-up denominator is not positive at window " +
                                 std::to_string(window));
    return (cost_ratio / in.a) * window / denom;
}

double speedup(const SpeedupInputs& in, std::size_t window) {
    return speedup_continuous(in, double(window));
}

double speedup_at_continuous_optimum(const SpeedupInputs& in) {
    check_inputs(in);
    const double tc_over_tp = in.correct_cost / in.predict_cost;
    return 1.0 / (in.a + 2.0 * std::sqrt(in.a * in.b * tc_over_tp) +
                  (in.b - 1.0 / double(in.substeps)) * tc_over_tp);
}

OptimalWindow optimal_window(const SpeedupInputs& in) {
    check_inputs(in);
    OptimalWindow opt;
    opt.p_continuous =
        std::sqrt(in.b * in.predict_cost / (in.a * in.correct_cost));
    opt.bound = 1.0 / in.a;

    const double floor_p = std::floor(opt.p_continuous);
    std::size_t lo = floor_p < 1.0 ? 1 : std::size_t(floor_p);
    const std::size_t hi = lo + 1;
    const double s_lo = speedup(in, lo);
    const double s_hi = speedup(in, hi);
    if (s_hi > s_lo) {
        opt.p_star = hi;
        opt.s_at_p_star = s_hi;
    } else {
        opt.p_star = lo;
        opt.s_at_p_star = s_lo;
    }
    return opt;
}

CostModel cost_model(const SchemeSpec& scheme, std::size_t substeps, std::size_t window,
                     double mean_converged, double drift_cost, double kick_cost) {
    if (substeps == 0 || window == 0)
        throw config_error("cost model requires positive substeps and window");
    if (!(drift_cost > 0.0) || !(kick_cost > 0.0))
        throw config_error("cost model requires positive stage costs");
    if (!(mean_converged >= 0.0) || mean_converged > double(window))
        throw config_error("cost model requires 0 <= mean_converged <= window");

    const double nd = double(scheme.drifts_per_step());
    const double nk = double(scheme.kicks_per_step());
    const double j = double(substeps);

    CostModel model;
    model.predict_cost = j * (nd * drift_cost + nk * kick_cost);
    model.correct_cost = j * nd * drift_cost + kick_cost;
    model.iteration_cost =
        model.predict_cost + (double(window) - mean_converged) * model.correct_cost;
    model.ratio = model.predict_cost / model.correct_cost;
    model.ratio_limit = 1.0 + (nk * kick_cost) / (nd * drift_cost);
    return model;
}

}  // namespace timepar
