#pragma once

#include "timepar/problems.hpp"
#include "timepar/schemes.hpp"
#include "timepar/state.hpp"
#include "timepar/stepper.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace timepar {

/**
 * Corrector variant.
 *
 * refined: replays the recorded kick increments along the corrected start
 *          and adds the slice-long remainder (difference of the perturbation
 *          at the new and previous corrected endpoints, weighted by the slice
 *          span), accurate to second order in the perturbation size.
 * sst97:   the same replay without the remainder term (first order).
 * picard:  rigid transport of the start correction: the predicted endpoint
 *          plus the difference between corrected and predicted start.
 */
enum class Variant { refined, sst97, picard };

/// Predictor execution strategy.  Both produce bitwise-identical results;
/// simulated runs the slice predictions in a plain loop, threaded fans them
/// out over worker threads.
enum class ExecMode { simulated, threaded };

/**
 * Baseline against which a corrected slice endpoint is declared converged
 * (always by exact bit equality, and only contiguously from the window head).
 *
 * previous_iterate:   the value this boundary held after the previous sweep.
 * predictor_endpoint: the endpoint the predictor produced this iteration.
 *
 * Both detect the same sustained fixed point; they differ by at most the
 * pipeline startup transient.
 */
enum class ConvergencePredicate { previous_iterate, predictor_endpoint };

std::string variant_name(Variant v);
Variant parse_variant(const std::string& text);
std::string exec_mode_name(ExecMode m);
ExecMode parse_exec_mode(const std::string& text);

/** Full description of one windowed run. */
struct WindowConfig {
    SplitProblem problem;
    SchemeSpec scheme;
    State y0;
    double dt = 0.0;            // fine step
    std::size_t steps = 0;      // total fine steps N; must be a multiple of substeps
    std::size_t substeps = 1;   // fine steps per slice (j); slice span is j*dt
    std::size_t window = 1;     // parallel slices in flight (P)
    Variant variant = Variant::refined;
    ExecMode mode = ExecMode::simulated;
    std::size_t workers = 0;        // threaded mode: thread cap; 0 means one per slice
    std::size_t max_iterations = 0;  // 0 selects the default cap
    ConvergencePredicate predicate = ConvergencePredicate::previous_iterate;

    std::size_t slices() const { return substeps ? steps / substeps : 0; }

    /// Cap applied when max_iterations is 0: 100 * slices / window, at least
    /// slices (every run needs one iteration per slice in the worst case).
    std::size_t default_iteration_cap() const;
};

/// Throws config_error when the configuration is unusable.
void validate(const WindowConfig& cfg);

/**
 * One slice currently in the parallelization window.  y_start is the best
 * current value of the left boundary (iterate k), y_end_pred and taps are
 * the predictor output from that start, and g_prev holds the perturbation
 * at the previous corrected endpoint.  g_prev is unset until the slice's
 * first correction, which seeds it from the predicted endpoint; the replay
 * reuses that prediction's kick values, so the remainder stays a difference
 * of evaluations at nearby points instead of a full-size perturbation kick.
 */
struct SliceCell {
    std::size_t n = 0;  // slice index: covers fine steps [n*j, (n+1)*j)
    State y_start;
    State y_end_pred;
    StageTap taps;
    PerturbationValue g_prev;
    bool g_prev_ready = false;
};

/** Window slices in flight plus the current value of the boundary at the
    window's right edge (the comparison baseline for the last slice). */
struct WindowState {
    std::vector<SliceCell> cells;
    State tail_boundary;
};

/** One corrector sweep's bookkeeping entry. */
struct IterationRecord {
    std::size_t iteration = 0;  // 1-based
    std::size_t frontier = 0;   // first unconverged slice before the sweep
    std::size_t converged = 0;  // slices accepted by this sweep
    double max_correction = 0.0;  // largest boundary move, Euclidean
};

/** Frontier bookkeeping: accepted boundary values u[0..r] and the sweep log. */
struct FrontierState {
    std::size_t r = 0;          // slices accepted so far
    std::vector<State> u;       // u[n] is the accepted value at boundary n
    std::size_t iteration = 0;  // sweeps performed
    std::vector<IterationRecord> log;
};

struct PhaseTimings {
    double predict_seconds = 0.0;
    double correct_seconds = 0.0;
};

/** Result of a windowed run: the accepted solution sampled at slice
    boundaries, the per-iteration log and wall-clock per phase. */
struct WindowRun {
    Trajectory accepted;
    std::vector<IterationRecord> iterations;
    PhaseTimings timings;
};

/**
 * Resets the frontier to the initial state and fills the window with its
 * first slices.  Iterate-0 starts are the integrable (drift-only) cascade
 * from y0; every g_prev starts at zero.
 */
void init_window(const WindowConfig& cfg, WindowState& ws, FrontierState& fs);

/**
 * Predicts one slice from its current start: j recorded fine steps, leaving
 * the endpoint in y_end_pred and the kick increments in taps.  Depends only
 * on the cell's own data, so distinct cells may run concurrently.
 */
void predict_slice(const WindowConfig& cfg, SliceCell& cell);

/**
 * Runs the predictor phase over every window cell (loop or thread fan-out
 * per cfg.mode) and accumulates the elapsed wall-clock.
 */
void predict_window(const WindowConfig& cfg, WindowState& ws, PhaseTimings& timings);

/**
 * One sequential corrector sweep.  The head slice's predicted endpoint is
 * accepted outright (its start is the accepted frontier value, so the
 * prediction already is the fine solution); each later slice is corrected
 * from the accepted value carried through the sweep and accepted while the
 * converged prefix remains unbroken.  Appends an IterationRecord and returns
 * the number of slices accepted.  Does not shift the window.
 */
std::size_t correct_pass(const WindowConfig& cfg, WindowState& ws, FrontierState& fs);

/**
 * Shifts the window after a sweep: drops the conv accepted cells, advances
 * the frontier and admits fresh slices at the tail with drift-only starts.
 */
void advance_window(const WindowConfig& cfg, WindowState& ws, FrontierState& fs,
                    std::size_t conv);

/**
 * Complete run: init, then predict/correct/advance until every slice is
 * accepted.  Throws nonconvergence_error when the iteration cap is reached
 * first.  The accepted trajectory samples every slice boundary.
 */
WindowRun run_window(const WindowConfig& cfg);

/**
 * Per-boundary Euclidean distance between an accepted solution and a
 * sequential reference sampled on the same grid.  Throws
 * grid_mismatch_error when the grids differ.
 */
std::vector<double> verify_against_sequential(const Trajectory& accepted,
                                              const Trajectory& reference);

}  // namespace timepar
