#include "timepar/window.hpp"

#include "timepar/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <utility>

namespace timepar {

std::string variant_name(Variant v) {
    switch (v) {
        case Variant::refined: return "refined";
        case Variant::sst97: return "sst97";
        case Variant::picard: return "picard";
    }
    return "unknown";
}

Variant parse_variant(const std::string& text) {
    if (text == "refined") return Variant::refined;
    if (text == "sst97") return Variant::sst97;
    if (text == "picard") return Variant::picard;
    throw config_error("unknown corrector variant '" + text + "'");
}

std::string exec_mode_name(ExecMode m) {
    return m == ExecMode::simulated ? "simulated" : "threaded";
}

ExecMode parse_exec_mode(const std::string& text) {
    if (text == "simulated") return ExecMode::simulated;
    if (text == "threaded") return ExecMode::threaded;
    throw config_error("unknown execution mode '" + text + "'");
}

std::size_t WindowConfig::default_iteration_cap() const {
    const std::size_t m = slices();
    if (m == 0 || window == 0) return 1;
    return std::max(m, 100 * m / window);
}

void validate(const WindowConfig& cfg) {
    if (cfg.y0.dof() == 0 || cfg.y0.p.size() != cfg.y0.q.size())
        throw config_error("initial state must have matching p and q dimensions");
    if (!all_finite(cfg.y0))
        throw config_error("initial state must be finite");
    if (!std::isfinite(cfg.dt) || cfg.dt == 0.0)
        throw config_error("fine step dt must be finite and nonzero");
    if (cfg.substeps == 0)
        throw config_error("substeps per slice must be positive");
    if (cfg.steps == 0)
        throw config_error("step count must be positive");
    if (cfg.steps % cfg.substeps != 0)
        throw config_error("step count must be a multiple of the substeps per slice");
    if (cfg.window == 0)
        throw config_error("window size must be positive");
}

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

// Fills the window tail with fresh cells up to its nominal size, extending
// the drift-only cascade that supplies iterate-0 boundary guesses.
void admit_cells(const WindowConfig& cfg, WindowState& ws, const FrontierState& fs) {
    const std::size_t m = cfg.slices();
    const std::size_t want = std::min(cfg.window, m - fs.r);
    if (ws.cells.size() >= want) return;
    const std::size_t r = cfg.y0.dof();
    SchemeStepper stepper(cfg.problem, cfg.scheme, cfg.dt);
    while (ws.cells.size() < want) {
        SliceCell cell;
        cell.n = fs.r + ws.cells.size();
        cell.y_start = ws.tail_boundary;
        cell.taps.reset(r);
        cell.g_prev.assign_zero(r);
        ws.cells.push_back(std::move(cell));
        for (std::size_t s = 0; s < cfg.substeps; ++s) {
            const std::size_t global = ws.cells.back().n * cfg.substeps + s;
            stepper.step_drift_only(ws.tail_boundary, global);
        }
    }
}

// Predicts one cell with a caller-owned stepper so loops and worker threads
// can reuse their scratch.
void predict_into(const WindowConfig& cfg, SchemeStepper& stepper, SliceCell& cell) {
    cell.y_end_pred = cell.y_start;
    const std::size_t base = cell.n * cfg.substeps;
    if (cfg.variant == Variant::picard) {
        for (std::size_t s = 0; s < cfg.substeps; ++s)
            stepper.step(cell.y_end_pred, base + s);
        return;
    }
    cell.taps.reset(cell.y_start.dof());
    cell.taps.reserve_kicks(cfg.substeps * cfg.scheme.kicks_per_step());
    for (std::size_t s = 0; s < cfg.substeps; ++s)
        stepper.step_recorded(cell.y_end_pred, cell.taps, base + s);
}

}  // namespace

void init_window(const WindowConfig& cfg, WindowState& ws, FrontierState& fs) {
    validate(cfg);
    fs.r = 0;
    fs.u.clear();
    fs.u.reserve(cfg.slices() + 1);
    fs.u.push_back(cfg.y0);
    fs.iteration = 0;
    fs.log.clear();
    ws.cells.clear();
    ws.tail_boundary = cfg.y0;
    admit_cells(cfg, ws, fs);
}

void predict_slice(const WindowConfig& cfg, SliceCell& cell) {
    SchemeStepper stepper(cfg.problem, cfg.scheme, cfg.dt);
    predict_into(cfg, stepper, cell);
}

void predict_window(const WindowConfig& cfg, WindowState& ws, PhaseTimings& timings) {
    const auto start = clock_type::now();
    const std::size_t count = ws.cells.size();
    std::size_t nw = 1;
    if (cfg.mode == ExecMode::threaded) {
        nw = cfg.workers == 0 ? count : std::min(cfg.workers, count);
        nw = std::max<std::size_t>(nw, 1);
    }
    if (nw <= 1) {
        SchemeStepper stepper(cfg.problem, cfg.scheme, cfg.dt);
        for (SliceCell& cell : ws.cells) predict_into(cfg, stepper, cell);
    } else {
        // Contiguous blocks; each worker owns its cells and its own scratch,
        // so the result is independent of scheduling.
        std::vector<std::thread> pool;
        pool.reserve(nw);
        const std::size_t chunk = (count + nw - 1) / nw;
        std::exception_ptr first_error;
        std::mutex error_mutex;
        for (std::size_t w = 0; w < nw; ++w) {
            const std::size_t lo = w * chunk;
            const std::size_t hi = std::min(count, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back([&, lo, hi]() {
                try {
                    SchemeStepper stepper(cfg.problem, cfg.scheme, cfg.dt);
                    for (std::size_t i = lo; i < hi; ++i)
                        predict_into(cfg, stepper, ws.cells[i]);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }
    timings.predict_seconds += seconds_since(start);
}

std::size_t correct_pass(const WindowConfig& cfg, WindowState& ws, FrontierState& fs) {
    auto& cells = ws.cells;
    const std::size_t w = cells.size();
    if (w == 0) throw std::logic_error("corrector sweep on an empty window");
    const std::size_t r = cfg.y0.dof();
    const std::size_t r_before = fs.r;
    const double slice_span = double(cfg.substeps) * cfg.dt;

    SchemeStepper stepper(cfg.problem, cfg.scheme, cfg.dt);
    PerturbationValue g_half;

    // Head slice: its start is the accepted frontier value, so the predictor
    // already integrated the fine solution; accept it outright.
    State accepted = cells.front().y_end_pred;
    {
        const State& old_value = (w > 1) ? cells[1].y_start : ws.tail_boundary;
        fs.log.push_back({fs.iteration + 1, r_before, 1, state_distance(accepted, old_value)});
    }
    IterationRecord& rec = fs.log.back();
    fs.u.push_back(accepted);
    bool head = true;
    State carry = std::move(accepted);

    for (std::size_t idx = 1; idx < w; ++idx) {
        SliceCell& cell = cells[idx];
        const State& old_next = (idx + 1 < w) ? cells[idx + 1].y_start : ws.tail_boundary;
        State out;
        switch (cfg.variant) {
            case Variant::refined:
            case Variant::sst97: {
                out = carry;
                std::size_t cursor = 0;
                const std::size_t base = cell.n * cfg.substeps;
                for (std::size_t s = 0; s < cfg.substeps; ++s)
                    stepper.step_replay(out, cell.taps, cursor, base + s);
                if (cfg.variant == Variant::refined) {
                    if (!cell.g_prev_ready) {
                        // First correction of this slice: the previous iterate
                        // is the prediction whose kicks the replay just reused,
                        // so its endpoint supplies the comparison value.
                        eval_perturbation(cfg.problem, cell.y_end_pred.t,
                                          cell.y_end_pred, cell.g_prev);
                        cell.g_prev_ready = true;
                    }
                    eval_perturbation(cfg.problem, out.t, out, g_half);
                    for (std::size_t l = 0; l < r; ++l) {
                        const double inc =
                            slice_span * (g_half.force_p[l] - cell.g_prev.force_p[l]);
                        out.p[l] += inc;
                    }
                    for (std::size_t l = 0; l < r; ++l) {
                        const double inc =
                            slice_span * (g_half.drift_q[l] - cell.g_prev.drift_q[l]);
                        out.q[l] += inc;
                    }
                    cell.g_prev.force_p = g_half.force_p;
                    cell.g_prev.drift_q = g_half.drift_q;
                }
                break;
            }
            case Variant::picard: {
                // Rigid transport of the start correction to the endpoint.
                out = cell.y_end_pred;
                for (std::size_t l = 0; l < r; ++l) out.p[l] += carry.p[l] - cell.y_start.p[l];
                for (std::size_t l = 0; l < r; ++l) out.q[l] += carry.q[l] - cell.y_start.q[l];
                break;
            }
        }
        if (!all_finite(out))
            throw blowup_error((cell.n + 1) * cfg.substeps, 0,
                               "non-finite corrected boundary after slice " +
                                   std::to_string(cell.n));

        const double corr = state_distance(out, old_next);
        if (corr > rec.max_correction) rec.max_correction = corr;

        if (head) {
            const State& baseline = cfg.predicate == ConvergencePredicate::previous_iterate
                                        ? old_next
                                        : cell.y_end_pred;
            if (same_bits(out, baseline)) {
                fs.u.push_back(out);
                ++rec.converged;
            } else {
                head = false;
            }
        }

        cell.y_start = std::move(carry);
        carry = std::move(out);
    }
    ws.tail_boundary = std::move(carry);

    ++fs.iteration;
    return rec.converged;
}

void advance_window(const WindowConfig& cfg, WindowState& ws, FrontierState& fs,
                    std::size_t conv) {
    if (conv == 0 || conv > ws.cells.size())
        throw std::logic_error("window shift requires 1..window accepted slices");
    fs.r += conv;
    ws.cells.erase(ws.cells.begin(), ws.cells.begin() + std::ptrdiff_t(conv));
    admit_cells(cfg, ws, fs);
}

WindowRun run_window(const WindowConfig& cfg) {
    WindowState ws;
    FrontierState fs;
    init_window(cfg, ws, fs);

    const std::size_t m = cfg.slices();
    const std::size_t cap =
        cfg.max_iterations ? cfg.max_iterations : cfg.default_iteration_cap();

    WindowRun run;
    while (fs.r < m) {
        if (fs.iteration >= cap)
            throw nonconvergence_error(fs.iteration, fs.r,
                                       "iteration cap " + std::to_string(cap) +
                                           " reached with frontier at slice " +
                                           std::to_string(fs.r) + " of " +
                                           std::to_string(m));
        predict_window(cfg, ws, run.timings);
        const auto start = clock_type::now();
        const std::size_t conv = correct_pass(cfg, ws, fs);
        advance_window(cfg, ws, fs, conv);
        run.timings.correct_seconds += seconds_since(start);
    }

    run.accepted.t0 = cfg.y0.t;
    run.accepted.dt = cfg.dt;
    run.accepted.sample_every = cfg.substeps;
    run.accepted.states = std::move(fs.u);
    run.accepted.energies.reserve(run.accepted.states.size());
    for (const State& y : run.accepted.states)
        run.accepted.energies.push_back(energy(cfg.problem, y));
    run.iterations = std::move(fs.log);
    return run;
}

std::vector<double> verify_against_sequential(const Trajectory& accepted,
                                              const Trajectory& reference) {
    if (accepted.states.size() != reference.states.size())
        throw grid_mismatch_error("trajectories hold different sample counts");
    if (accepted.dt != reference.dt || accepted.sample_every != reference.sample_every ||
        accepted.t0 != reference.t0)
        throw grid_mismatch_error("trajectories live on different time grids");
    std::vector<double> err;
    err.reserve(accepted.states.size());
    for (std::size_t i = 0; i < accepted.states.size(); ++i)
        err.push_back(state_distance(accepted.states[i], reference.states[i]));
    return err;
}

}  // namespace timepar
