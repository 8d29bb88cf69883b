#include "doctest.h"

#include "timepar/analysis.hpp"
#include "timepar/errors.hpp"
#include "timepar/window.hpp"

#include <algorithm>
#include <cmath>
#include <string>

using namespace timepar;

namespace {

WindowConfig pendulum_config(std::size_t steps, std::size_t substeps, std::size_t window) {
    WindowConfig cfg;
    cfg.problem = SplitProblem::pendulum(0.01);
    cfg.scheme = parse_scheme("sbab4");
    cfg.y0 = make_state({1.0}, {0.0});
    cfg.dt = 0.01;
    cfg.steps = steps;
    cfg.substeps = substeps;
    cfg.window = window;
    return cfg;
}

WindowConfig spin_orbit_config(std::size_t steps, std::size_t substeps,
                               std::size_t window) {
    WindowConfig cfg = pendulum_config(steps, substeps, window);
    cfg.problem = SplitProblem::spin_orbit(0.01, 1e-4, 0.2);
    return cfg;
}

Trajectory reference_for(const WindowConfig& cfg) {
    return integrate_sequential(cfg.problem, cfg.scheme, cfg.y0, cfg.dt, cfg.steps,
                                cfg.substeps);
}

double max_error(const WindowRun& run, const WindowConfig& cfg) {
    const std::vector<double> err =
        verify_against_sequential(run.accepted, reference_for(cfg));
    double worst = 0.0;
    for (double e : err) worst = std::max(worst, e);
    return worst;
}

bool trajectories_same_bits(const Trajectory& a, const Trajectory& b) {
    if (a.states.size() != b.states.size()) return false;
    for (std::size_t i = 0; i < a.states.size(); ++i)
        if (!same_bits(a.states[i], b.states[i])) return false;
    return true;
}

}  // namespace

TEST_CASE("window initialization lays out the drift cascade") {
    const WindowConfig cfg = pendulum_config(1000, 10, 8);
    WindowState ws;
    FrontierState fs;
    init_window(cfg, ws, fs);

    CHECK(fs.r == 0);
    REQUIRE(fs.u.size() == 1);
    CHECK(same_bits(fs.u.front(), cfg.y0));
    REQUIRE(ws.cells.size() == 8);

    SchemeStepper stepper(cfg.problem, cfg.scheme, cfg.dt);
    State cascade = cfg.y0;
    for (std::size_t i = 0; i < ws.cells.size(); ++i) {
        const SliceCell& cell = ws.cells[i];
        CHECK(cell.n == i);
        CHECK(same_bits(cell.y_start, cascade));
        CHECK(cell.taps.kick_count() == 0);
        for (double g : cell.g_prev.force_p) CHECK(g == 0.0);
        for (double g : cell.g_prev.drift_q) CHECK(g == 0.0);
        for (std::size_t s = 0; s < cfg.substeps; ++s) stepper.step_drift_only(cascade);
    }
    CHECK(same_bits(ws.tail_boundary, cascade));
}

TEST_CASE("window never holds more slices than remain") {
    const WindowConfig cfg = pendulum_config(100, 10, 50);  // M = 10 < P
    WindowState ws;
    FrontierState fs;
    init_window(cfg, ws, fs);
    CHECK(ws.cells.size() == 10);
}

TEST_CASE("predicting the head slice reproduces the fine integrator") {
    const WindowConfig cfg = spin_orbit_config(1000, 100, 4);
    WindowState ws;
    FrontierState fs;
    init_window(cfg, ws, fs);

    predict_slice(cfg, ws.cells.front());
    const Trajectory ref = reference_for(cfg);
    CHECK(same_bits(ws.cells.front().y_end_pred, ref.states[1]));
    CHECK(ws.cells.front().taps.kick_count() ==
          cfg.substeps * cfg.scheme.kicks_per_step());
}

TEST_CASE("a hundred-substep slice records five hundred kick values") {
    const WindowConfig cfg = pendulum_config(1000, 100, 2);
    WindowState ws;
    FrontierState fs;
    init_window(cfg, ws, fs);
    predict_slice(cfg, ws.cells.front());
    CHECK(ws.cells.front().taps.kick_count() == 500);
}

TEST_CASE("one corrector sweep accepts the head and shifts the window") {
    const WindowConfig cfg = pendulum_config(1000, 10, 4);
    WindowState ws;
    FrontierState fs;
    init_window(cfg, ws, fs);

    PhaseTimings timings;
    predict_window(cfg, ws, timings);
    const std::size_t conv = correct_pass(cfg, ws, fs);
    CHECK(conv >= 1);
    CHECK(conv <= 4);
    CHECK(fs.u.size() == 1 + conv);
    REQUIRE(fs.log.size() == 1);
    CHECK(fs.log.front().iteration == 1);
    CHECK(fs.log.front().frontier == 0);
    CHECK(fs.log.front().converged == conv);
    CHECK(std::isfinite(fs.log.front().max_correction));

    // The first accepted boundary is the fine solution from y0.
    const Trajectory ref = reference_for(cfg);
    CHECK(same_bits(fs.u[1], ref.states[1]));

    advance_window(cfg, ws, fs, conv);
    CHECK(fs.r == conv);
    CHECK(ws.cells.size() == std::min<std::size_t>(4, cfg.slices() - fs.r));
    CHECK(ws.cells.front().n == fs.r);
    // The new head starts from the accepted frontier value.
    CHECK(same_bits(ws.cells.front().y_start, fs.u.back()));
}

TEST_CASE("accepted solution equals the sequential fine solution bitwise") {
    for (int which = 0; which < 2; ++which) {
        WindowConfig cfg = which == 0 ? pendulum_config(10000, 10, 10)
                                      : spin_orbit_config(10000, 10, 10);
        CAPTURE(which);
        const WindowRun run = run_window(cfg);
        CHECK(max_error(run, cfg) == 0.0);
        CHECK(run.accepted.states.size() == cfg.slices() + 1);

        std::size_t total = 0;
        for (const IterationRecord& rec : run.iterations) {
            CHECK(rec.converged >= 1);
            CHECK(rec.converged <= cfg.window);
            total += rec.converged;
        }
        CHECK(total == cfg.slices());
    }
}

TEST_CASE("both convergence predicates reach the exact fixed point") {
    for (ConvergencePredicate pred :
         {ConvergencePredicate::previous_iterate, ConvergencePredicate::predictor_endpoint}) {
        WindowConfig cfg = pendulum_config(5000, 10, 8);
        cfg.predicate = pred;
        const WindowRun run = run_window(cfg);
        CHECK(max_error(run, cfg) == 0.0);
    }
}

TEST_CASE("a window of one degenerates to the sequential integrator") {
    const WindowConfig cfg = pendulum_config(2000, 10, 1);
    const WindowRun run = run_window(cfg);
    CHECK(run.iterations.size() == cfg.slices());
    CHECK(max_error(run, cfg) == 0.0);
}

TEST_CASE("vanishing perturbation converges in one sweep per window") {
    for (Variant variant : {Variant::refined, Variant::sst97, Variant::picard}) {
        WindowConfig cfg = pendulum_config(4000, 10, 60);  // M = 400
        cfg.problem = SplitProblem::pendulum(0.0);
        cfg.variant = variant;
        const std::string label = variant_name(variant);
        CAPTURE(label);
        const WindowRun run = run_window(cfg);
        const std::size_t m = cfg.slices();
        CHECK(run.iterations.size() == (m + cfg.window - 1) / cfg.window);
        for (const IterationRecord& rec : run.iterations)
            CHECK(rec.converged == std::min(cfg.window, m - rec.frontier));
        CHECK(max_error(run, cfg) == 0.0);
    }
}

TEST_CASE("window covering the whole span converges in a single iteration when integrable") {
    WindowConfig cfg = pendulum_config(1000, 10, 100);  // P == M
    cfg.problem = SplitProblem::pendulum(0.0);
    const WindowRun run = run_window(cfg);
    CHECK(run.iterations.size() == 1);
    CHECK(max_error(run, cfg) == 0.0);
}

TEST_CASE("all corrector variants agree with the reference at convergence") {
    for (Variant variant : {Variant::refined, Variant::sst97, Variant::picard}) {
        WindowConfig cfg = pendulum_config(5000, 10, 10);
        cfg.variant = variant;
        const std::string label = variant_name(variant);
        CAPTURE(label);
        const WindowRun run = run_window(cfg);
        // The replay variants land on the fine orbit exactly; rigid transport
        // may keep roundoff-size residue at accepted boundaries.
        const double tol = variant == Variant::picard ? 1e-12 : 0.0;
        CHECK(max_error(run, cfg) <= tol);
    }
}

TEST_CASE("the remainder term buys iterations over both baselines") {
    // Wide windows expose the corrector quality: the second-order remainder
    // beats the plain replay, which beats rigid transport.
    for (int which = 0; which < 2; ++which) {
        WindowConfig base = which == 0 ? pendulum_config(20000, 100, 80)
                                       : spin_orbit_config(20000, 100, 80);
        CAPTURE(which);
        std::size_t k[3];
        for (Variant variant : {Variant::refined, Variant::sst97, Variant::picard}) {
            WindowConfig cfg = base;
            cfg.variant = variant;
            k[int(variant)] = run_window(cfg).iterations.size();
        }
        CHECK(k[int(Variant::refined)] < k[int(Variant::sst97)]);
        CHECK(k[int(Variant::sst97)] < k[int(Variant::picard)]);
    }
}

TEST_CASE("threaded prediction is bitwise identical to the simulated loop") {
    const WindowConfig base = spin_orbit_config(20000, 100, 8);
    const WindowRun reference = run_window(base);

    for (std::size_t workers : {1u, 2u, 8u}) {
        WindowConfig cfg = base;
        cfg.mode = ExecMode::threaded;
        cfg.workers = workers;
        CAPTURE(workers);
        const WindowRun run = run_window(cfg);
        CHECK(run.iterations.size() == reference.iterations.size());
        CHECK(trajectories_same_bits(run.accepted, reference.accepted));
        for (std::size_t i = 0; i < run.iterations.size(); ++i) {
            CHECK(run.iterations[i].converged == reference.iterations[i].converged);
            CHECK(run.iterations[i].max_correction ==
                  reference.iterations[i].max_correction);
        }
    }
}

TEST_CASE("frontier advances monotonically and the log is consistent") {
    const WindowConfig cfg = pendulum_config(10000, 100, 5);
    const WindowRun run = run_window(cfg);
    std::size_t frontier = 0;
    std::size_t iteration = 0;
    for (const IterationRecord& rec : run.iterations) {
        CHECK(rec.iteration == ++iteration);
        CHECK(rec.frontier == frontier);
        frontier += rec.converged;
    }
    CHECK(frontier == cfg.slices());
}

TEST_CASE("iteration cap aborts a stalling run") {
    WindowConfig cfg = pendulum_config(100000, 100, 4);
    cfg.max_iterations = 3;
    bool thrown = false;
    try {
        run_window(cfg);
    } catch (const nonconvergence_error& e) {
        thrown = true;
        CHECK(e.iterations() == 3);
        CHECK(e.frontier() < cfg.slices());
    }
    CHECK(thrown);
}

TEST_CASE("configuration validation rejects inconsistent windows") {
    WindowConfig cfg = pendulum_config(1000, 10, 4);
    cfg.steps = 1001;  // not a multiple of substeps
    CHECK_THROWS_AS(validate(cfg), config_error);
    cfg = pendulum_config(1000, 10, 0);
    CHECK_THROWS_AS(validate(cfg), config_error);
    cfg = pendulum_config(1000, 10, 4);
    cfg.dt = 0.0;
    CHECK_THROWS_AS(validate(cfg), config_error);
    cfg = pendulum_config(0, 10, 4);
    CHECK_THROWS_AS(validate(cfg), config_error);
}

TEST_CASE("grid mismatches are rejected during verification") {
    const WindowConfig cfg = pendulum_config(1000, 10, 4);
    const WindowRun run = run_window(cfg);
    Trajectory ref = reference_for(cfg);
    ref.states.pop_back();
    ref.energies.pop_back();
    CHECK_THROWS_AS(verify_against_sequential(run.accepted, ref), grid_mismatch_error);

    Trajectory wrong_grid = reference_for(cfg);
    wrong_grid.sample_every = 5;
    CHECK_THROWS_AS(verify_against_sequential(run.accepted, wrong_grid),
                    grid_mismatch_error);
}

TEST_CASE("a converged slice's remainder term is exactly zero") {
    // At a sustained fixed point successive corrected endpoints coincide, so
    // the two perturbation evaluations cancel bit for bit.
    const SplitProblem prob = SplitProblem::spin_orbit(0.01, 1e-4, 0.2);
    const State endpoint = make_state({0.93}, {4.21});
    const PerturbationValue now = eval_perturbation(prob, 0.0, endpoint);
    const PerturbationValue before = eval_perturbation(prob, 0.0, endpoint);
    const double slice_span = 1.0;
    for (std::size_t l = 0; l < now.force_p.size(); ++l) {
        CHECK(slice_span * (now.force_p[l] - before.force_p[l]) == 0.0);
        CHECK(slice_span * (now.drift_q[l] - before.drift_q[l]) == 0.0);
    }
}
