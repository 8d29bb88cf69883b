// Command-line driver for the time-parallel integration toolkit.

#include "CLI11.hpp"

#include "timepar/analysis.hpp"
#include "timepar/csvio.hpp"
#include "timepar/errors.hpp"
#include "timepar/problems.hpp"
#include "timepar/schemes.hpp"
#include "timepar/state.hpp"
#include "timepar/stepper.hpp"
#include "timepar/window.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_blowup = 3;
constexpr int exit_verify = 4;
constexpr int exit_cap = 5;
constexpr int exit_fit = 6;

using Summary = std::vector<std::pair<std::string, std::string>>;

std::string quote_if_needed(const std::string& arg) {
    if (arg.find_first_of(" \t\"'") == std::string::npos) return arg;
    std::string quoted = "'";
    for (char c : arg) {
        if (c == '\'') quoted += "'\\''";
        else quoted += c;
    }
    quoted += "'";
    return quoted;
}

std::string joined_cmdline(int argc, char** argv) {
    std::string line;
    for (int i = 0; i < argc; ++i) {
        if (i) line += ' ';
        line += quote_if_needed(argv[i]);
    }
    return line;
}

// Options shared by every subcommand that integrates a model.
struct ModelOptions {
    std::string problem = "pendulum";
    double eps = 0.01;
    double alpha = 1e-4;
    double phi = 0.2;
    double p0 = 1.0;
    double q0 = 0.0;
    double t0 = 0.0;
    double dt = 0.01;
    std::size_t steps = 1000;
    std::string scheme = "sbab4";
};

void add_model_options(CLI::App* cmd, ModelOptions& opt) {
    cmd->add_option("--problem", opt.problem, "Test problem: pendulum or spin-orbit")
        ->check(CLI::IsMember({"pendulum", "spin-orbit"}));
    cmd->add_option("--eps", opt.eps, "Perturbation size");
    cmd->add_option("--alpha", opt.alpha, "Spin-orbit secondary amplitude");
    cmd->add_option("--phi", opt.phi, "Spin-orbit phase offset");
    cmd->add_option("--p0", opt.p0, "Initial momentum");
    cmd->add_option("--q0", opt.q0, "Initial coordinate");
    cmd->add_option("--t0", opt.t0, "Initial time");
    cmd->add_option("--dt", opt.dt, "Fine step size");
    cmd->add_option("--steps", opt.steps, "Total fine steps");
    cmd->add_option("--scheme", opt.scheme, "Splitting scheme (leapfrog, sabaN, sbabN)");
}

timepar::SplitProblem build_problem(const ModelOptions& opt) {
    if (opt.problem == "pendulum") return timepar::SplitProblem::pendulum(opt.eps);
    return timepar::SplitProblem::spin_orbit(opt.eps, opt.alpha, opt.phi);
}

timepar::State build_state(const ModelOptions& opt) {
    return timepar::make_state({opt.p0}, {opt.q0}, opt.t0);
}

void append_model_summary(Summary& summary, const ModelOptions& opt) {
    summary.emplace_back("problem", opt.problem);
    summary.emplace_back("scheme", opt.scheme);
    summary.emplace_back("eps", timepar::format_double(opt.eps));
    if (opt.problem == "spin-orbit") {
        summary.emplace_back("alpha", timepar::format_double(opt.alpha));
        summary.emplace_back("phi", timepar::format_double(opt.phi));
    }
    summary.emplace_back("p0", timepar::format_double(opt.p0));
    summary.emplace_back("q0", timepar::format_double(opt.q0));
    summary.emplace_back("t0", timepar::format_double(opt.t0));
    summary.emplace_back("dt", timepar::format_double(opt.dt));
    summary.emplace_back("steps", std::to_string(opt.steps));
}

void finish_summary(Summary&& summary, const std::string& path, const std::string& cmdline) {
    summary.emplace_back("cmdline", cmdline);
    if (!path.empty()) {
        timepar::write_summary(path, summary);
    } else {
        for (const auto& [key, value] : summary) std::cout << key << '=' << value << '\n';
    }
}

double max_energy_drift(const timepar::Trajectory& traj) {
    if (traj.energies.empty()) return 0.0;
    const double h0 = traj.energies.front();
    double drift = 0.0;
    for (double h : traj.energies) drift = std::max(drift, std::abs(h - h0));
    return drift;
}

int cmd_run(const ModelOptions& opt, std::size_t sample_every, const std::string& out,
            const std::string& summary_path, bool hex, const std::string& cmdline) {
    const timepar::SplitProblem prob = build_problem(opt);
    const timepar::SchemeSpec scheme = timepar::parse_scheme(opt.scheme);
    const timepar::Trajectory traj = timepar::integrate_sequential(
        prob, scheme, build_state(opt), opt.dt, opt.steps, sample_every);
    if (!out.empty()) timepar::write_trajectory_csv(out, traj, hex);

    Summary summary;
    summary.emplace_back("command", "run");
    append_model_summary(summary, opt);
    summary.emplace_back("sample_every", std::to_string(sample_every));
    summary.emplace_back("samples", std::to_string(traj.states.size()));
    summary.emplace_back("energy_drift_max",
                         timepar::format_double(max_energy_drift(traj)));
    if (!out.empty()) summary.emplace_back("trajectory_out", out);
    finish_summary(std::move(summary), summary_path, cmdline);
    return exit_ok;
}

struct ParallelOptions {
    std::size_t substeps = 100;
    std::size_t window = 50;
    std::string variant = "refined";
    std::string mode = "simulated";
    std::size_t workers = 0;
    std::size_t max_iter = 0;
    bool verify = false;
    double verify_tol = 0.0;
};

void add_parallel_options(CLI::App* cmd, ParallelOptions& opt) {
    cmd->add_option("--substeps", opt.substeps, "Fine steps per slice (j)");
    cmd->add_option("--window", opt.window, "Parallel slices in flight (P)");
    cmd->add_option("--variant", opt.variant, "Corrector: refined, sst97 or picard")
        ->check(CLI::IsMember({"refined", "sst97", "picard"}));
    cmd->add_option("--exec", opt.mode, "Predictor execution: simulated or threaded")
        ->check(CLI::IsMember({"simulated", "threaded"}));
    cmd->add_option("--workers", opt.workers,
                    "Thread cap in threaded mode (0: one per slice)");
    cmd->add_option("--max-iter", opt.max_iter, "Iteration cap (0: default)");
}

timepar::WindowConfig build_window_config(const ModelOptions& model,
                                          const ParallelOptions& par) {
    timepar::WindowConfig cfg;
    cfg.problem = build_problem(model);
    cfg.scheme = timepar::parse_scheme(model.scheme);
    cfg.y0 = build_state(model);
    cfg.dt = model.dt;
    cfg.steps = model.steps;
    cfg.substeps = par.substeps;
    cfg.window = par.window;
    cfg.variant = timepar::parse_variant(par.variant);
    cfg.mode = timepar::parse_exec_mode(par.mode);
    cfg.workers = par.workers;
    cfg.max_iterations = par.max_iter;
    return cfg;
}

int cmd_parallel(const ModelOptions& model, const ParallelOptions& par,
                 const std::string& out, const std::string& iters_out,
                 const std::string& summary_path, bool hex, const std::string& cmdline) {
    const timepar::WindowConfig cfg = build_window_config(model, par);
    timepar::validate(cfg);
    const timepar::WindowRun run = timepar::run_window(cfg);
    if (!out.empty()) timepar::write_trajectory_csv(out, run.accepted, hex);
    if (!iters_out.empty()) timepar::write_iteration_log_csv(iters_out, run.iterations, hex);

    const timepar::SweepRow row = timepar::summarize(run.iterations, cfg);

    double verify_max = 0.0;
    if (par.verify) {
        const timepar::Trajectory reference = timepar::integrate_sequential(
            cfg.problem, cfg.scheme, cfg.y0, cfg.dt, cfg.steps, cfg.substeps);
        const std::vector<double> err =
            timepar::verify_against_sequential(run.accepted, reference);
        for (double e : err) verify_max = std::max(verify_max, e);
    }

    Summary summary;
    summary.emplace_back("command", "parallel");
    append_model_summary(summary, model);
    summary.emplace_back("substeps", std::to_string(par.substeps));
    summary.emplace_back("window", std::to_string(par.window));
    summary.emplace_back("variant", par.variant);
    summary.emplace_back("exec", par.mode);
    summary.emplace_back("workers", std::to_string(par.workers));
    summary.emplace_back("slices", std::to_string(cfg.slices()));
    summary.emplace_back("iterations", std::to_string(row.iterations));
    summary.emplace_back("mean_converged", timepar::format_double(row.mean_converged));
    summary.emplace_back("cost_factor", timepar::format_double(row.cost_factor));
    summary.emplace_back("predict_seconds",
                         timepar::format_double(run.timings.predict_seconds));
    summary.emplace_back("correct_seconds",
                         timepar::format_double(run.timings.correct_seconds));
    if (par.verify)
        summary.emplace_back("verify_max_err", timepar::format_double(verify_max));
    if (!out.empty()) summary.emplace_back("trajectory_out", out);
    if (!iters_out.empty()) summary.emplace_back("iterations_out", iters_out);
    finish_summary(std::move(summary), summary_path, cmdline);

    if (par.verify && verify_max > par.verify_tol) {
        std::cerr << "verification failed: max boundary error "
                  << timepar::format_double(verify_max) << " exceeds tolerance "
                  << timepar::format_double(par.verify_tol) << "\n";
        return exit_verify;
    }
    return exit_ok;
}

int cmd_sweep(const ModelOptions& model, const ParallelOptions& par,
              std::vector<std::size_t> windows, const std::string& out,
              const std::string& summary_path, bool hex, const std::string& cmdline) {
    if (windows.empty())
        throw timepar::config_error("sweep requires at least one window size");
    std::vector<timepar::SweepRow> rows;
    double total_seconds = 0.0;
    for (std::size_t p : windows) {
        ParallelOptions one = par;
        one.window = p;
        timepar::WindowConfig cfg = build_window_config(model, one);
        timepar::validate(cfg);
        const timepar::WindowRun run = timepar::run_window(cfg);
        rows.push_back(timepar::summarize(run.iterations, cfg));
        total_seconds += run.timings.predict_seconds + run.timings.correct_seconds;
        std::cerr << "P=" << p << " k=" << rows.back().iterations << "\n";
    }
    if (!out.empty()) timepar::write_sweep_csv(out, rows, hex);

    Summary summary;
    summary.emplace_back("command", "sweep");
    append_model_summary(summary, model);
    summary.emplace_back("substeps", std::to_string(par.substeps));
    summary.emplace_back("variant", par.variant);
    std::string plist;
    for (std::size_t i = 0; i < windows.size(); ++i) {
        if (i) plist += ' ';
        plist += std::to_string(windows[i]);
    }
    summary.emplace_back("windows", plist);
    summary.emplace_back("rows", std::to_string(rows.size()));
    summary.emplace_back("wall_seconds", timepar::format_double(total_seconds));
    if (!out.empty()) summary.emplace_back("sweep_out", out);
    finish_summary(std::move(summary), summary_path, cmdline);
    return exit_ok;
}

int cmd_fit(const std::string& in, std::size_t substeps, const std::string& residuals_out,
            const std::string& summary_path, bool hex, const std::string& cmdline) {
    const std::vector<timepar::SweepRow> rows = timepar::read_sweep_csv(in);
    const timepar::FitParams fit = timepar::fit_ab(rows, substeps);

    if (!residuals_out.empty()) {
        std::ostringstream res;
        res << "P,I_over_j,fitted,residual\n";
        for (const timepar::SweepRow& row : rows) {
            const double y = row.cost_factor / double(substeps);
            const double fitted = fit.a * double(row.window) + fit.b;
            res << row.window << ',' << timepar::format_double(y, hex) << ','
                << timepar::format_double(fitted, hex) << ','
                << timepar::format_double(y - fitted, hex) << '\n';
        }
        timepar::write_text_atomic(residuals_out, res.str());
    }

    Summary summary;
    summary.emplace_back("command", "fit");
    summary.emplace_back("in", in);
    summary.emplace_back("substeps", std::to_string(substeps));
    summary.emplace_back("rows", std::to_string(rows.size()));
    summary.emplace_back("a", timepar::format_double(fit.a, hex));
    summary.emplace_back("b", timepar::format_double(fit.b, hex));
    summary.emplace_back("rss", timepar::format_double(fit.rss, hex));
    if (!residuals_out.empty()) summary.emplace_back("residuals_out", residuals_out);
    finish_summary(std::move(summary), summary_path, cmdline);
    return exit_ok;
}

int cmd_speedup(double a, double b, std::size_t substeps, double tp, double tc,
                std::size_t pmax, const std::string& in, const std::string& out,
                const std::string& summary_path, bool hex, const std::string& cmdline) {
    if (!in.empty()) {
        const std::vector<timepar::SweepRow> rows = timepar::read_sweep_csv(in);
        const timepar::FitParams fit = timepar::fit_ab(rows, substeps);
        a = fit.a;
        b = fit.b;
    }
    timepar::SpeedupInputs inputs;
    inputs.a = a;
    inputs.b = b;
    inputs.substeps = substeps;
    inputs.predict_cost = tp;
    inputs.correct_cost = tc;

    const timepar::OptimalWindow opt = timepar::optimal_window(inputs);
    if (!out.empty()) {
        std::vector<std::pair<std::size_t, double>> curve;
        curve.reserve(pmax + 1);
        for (std::size_t p = 0; p <= pmax; ++p)
            curve.emplace_back(p, timepar::speedup(inputs, p));
        timepar::write_speedup_csv(out, curve, hex);
    }

    Summary summary;
    summary.emplace_back("command", "speedup");
    summary.emplace_back("a", timepar::format_double(a, hex));
    summary.emplace_back("b", timepar::format_double(b, hex));
    summary.emplace_back("substeps", std::to_string(substeps));
    summary.emplace_back("predict_cost", timepar::format_double(tp, hex));
    summary.emplace_back("correct_cost", timepar::format_double(tc, hex));
    summary.emplace_back("p_star", std::to_string(opt.p_star));
    summary.emplace_back("s_at_p_star", timepar::format_double(opt.s_at_p_star, hex));
    summary.emplace_back("p_continuous", timepar::format_double(opt.p_continuous, hex));
    summary.emplace_back("bound", timepar::format_double(opt.bound, hex));
    if (!out.empty()) summary.emplace_back("curve_out", out);
    finish_summary(std::move(summary), summary_path, cmdline);
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cmdline = joined_cmdline(argc, argv);

    CLI::App app{"Time-parallel integration toolkit for almost-integrable systems"};
    app.require_subcommand(1);
    bool hex = false;
    app.add_flag("--hex-floats", hex, "Emit floating-point fields as C99 hex");

    ModelOptions model;
    std::string out, iters_out, summary_path;

    CLI::App* run = app.add_subcommand("run", "Sequential fine integration");
    add_model_options(run, model);
    std::size_t sample_every = 1;
    run->add_option("--sample-every", sample_every, "Keep every k-th fine step");
    run->add_option("--out", out, "Trajectory CSV path");
    run->add_option("--summary", summary_path, "Summary key=value file");

    CLI::App* parallel = app.add_subcommand("parallel", "Windowed predictor-corrector run");
    ParallelOptions par;
    add_model_options(parallel, model);
    add_parallel_options(parallel, par);
    parallel->add_flag("--verify", par.verify,
                       "Compare the accepted solution against the sequential reference");
    parallel->add_option("--verify-tol", par.verify_tol,
                         "Largest acceptable boundary error under --verify");
    parallel->add_option("--out", out, "Accepted trajectory CSV path");
    parallel->add_option("--iters-out", iters_out, "Iteration log CSV path");
    parallel->add_option("--summary", summary_path, "Summary key=value file");

    CLI::App* sweep = app.add_subcommand("sweep", "Run several window sizes");
    std::vector<std::size_t> windows;
    add_model_options(sweep, model);
    add_parallel_options(sweep, par);
    sweep->add_option("--windows", windows, "Window sizes to run")->required();
    sweep->add_option("--out", out, "Sweep CSV path");
    sweep->add_option("--summary", summary_path, "Summary key=value file");

    CLI::App* fit = app.add_subcommand("fit", "Fit I/j = a*P + b to a sweep");
    std::string fit_in, residuals_out;
    std::size_t fit_substeps = 100;
    fit->add_option("--in", fit_in, "Sweep CSV path")->required();
    fit->add_option("--substeps", fit_substeps, "Fine steps per slice used in the sweep");
    fit->add_option("--residuals-out", residuals_out, "Residuals CSV path");
    fit->add_option("--summary", summary_path, "Summary key=value file");

    CLI::App* speed = app.add_subcommand("speedup", "Evaluate the speed-up model");
    double sa = 0.0, sb = 0.0, tp = 10.0, tc = 1.0;
    std::size_t s_substeps = 100, pmax = 500;
    std::string speed_in;
    speed->add_option("--a", sa, "Fitted slope");
    speed->add_option("--b", sb, "Fitted intercept");
    speed->add_option("--in", speed_in, "Fit a and b from this sweep CSV instead");
    speed->add_option("--substeps", s_substeps, "Fine steps per slice (j)");
    speed->add_option("--tp", tp, "Cost of one slice prediction");
    speed->add_option("--tc", tc, "Cost of one slice correction");
    speed->add_option("--pmax", pmax, "Largest window size in the emitted curve");
    speed->add_option("--out", out, "Speed-up curve CSV path");
    speed->add_option("--summary", summary_path, "Summary key=value file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_usage;
    }

    try {
        if (run->parsed())
            return cmd_run(model, sample_every, out, summary_path, hex, cmdline);
        if (parallel->parsed())
            return cmd_parallel(model, par, out, iters_out, summary_path, hex, cmdline);
        if (sweep->parsed())
            return cmd_sweep(model, par, windows, out, summary_path, hex, cmdline);
        if (fit->parsed())
            return cmd_fit(fit_in, fit_substeps, residuals_out, summary_path, hex, cmdline);
        if (speed->parsed())
            return cmd_speedup(sa, sb, s_substeps, tp, tc, pmax, speed_in, out,
                               summary_path, hex, cmdline);
        std::cerr << "no subcommand selected\n";
        return exit_usage;
    } catch (const timepar::blowup_error& e) {
        std::cerr << "integration blow-up: " << e.what() << "\n";
        return exit_blowup;
    } catch (const timepar::nonconvergence_error& e) {
        std::cerr << "window did not converge: " << e.what() << "\n";
        return exit_cap;
    } catch (const timepar::degenerate_fit_error& e) {
        std::cerr << "degenerate fit: " << e.what() << "\n";
        return exit_fit;
    } catch (const timepar::model_domain_error& e) {
        std::cerr << "model domain error: " << e.what() << "\n";
        return exit_usage;
    } catch (const timepar::config_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
